"""Truncated Fock-space states and operators, and the vibronic density matrix.

Everything is dense: the dimensions used here stay in the tens to low hundreds.
"""

import math
from dataclasses import dataclass, field

import numpy as np

#: Fraction of the top levels whose population counts as "tail mass".
TAIL_FRACTION = 0.1
#: Tail mass below which a truncation is considered adequate.
TAIL_TOLERANCE = 1e-10

LEVELS = (1, 2)  # electronic ground |1), excited |2)


def _readonly(a, dtype=complex):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


def _check_dim(dim):
    if int(dim) != dim or dim < 1:
        raise ValueError(f"dimension must be a positive integer, got {dim!r}")
    return int(dim)


@dataclass(frozen=True, eq=False)
class FockVector:
    """Pure vibrational state; ``amps[n] = <n|psi>`` for n < dim."""

    amps: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        amps = _readonly(self.amps)
        if amps.ndim != 1 or amps.size == 0:
            raise ValueError("amplitudes must be a nonempty 1-d array")
        object.__setattr__(self, "amps", amps)

    @property
    def dim(self):
        return self.amps.size

    def norm(self):
        return float(np.linalg.norm(self.amps))

    def normalize(self):
        nrm = self.norm()
        if nrm == 0:
            raise ValueError("cannot normalize the zero vector")
        return FockVector(self.amps / nrm, dict(self.meta))

    @property
    def probabilities(self):
        return np.abs(self.amps) ** 2

    @property
    def tail_mass(self):
        """Population in the top 10% of levels (at least one level)."""
        top = max(1, math.ceil(TAIL_FRACTION * self.dim))
        p = self.probabilities
        return float(p[-top:].sum() / p.sum())

    @property
    def truncation_ok(self):
        return self.tail_mass < TAIL_TOLERANCE

    def parity_masses(self):
        """Population on (even, odd) levels."""
        p = self.probabilities
        return float(p[0::2].sum()), float(p[1::2].sum())

    def inner(self, other):
        """<self|other>."""
        _same_dim(self.dim, other.dim)
        return complex(np.vdot(self.amps, other.amps))

    def __repr__(self):
        return f"FockVector(dim={self.dim}, tail_mass={self.tail_mass:.3e})"


def fock_state(n, dim):
    """Number state |n> in a space of dimension ``dim``."""
    dim = _check_dim(dim)
    if not 0 <= n < dim:
        raise ValueError(f"level {n} outside space of dimension {dim}")
    amps = np.zeros(dim, dtype=complex)
    amps[n] = 1.0
    return FockVector(amps)


def _same_dim(a, b):
    if a != b:
        raise ValueError(f"dimension mismatch: {a} vs {b}")


@dataclass(frozen=True, eq=False)
class FockOperator:
    """Operator on the truncated oscillator space, stored as a dense matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _readonly(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator matrix must be square, got shape {m.shape}")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self):
        return self.matrix.shape[0]

    def dag(self):
        return FockOperator(self.matrix.conj().T)

    def __matmul__(self, other):
        if isinstance(other, FockOperator):
            _same_dim(self.dim, other.dim)
            return FockOperator(self.matrix @ other.matrix)
        if isinstance(other, FockVector):
            return apply_operator(self, other)
        return NotImplemented

    def __add__(self, other):
        _same_dim(self.dim, other.dim)
        return FockOperator(self.matrix + other.matrix)

    def __sub__(self, other):
        _same_dim(self.dim, other.dim)
        return FockOperator(self.matrix - other.matrix)

    def __mul__(self, scalar):
        return FockOperator(scalar * self.matrix)

    __rmul__ = __mul__

    def __pow__(self, k):
        return FockOperator(np.linalg.matrix_power(self.matrix, k))


def annihilation(dim):
    """Ladder operator a with a[n, n+1] = sqrt(n+1)."""
    dim = _check_dim(dim)
    return FockOperator(np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1))


def creation(dim):
    return annihilation(dim).dag()


def number(dim):
    dim = _check_dim(dim)
    return FockOperator(np.diag(np.arange(dim, dtype=float)))


def identity(dim):
    return FockOperator(np.eye(_check_dim(dim)))


def position_generator(dim):
    """a + a^dagger, the generator of recoil displacements."""
    a = annihilation(dim)
    return a + a.dag()


def p_quadrature(dim):
    """p = i (a^dagger - a) / sqrt(2)."""
    a = annihilation(dim)
    return (1j / math.sqrt(2.0)) * (a.dag() - a)


def apply_operator(op, psi):
    """Return ``op |psi>``; nothing is renormalized."""
    _same_dim(op.dim, psi.dim)
    return FockVector(op.matrix @ psi.amps)


def expectation(op, psi):
    """<psi| op |psi> for a normalized ``psi``."""
    _same_dim(op.dim, psi.dim)
    return complex(np.vdot(psi.amps, op.matrix @ psi.amps))


# ---------------------------------------------------------------------------
# vibronic (two-level x oscillator) density matrix
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class VibronicDensityMatrix:
    """Density operator as a 2x2 grid of dim x dim vibrational blocks.

    ``blocks[a, b]`` is (a+1| rho |b+1) where electronic level 1 is the
    ground state and level 2 the excited state.
    """

    blocks: np.ndarray

    def __post_init__(self):
        b = _readonly(self.blocks)
        if b.ndim != 4 or b.shape[:2] != (2, 2) or b.shape[2] != b.shape[3]:
            raise ValueError(f"blocks must have shape (2, 2, dim, dim), got {b.shape}")
        object.__setattr__(self, "blocks", b)

    @property
    def dim(self):
        return self.blocks.shape[2]

    def block(self, i, j):
        """rho_ij with i, j in {1, 2}."""
        return self.blocks[_level_index(i), _level_index(j)]

    @classmethod
    def from_full(cls, full):
        full = np.asarray(full, dtype=complex)
        dim = full.shape[0] // 2
        return cls(full.reshape(2, dim, 2, dim).transpose(0, 2, 1, 3))

    @classmethod
    def product(cls, level, psi):
        """|level) (level| (x) |psi><psi|."""
        blocks = np.zeros((2, 2, psi.dim, psi.dim), dtype=complex)
        k = _level_index(level)
        blocks[k, k] = np.outer(psi.amps, psi.amps.conj())
        return cls(blocks)

    def full(self):
        """The 2*dim square matrix, row index = level * dim + n."""
        d = self.dim
        return self.blocks.transpose(0, 2, 1, 3).reshape(2 * d, 2 * d)

    def trace(self):
        return complex(np.trace(self.blocks[0, 0]) + np.trace(self.blocks[1, 1]))

    def hermiticity_defect(self):
        f = self.full()
        return float(np.max(np.abs(f - f.conj().T)))

    def min_eigenvalue(self):
        f = self.full()
        return float(np.linalg.eigvalsh(0.5 * (f + f.conj().T))[0])

    def level_population(self, level):
        k = _level_index(level)
        return float(np.trace(self.blocks[k, k]).real)

    def parity_leakage(self, parity):
        """Largest |entry| coupling to a Fock level of the wrong parity."""
        wrong = 1 if parity == "even" else 0
        mask = np.zeros(self.dim, dtype=bool)
        mask[wrong::2] = True
        b = self.blocks
        return float(max(np.abs(b[..., mask, :]).max(initial=0.0), np.abs(b[..., :, mask]).max(initial=0.0)))

    def vibrational_state(self):
        """Reduced vibrational density matrix rho_11 + rho_22."""
        return self.blocks[0, 0] + self.blocks[1, 1]


def _level_index(level):
    if level not in LEVELS:
        raise ValueError(f"electronic level must be 1 or 2, got {level!r}")
    return level - 1


def fidelity(rho, target, electronic_level=1):
    """<target| rho_ll |target> for the chosen electronic level."""
    _same_dim(rho.dim, target.dim)
    block = rho.block(electronic_level, electronic_level)
    return float(np.vdot(target.amps, block @ target.amps).real)
