"""Vibronic master equation of the bichromatically driven ion.

Units: hbar = 1 and times are measured in 1/Omega1 when ``omega1 = 1``.  The
post-RWA interaction is

    H' = Omega1 exp(-eta^2/2) (sigma_21 F + sigma_12 F^dagger)

with F built from the two (i eta)-power series, and spontaneous emission acts
through the dissipator (Gamma/2)(2 sigma_12 rho' sigma_21 - sigma_22 rho - rho sigma_22).
"""

import functools
import logging
import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import _kernels
from .fock import FockOperator, FockVector, VibronicDensityMatrix, fidelity, fock_state, position_generator
from .nlcs import PARITIES, NlcsParams, build_nlcs

log = logging.getLogger(__name__)

RECOIL_MODELS = ("none", "isotropic", "dipole")


@dataclass(frozen=True)
class DriveParams:
    """Drive and dissipation settings.

    ``omega0`` and ``gamma`` are in the same units as ``omega1`` (default 1).
    ``recoil`` picks the emission-angle density on y in [-1, 1]:
    ``none`` (no recoil kick), ``isotropic`` (1/2) or ``dipole`` (3/8 (1 + y^2)).
    """

    eta: float
    omega0: float
    omega1: float = 1.0
    gamma: float = 0.1
    recoil: str = "none"
    dim: int = 20
    quadrature_order: int = 8

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if not self.omega1 > 0:
            raise ValueError(f"omega1 must be positive, got {self.omega1}")
        if not self.gamma >= 0:
            raise ValueError(f"gamma must be nonnegative, got {self.gamma}")
        if self.recoil not in RECOIL_MODELS:
            raise ValueError(f"recoil must be one of {RECOIL_MODELS}, got {self.recoil!r}")
        if int(self.dim) != self.dim or self.dim < 4:
            raise ValueError(f"dim must be an integer >= 4, got {self.dim}")
        if self.quadrature_order < 2:
            raise ValueError(f"quadrature order must be >= 2, got {self.quadrature_order}")
        if not math.isfinite(self.alpha):
            raise ValueError("omega0 / (omega1 eta^2) is not finite")

    @property
    def omega_ratio(self):
        return self.omega0 / self.omega1

    @property
    def alpha(self):
        return self.omega0 / (self.omega1 * self.eta**2)

    @property
    def coupling(self):
        """Omega1 exp(-eta^2/2), the prefactor of sigma_21 F."""
        return self.omega1 * math.exp(-0.5 * self.eta**2)

    def nlcs_params(self, parity):
        """Parameters of the analytic stationary state on the same truncation."""
        return NlcsParams.trapped_ion(self.eta, self.omega_ratio, parity, self.dim)


@dataclass(frozen=True, eq=False)
class FHatOperator(FockOperator):
    """F-hat; nonzero only on the main diagonal and the second superdiagonal."""

    def diagonal(self):
        return np.diag(self.matrix).copy()

    def upper_band(self):
        """<n|F|n+2> for n = 0..dim-3."""
        return np.diag(self.matrix, 2).copy()


def build_f_hat(params):
    """Assemble F-hat on ``params.dim`` levels from its two series.

    <n|F|n>   = (Omega0/Omega1) sum_k (i eta)^(2k) / (k!)^2 n!/(n-k)!
    <n|F|n+2> = sum_k (i eta)^(2k+2) / (k!(k+2)!) sqrt((n+1)(n+2)) n!/(n-k)!

    Both series end at k = n on the truncated space.
    """
    diag, upper = _kernels.f_hat_bands(params.dim, float(params.eta), float(params.omega_ratio))
    return FHatOperator(np.diag(diag) + np.diag(upper, 2))


def hamiltonian(params):
    """Full 2*dim matrix of H' (row index = level * dim + n)."""
    f = build_f_hat(params).matrix
    d = params.dim
    h = np.zeros((2 * d, 2 * d), dtype=complex)
    h[d:, :d] = params.coupling * f
    h[:d, d:] = params.coupling * f.conj().T
    return h


def dark_state_by_back_substitution(fhat, parity="even"):
    """Solve F|zeta> = 0 row by row: c_{n+2} = -F[n, n] c_n / F[n, n+2].

    The seed is c_0 = 1 (even) or c_1 = 1 (odd).  The top two rows of the
    truncated system are left unsatisfied, as they must be.
    """
    if parity not in PARITIES:
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    d = fhat.dim
    diag, upper = fhat.diagonal(), fhat.upper_band()
    c = np.zeros(d, dtype=complex)
    start = 0 if parity == "even" else 1
    c[start] = 1.0
    for n in range(start, d - 2, 2):
        c[n + 2] = -diag[n] * c[n] / upper[n]
    return FockVector(c / np.linalg.norm(c), {"parity": parity, "method": "back_substitution"})


# ---------------------------------------------------------------------------
# recoil
# ---------------------------------------------------------------------------

def _density(recoil, y):
    if recoil == "isotropic":
        return np.full_like(y, 0.5)
    return 0.375 * (1.0 + y * y)


@functools.lru_cache(maxsize=32)
def recoil_unitaries(dim, eta, recoil, order=8):
    """Quadrature nodes of the recoil average as (unitaries, weights).

    The unitaries are exp(i eta y (a + a^dagger)) at the Gauss-Legendre nodes
    y; the weights already include the emission-angle density, so they sum
    to one.  ``recoil == "none"`` gives an empty set, meaning rho' = rho.
    """
    if recoil not in RECOIL_MODELS:
        raise ValueError(f"recoil must be one of {RECOIL_MODELS}, got {recoil!r}")
    if order < 2:
        raise ValueError(f"quadrature order must be >= 2, got {order}")
    if recoil == "none":
        return np.zeros((0, dim, dim), dtype=complex), np.zeros(0)
    y, w = np.polynomial.legendre.leggauss(order)
    w = w * _density(recoil, y)
    evals, evecs = np.linalg.eigh(position_generator(dim).matrix.real)
    phases = np.exp(1j * eta * np.outer(y, evals))
    unitaries = np.einsum("ij,qj,kj->qik", evecs, phases, evecs)
    unitaries.setflags(write=False)
    w.setflags(write=False)
    return unitaries, w


def recoil_average(rho_vib, eta, recoil="none", order=8):
    """rho' = integral over y of W(y) exp(i eta y x) rho exp(-i eta y x), x = a + a^dagger."""
    rho_vib = np.asarray(rho_vib, dtype=complex)
    unitaries, weights = recoil_unitaries(rho_vib.shape[0], float(eta), recoil, int(order))
    if recoil == "none":
        return rho_vib.copy()
    return np.einsum("q,qij,jk,qlk->il", weights, unitaries, rho_vib, unitaries.conj())


# ---------------------------------------------------------------------------
# right-hand side
# ---------------------------------------------------------------------------

class VibronicGenerator:
    """Precomputed pieces of d(rho)/dt for one set of drive parameters."""

    def __init__(self, params):
        self.params = params
        self.fmat = np.ascontiguousarray(build_f_hat(params).matrix, dtype=complex)
        u, w = recoil_unitaries(params.dim, float(params.eta), params.recoil, params.quadrature_order)
        self.unitaries = np.ascontiguousarray(u)
        self.weights = np.ascontiguousarray(w)
        self.coupling = float(params.coupling)
        self.gamma = float(params.gamma)

    def __call__(self, blocks, out=None):
        if out is None:
            out = np.empty_like(blocks)
        return _kernels.vibronic_rhs(blocks, self.fmat, self.coupling, self.gamma,
                                     self.unitaries, self.weights, out)


@functools.lru_cache(maxsize=16)
def _generator(params):
    return VibronicGenerator(params)


def lindblad_rhs(rho, params):
    """d(rho)/dt as a (generally traceless, non-positive) block matrix."""
    if rho.dim != params.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {params.dim}")
    blocks = np.ascontiguousarray(rho.blocks, dtype=complex)
    return VibronicDensityMatrix(_generator(params)(blocks))


# ---------------------------------------------------------------------------
# steady state by Dormand-Prince 5(4)
# ---------------------------------------------------------------------------

_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


@dataclass
class SteadyStateDiagnostics:
    converged: bool
    t: float
    steps: int
    rejected_steps: int
    rhs_norm: float
    trace_drift: float
    hermiticity_defect: float
    parity: str | None
    parity_leakage: float | None
    min_eigenvalue: float
    wall_time: float
    message: str

    def as_dict(self):
        return asdict(self)


def _hermitian_part(y):
    # (rho^dagger)[a, b] = rho[b, a]^dagger
    adj = y.transpose(1, 0, 3, 2).conj()
    defect = float(np.max(np.abs(y - adj)))
    return 0.5 * (y + adj), defect


def _initial_parity(rho):
    for parity in PARITIES:
        if rho.parity_leakage(parity) == 0.0:
            return parity
    return None


def evolve_to_steady_state(rho0, params, tol=1e-8, t_max=2e4, rtol=1e-8, atol=1e-10,
                           max_steps=1_000_000, checkpoint_every=250):
    """Integrate the master equation until ||d(rho)/dt||_F < ``tol``.

    Convergence is judged only by the Frobenius norm of the right-hand side.
    Reaching ``t_max`` (or ``max_steps``) returns the last state with
    ``diagnostics.converged = False`` instead of raising.

    Returns
    -------
    (VibronicDensityMatrix, SteadyStateDiagnostics)
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if rho0.dim != params.dim:
        raise ValueError(f"dimension mismatch: {rho0.dim} vs {params.dim}")
    start = time.perf_counter()
    rhs = _generator(params)
    y = np.array(rho0.blocks, dtype=complex, order="C")
    trace0 = np.trace(y[0, 0]) + np.trace(y[1, 1])
    parity = _initial_parity(rho0)
    leak = 0.0 if parity else None
    herm_defect = 0.0
    drift = 0.0
    min_eig = rho0.min_eigenvalue()

    k = [np.empty_like(y) for _ in range(7)]
    rhs(y, k[0])
    rhs_norm = float(np.linalg.norm(k[0]))
    t, h = 0.0, min(1.0, 0.01 / max(rhs_norm, 1e-300))
    steps = rejected = 0
    stage = np.empty_like(y)
    message = "converged"

    while rhs_norm >= tol:
        if t >= t_max or steps >= max_steps:
            message = f"not converged: ||drho/dt|| = {rhs_norm:.3e} at t = {t:.4g}"
            break
        h = min(h, t_max - t)
        for i in range(1, 7):
            np.copyto(stage, y)
            for j, a in enumerate(_A[i]):
                if a:
                    stage += (h * a) * k[j]
            rhs(stage, k[i])
        # stage now holds the 5th-order solution (row 7 equals the b weights)
        err = sum((h * e) * k[j] for j, e in enumerate(_E) if e)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(stage))
        err_norm = float(np.sqrt(np.mean(np.abs(err / scale) ** 2)))
        if err_norm <= 1.0:
            t += h
            steps += 1
            y, defect = _hermitian_part(stage)
            herm_defect = max(herm_defect, defect)
            tr = np.trace(y[0, 0]) + np.trace(y[1, 1])
            drift = max(drift, abs(tr - trace0))
            if parity is not None:
                leak = max(leak, VibronicDensityMatrix(y).parity_leakage(parity))
            if steps % checkpoint_every == 0:
                min_eig = min(min_eig, VibronicDensityMatrix(y).min_eigenvalue())
            rhs(y, k[0])
            rhs_norm = float(np.linalg.norm(k[0]))
        else:
            rejected += 1
        factor = 5.0 if err_norm == 0 else min(5.0, max(0.2, 0.9 * err_norm ** -0.2))
        h *= factor

    rho = VibronicDensityMatrix(y)
    min_eig = min(min_eig, rho.min_eigenvalue())
    diag = SteadyStateDiagnostics(
        converged=rhs_norm < tol, t=t, steps=steps, rejected_steps=rejected, rhs_norm=rhs_norm,
        trace_drift=float(drift), hermiticity_defect=herm_defect, parity=parity,
        parity_leakage=leak, min_eigenvalue=min_eig, wall_time=time.perf_counter() - start,
        message=message)
    log.debug("steady state: %s", diag)
    return rho, diag


def ground_state_start(parity, dim):
    """Ground electronic level with the vibrational vacuum (even) or |1> (odd)."""
    if parity not in PARITIES:
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    return VibronicDensityMatrix.product(1, fock_state(0 if parity == "even" else 1, dim))


@dataclass
class VerificationReport:
    parity: str
    eta: float
    omega_ratio: float
    alpha: float
    gamma: float
    recoil: str
    dim: int
    fidelity: float
    ground_population: float
    diagnostics: SteadyStateDiagnostics

    def as_dict(self):
        d = asdict(self)
        d["diagnostics"] = self.diagnostics.as_dict()
        return d


def verify_steady_state(params, parity="even", tol=1e-8, t_max=2e4):
    """Evolve from the matching start state and compare with the analytic state."""
    rho, diag = evolve_to_steady_state(ground_state_start(parity, params.dim), params, tol=tol, t_max=t_max)
    target = build_nlcs(params.nlcs_params(parity))
    return VerificationReport(
        parity=parity, eta=params.eta, omega_ratio=params.omega_ratio, alpha=params.alpha,
        gamma=params.gamma, recoil=params.recoil, dim=params.dim,
        fidelity=fidelity(rho, target, 1), ground_population=rho.level_population(1),
        diagnostics=diag)
