"""Even and odd nonlinear coherent states, and the ordinary even/odd coherent states.

An even (odd) nonlinear coherent state solves F(n) a^2 |psi> = alpha |psi> with
support on even (odd) Fock levels.  The amplitudes follow from

    <n+2|psi> = alpha <n|psi> / (F(n) sqrt((n+1)(n+2)))

and are accumulated in log-magnitude/phase form so that (2n)! never overflows.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .fock import TAIL_TOLERANCE, FockVector
from .special_functions import NonlinearityProfile, SingularNonlinearityError

PARITIES = ("even", "odd")


@dataclass(frozen=True, eq=False)
class NlcsParams:
    alpha: complex
    profile: NonlinearityProfile
    parity: str = "even"
    dim: int = 32

    def __post_init__(self):
        if self.parity not in PARITIES:
            raise ValueError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError(f"dim must be an integer >= 2, got {self.dim!r}")
        if not cmath.isfinite(complex(self.alpha)):
            raise ValueError(f"alpha must be finite, got {self.alpha!r}")
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "dim", int(self.dim))

    @classmethod
    def trapped_ion(cls, eta, omega_ratio, parity="even", dim=32):
        """Parameters of the ion's stationary state: alpha = (Omega0/Omega1) / eta^2."""
        return cls(omega_ratio / eta**2, NonlinearityProfile.trapped_ion(eta, dim), parity, dim)


def _assemble(log_mag, phase, levels, dim, meta):
    if not np.all(np.isfinite(log_mag)):
        k = int(np.flatnonzero(~np.isfinite(log_mag))[0])
        raise SingularNonlinearityError(int(levels[k]), meta.get("eta"), which="F")
    mags = np.exp(log_mag - log_mag.max())
    amps = np.zeros(dim, dtype=complex)
    amps[levels] = mags * phase
    amps /= np.linalg.norm(amps)
    psi = FockVector(amps, meta)
    if not psi.truncation_ok:
        meta["warnings"] = (f"tail mass {psi.tail_mass:.3e} exceeds {TAIL_TOLERANCE:.0e}",)
    meta["tail_mass"] = psi.tail_mass
    return psi


def build_nlcs(params):
    """Normalized even or odd nonlinear coherent state on ``params.dim`` levels.

    Amplitudes are alpha^k / (sqrt(level!) F!!_k) on level = 2k (+1 for odd),
    where F!!_k is F(0)F(2)...F(2k-2) (even) or F(1)F(3)...F(2k-1) (odd).
    Real positive alpha with a positive profile gives real positive amplitudes.

    Raises
    ------
    SingularNonlinearityError
        If a vanishing F(n) makes a coefficient non-finite.
    IndexError
        If the profile is too short for the requested dimension.
    """
    start = 0 if params.parity == "even" else 1
    levels = np.arange(start, params.dim, 2)
    k = np.arange(levels.size)
    meta = {"parity": params.parity, "alpha": params.alpha, "eta": params.profile.eta,
            "profile": params.profile.kind}
    if params.alpha == 0:
        log_mag = np.where(k == 0, 0.0, -np.inf)
        return _assemble(log_mag[:1], np.ones(1), levels[:1], params.dim, meta)
    # products up to F(level-2) are needed, i.e. profile entries < dim - 2
    log_f, sign_f = params.profile.log_products(params.parity, levels.size)
    log_mag = k * math.log(abs(params.alpha)) - 0.5 * gammaln(levels + 1.0) - log_f
    phase = sign_f * np.exp(1j * k * cmath.phase(params.alpha))
    return _assemble(log_mag, phase, levels, params.dim, meta)


def build_even_nlcs(params):
    if params.parity != "even":
        raise ValueError("build_even_nlcs needs parity='even'")
    return build_nlcs(params)


def build_odd_nlcs(params):
    if params.parity != "odd":
        raise ValueError("build_odd_nlcs needs parity='odd'")
    return build_nlcs(params)


def _coherent_pair_state(alpha, dim, parity):
    alpha = complex(alpha)
    start = 0 if parity == "even" else 1
    levels = np.arange(start, dim, 2)
    r2 = abs(alpha) ** 2
    if alpha == 0:
        amps = np.zeros(dim, dtype=complex)
        amps[0] = 1.0
        return FockVector(amps, {"parity": parity, "beta": alpha, "truncation_loss": 0.0})
    # normalization log: cosh r2 = e^{r2}(1 + e^{-2 r2})/2, same for sinh with minus
    sgn = 1.0 if parity == "even" else -1.0
    log_norm = r2 + math.log1p(sgn * math.exp(-2.0 * r2)) - math.log(2.0)
    log_mag = levels * math.log(abs(alpha)) - 0.5 * gammaln(levels + 1.0) - 0.5 * log_norm
    amps = np.zeros(dim, dtype=complex)
    amps[levels] = np.exp(log_mag) * np.exp(1j * levels * cmath.phase(alpha))
    meta = {"parity": parity, "beta": alpha, "truncation_loss": max(0.0, 1.0 - float(np.vdot(amps, amps).real))}
    return FockVector(amps, meta)


def build_ecs(alpha, dim):
    """Even coherent state (|alpha> + |-alpha>) normalized by cosh|alpha|^2.

    The analytic normalization is kept, so the vector norm falls short of one
    by the population beyond the truncation (``meta["truncation_loss"]``).
    """
    return _coherent_pair_state(alpha, dim, "even")


def build_ocs(alpha, dim):
    """Odd coherent state (|alpha> - |-alpha>) normalized by sinh|alpha|^2."""
    if alpha == 0:
        raise ValueError("odd coherent state is undefined at alpha = 0")
    return _coherent_pair_state(alpha, dim, "odd")


def eigen_residual(psi, params):
    """|| F(n) a^2 |psi> - alpha |psi> ||, skipping the top two levels.

    a^2 pulls amplitude down from levels n+2, so rows n = dim-2 and dim-1
    see the truncation and are excluded.
    """
    if psi.dim != params.dim:
        raise ValueError(f"dimension mismatch: {psi.dim} vs {params.dim}")
    c = psi.amps
    n = np.arange(psi.dim - 2)
    f = np.asarray(params.profile.values[: n.size])
    lowered = np.sqrt((n + 1.0) * (n + 2.0)) * c[2:]
    return float(np.linalg.norm(f * lowered - params.alpha * c[:-2]))
