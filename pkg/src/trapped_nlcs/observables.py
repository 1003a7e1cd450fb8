"""Nonclassicality diagnostics for pure vibrational states."""

from dataclasses import dataclass

import numpy as np

#: Population allowed on the "wrong" parity before a state counts as mixed parity.
PARITY_TOLERANCE = 1e-14


def occupation_distribution(psi):
    """p(n) = |<n|psi>|^2."""
    return np.abs(psi.amps) ** 2


def mean_photon_number(psi):
    pn = occupation_distribution(psi)
    return float(np.dot(np.arange(psi.dim), pn))


def _number_moments(psi):
    pn = occupation_distribution(psi)
    n = np.arange(psi.dim, dtype=float)
    mean = float(np.dot(n, pn))
    var = float(np.dot((n - mean) ** 2, pn))
    return mean, var


def _a_squared(c):
    n = np.arange(c.size - 2, dtype=float)
    return complex(np.vdot(c[:-2], np.sqrt((n + 1.0) * (n + 2.0)) * c[2:]))


def quadrature_variance_p(psi):
    """Variance of p = i(a^dagger - a)/sqrt(2) for a state of definite parity.

    Definite parity makes <a> vanish, leaving
    1/2 [1 + 2<a^dagger a> - 2 Re<a^2>].  Taking the real part keeps the
    expression exact for complex amplitudes too.

    Raises
    ------
    ValueError
        If ``psi`` has population on both even and odd levels.
    """
    pn = occupation_distribution(psi)
    even, odd = pn[0::2].sum(), pn[1::2].sum()
    if min(even, odd) > PARITY_TOLERANCE * (even + odd):
        raise ValueError(f"state has mixed parity (even {even:.3e}, odd {odd:.3e}); <a> != 0")
    mean_n = float(np.dot(np.arange(psi.dim), pn))
    return 0.5 * (1.0 + 2.0 * mean_n - 2.0 * _a_squared(psi.amps).real)


def mandel_q(psi):
    """Mandel q = (<n^2> - <n>^2) / <n> - 1.

    Raises
    ------
    ValueError
        For the vacuum, where <n> = 0 and q is undefined.
    """
    mean, var = _number_moments(psi)
    if mean <= 0.0:
        raise ValueError("Mandel q is undefined for <n> = 0")
    return var / mean - 1.0


@dataclass(frozen=True, eq=False)
class ObservableReport:
    mean_n: float
    var_n: float
    mandel_q: float | None
    delta_p_sq: float | None
    pn: np.ndarray

    @classmethod
    def from_state(cls, psi):
        """Collect every diagnostic; undefined ones (vacuum q, mixed-parity p) are None."""
        mean, var = _number_moments(psi)
        q = var / mean - 1.0 if mean > 0 else None
        try:
            dp = quadrature_variance_p(psi)
        except ValueError:
            dp = None
        pn = occupation_distribution(psi)
        pn.setflags(write=False)
        return cls(mean, var, q, dp, pn)

    def as_dict(self):
        return {"mean_n": self.mean_n, "var_n": self.var_n, "mandel_q": self.mandel_q,
                "delta_p_sq": self.delta_p_sq, "pn": self.pn.tolist()}
