"""Hot numeric kernels, each in a numba and a pure-numpy flavour.

The public names (``laguerre_table``, ``f_hat_bands``, ``vibronic_rhs``) are
bound at import time to the numba versions unless the environment variable
``TRAPPED_NLCS_NUMBA`` is set to ``0`` (or numba is not importable).  Both
flavours stay importable under ``*_numpy`` / ``*_numba`` so the benchmark and
the tests can compare them directly.
"""

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    numba = None


def _flag_enabled():
    value = os.environ.get("TRAPPED_NLCS_NUMBA", "1").strip().lower()
    return value not in ("0", "false", "no", "off")


HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and _flag_enabled()


# ---------------------------------------------------------------------------
# associated Laguerre polynomials L_n^m(x), n = 0..nmax
# ---------------------------------------------------------------------------

def laguerre_table_numpy(nmax, m, x):
    out = np.empty(nmax + 1)
    out[0] = 1.0
    if nmax == 0:
        return out
    out[1] = 1.0 + m - x
    for n in range(1, nmax):
        # (n+1) L_{n+1} = (2n+1+m-x) L_n - (n+m) L_{n-1}
        out[n + 1] = ((2 * n + 1 + m - x) * out[n] - (n + m) * out[n - 1]) / (n + 1)
    return out


# ---------------------------------------------------------------------------
# F-hat matrix bands: <n|F|n> and <n|F|n+2>
# ---------------------------------------------------------------------------

def f_hat_bands_numpy(dim, eta, ratio):
    """Series sums for the diagonal and the second superdiagonal of F-hat.

    diag[n]   = ratio * sum_k (-eta^2)^k / (k!)^2 * n!/(n-k)!
    upper[n]  = sum_k (-1)^(k+1) eta^(2k+2) / (k!(k+2)!) * sqrt((n+1)(n+2)) n!/(n-k)!

    The falling factorial n!/(n-k)! is accumulated term by term; the series
    terminates at k = n because a^k annihilates |n> for k > n.
    """
    x = eta * eta
    diag = np.zeros(dim)
    upper = np.zeros(max(dim - 2, 0))
    for n in range(dim):
        term = 1.0  # (-x)^k n!/(n-k)! / (k!)^2 at k = 0
        total = term
        for k in range(n):
            term *= -x * (n - k) / ((k + 1) * (k + 1))
            total += term
        diag[n] = ratio * total
    for n in range(dim - 2):
        term = -x / 2.0  # (-1)^(k+1) x^(k+1) n!/(n-k)! / (k!(k+2)!) at k = 0
        total = term
        for k in range(n):
            term *= -x * (n - k) / ((k + 1) * (k + 3))
            total += term
        upper[n] = total * np.sqrt((n + 1.0) * (n + 2.0))
    return diag, upper


# ---------------------------------------------------------------------------
# vibronic master-equation right-hand side, block form
# ---------------------------------------------------------------------------

def _recoil_numpy(rho22, unitaries, weights):
    if unitaries.shape[0] == 0:
        return rho22
    out = np.zeros_like(rho22)
    for q in range(unitaries.shape[0]):
        u = unitaries[q]
        out += weights[q] * (u @ rho22 @ u.conj().T)
    return out


def vibronic_rhs_numpy(rho, fmat, coupling, gamma, unitaries, weights, out):
    """Write d(rho)/dt into ``out``.

    ``rho`` has shape (2, 2, dim, dim); block [a, b] is (a+1| rho |b+1) with
    level 1 the electronic ground state.  The Hamiltonian is
    coupling * (sigma_21 F + sigma_12 F^dagger).
    """
    r11, r12, r21, r22 = rho[0, 0], rho[0, 1], rho[1, 0], rho[1, 1]
    fdag = fmat.conj().T
    g = -1j * coupling
    out[0, 0] = g * (fdag @ r21 - r12 @ fmat) + gamma * _recoil_numpy(r22, unitaries, weights)
    out[0, 1] = g * (fdag @ r22 - r11 @ fdag) - 0.5 * gamma * r12
    out[1, 0] = g * (fmat @ r11 - r22 @ fmat) - 0.5 * gamma * r21
    out[1, 1] = g * (fmat @ r12 - r21 @ fdag) - gamma * r22
    return out


if HAVE_NUMBA:
    laguerre_table_numba = numba.njit(cache=True)(laguerre_table_numpy)
    f_hat_bands_numba = numba.njit(cache=True)(f_hat_bands_numpy)

    @numba.njit(cache=True)
    def vibronic_rhs_numba(rho, fmat, coupling, gamma, unitaries, weights, out):
        dim = rho.shape[2]
        r11 = np.ascontiguousarray(rho[0, 0])
        r12 = np.ascontiguousarray(rho[0, 1])
        r21 = np.ascontiguousarray(rho[1, 0])
        r22 = np.ascontiguousarray(rho[1, 1])
        fdag = np.ascontiguousarray(fmat.conj().T)
        g = -1j * coupling
        if unitaries.shape[0] == 0:
            recoil = r22
        else:
            recoil = np.zeros((dim, dim), dtype=np.complex128)
            for q in range(unitaries.shape[0]):
                u = np.ascontiguousarray(unitaries[q])
                udag = np.ascontiguousarray(u.conj().T)
                recoil += weights[q] * (u @ (r22 @ udag))
        out[0, 0] = g * (fdag @ r21 - r12 @ fmat) + gamma * recoil
        out[0, 1] = g * (fdag @ r22 - r11 @ fdag) - 0.5 * gamma * r12
        out[1, 0] = g * (fmat @ r11 - r22 @ fmat) - 0.5 * gamma * r21
        out[1, 1] = g * (fmat @ r12 - r21 @ fdag) - gamma * r22
        return out

else:  # pragma: no cover
    laguerre_table_numba = None
    f_hat_bands_numba = None
    vibronic_rhs_numba = None


if USE_NUMBA:
    laguerre_table = laguerre_table_numba
    f_hat_bands = f_hat_bands_numba
    vibronic_rhs = vibronic_rhs_numba
else:
    laguerre_table = laguerre_table_numpy
    f_hat_bands = f_hat_bands_numpy
    vibronic_rhs = vibronic_rhs_numpy


def backend():
    """Name of the active kernel backend, ``"numba"`` or ``"numpy"``."""
    return "numba" if USE_NUMBA else "numpy"
