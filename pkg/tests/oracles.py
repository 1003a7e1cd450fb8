"""Reference computations that share no code path with the package."""

import math
from fractions import Fraction

import numpy as np
from scipy.linalg import expm


def laguerre_direct_sum(n, m, x):
    """L_n^m(x) = sum_l C(n+m, n-l) (-x)^l / l!, summed in exact rationals."""
    x = Fraction(x)
    total = sum(Fraction(math.comb(n + m, n - l)) * (-x) ** l / math.factorial(l) for l in range(n + 1))
    return float(total)


def ladder(dim):
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1)


def f_hat_from_powers(dim, eta, ratio):
    """F-hat summed literally from matrix powers of the ladder operators."""
    a = ladder(dim)
    ad = a.T
    f = np.zeros((dim, dim), dtype=complex)
    for k in range(dim):
        adk = np.linalg.matrix_power(ad, k)
        f += (1j * eta) ** (2 * k + 2) / (math.factorial(k) * math.factorial(k + 2)) * (
            adk @ np.linalg.matrix_power(a, k + 2))
        f += ratio * (1j * eta) ** (2 * k) / math.factorial(k) ** 2 * (adk @ np.linalg.matrix_power(a, k))
    return f


def coherent_amplitudes(alpha, dim):
    n = np.arange(dim)
    logfact = np.array([math.lgamma(k + 1) for k in n])
    return np.exp(-abs(alpha) ** 2 / 2 - 0.5 * logfact) * np.power(complex(alpha), n)


def cat_state(alpha, dim, sign):
    """(|alpha> + sign |-alpha>) normalized numerically on a generous space."""
    big = max(dim, 200)
    v = coherent_amplitudes(alpha, big) + sign * coherent_amplitudes(-alpha, big)
    v /= np.linalg.norm(v)
    return v[:dim]


def squeezed_vacuum_closed_form(lam, dim):
    """Amplitudes (1 - lam^2)^(1/4) lam^n sqrt((2n)!) / (2^n n!) on level 2n, real lam."""
    c = np.zeros(dim)
    for n in range((dim + 1) // 2):
        c[2 * n] = lam**n * math.sqrt(math.factorial(2 * n)) / (2**n * math.factorial(n))
    return c * (1 - lam**2) ** 0.25


def squeezed_one_closed_form(lam, dim):
    """Squeezed |1>: (1 - lam^2)^(3/4) lam^n sqrt((2n+1)!) / (2^n n!) on level 2n+1."""
    c = np.zeros(dim)
    for n in range(dim // 2):
        c[2 * n + 1] = lam**n * math.sqrt(math.factorial(2 * n + 1)) / (2**n * math.factorial(n))
    return c * (1 - lam**2) ** 0.75


def squeeze_operator_state(lam, level, dim, work_dim=200):
    """exp(r/2 (a^dag^2 - a^2)) |level> with tanh r = lam, truncated to ``dim``."""
    r = math.atanh(lam)
    a = ladder(work_dim)
    s = expm(0.5 * r * (a.T @ a.T - a @ a))
    return s[:dim, level]
