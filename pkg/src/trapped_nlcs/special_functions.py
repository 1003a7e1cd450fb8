"""Associated Laguerre polynomials and the nonlinearity function F(n)."""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels

#: |L_n^0(eta^2)| (and |L_n^2(eta^2)|) below this is treated as a singularity.
DENOMINATOR_FLOOR = 1e-12

PROFILE_KINDS = ("trapped_ion", "constant", "squeezed_vacuum", "squeezed_first_excited", "custom_table")


class SingularNonlinearityError(ArithmeticError):
    """F(n) hits a zero or a pole inside the requested table range."""

    def __init__(self, n, eta=None, which="L_n^0"):
        self.n = n
        self.eta = eta
        where = f"n={n}" if eta is None else f"n={n}, eta={eta!r}"
        super().__init__(f"{which}(eta^2) vanishes within floor at {where}")


def _check_degree(n, m):
    if int(n) != n or int(m) != m:
        raise ValueError(f"Laguerre indices must be integers, got n={n!r}, m={m!r}")
    if n < 0 or m < 0:
        raise ValueError(f"Laguerre indices must be nonnegative, got n={n}, m={m}")


def laguerre_table(nmax, m, x):
    """Return ``[L_0^m(x), ..., L_nmax^m(x)]`` by the ascending recurrence."""
    _check_degree(nmax, m)
    if x < 0:
        raise ValueError(f"Laguerre argument must be nonnegative, got x={x}")
    return _kernels.laguerre_table(int(nmax), float(m), float(x))


def laguerre(n, m, x):
    """Associated Laguerre polynomial L_n^m(x).

    Uses the three-term recurrence
    ``(k+1) L_{k+1} = (2k+1+m-x) L_k - (k+m) L_{k-1}``, which avoids the
    cancellation of the alternating power sum at large degree.

    Parameters
    ----------
    n, m : int
        Degree and upper index, both nonnegative.
    x : float
        Nonnegative argument.

    Raises
    ------
    ValueError
        If ``n`` or ``m`` is negative or non-integral, or ``x < 0``.
    """
    return float(laguerre_table(n, m, x)[n])


def trapped_ion_F(n, eta, floor=DENOMINATOR_FLOOR):
    """F(n) = L_n^2(eta^2) / [(n+1)(n+2) L_n^0(eta^2)] for the bichromatic drive."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if not eta > 0:
        raise ValueError(f"eta must be positive, got {eta}")
    x = eta * eta
    l0 = laguerre(n, 0, x)
    if abs(l0) < floor:
        raise SingularNonlinearityError(n, eta)
    return laguerre(n, 2, x) / ((n + 1) * (n + 2) * l0)


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class NonlinearityProfile:
    """Tabulated F(n) for n = 0..len-1.

    Cumulative products F(0)F(2)...F(2k-2) and F(1)F(3)...F(2k-1) are kept as
    log-magnitude and sign so that state construction stays O(dim) and never
    overflows.
    """

    values: np.ndarray
    kind: str = "custom_table"
    eta: float | None = None
    _even_log: np.ndarray = field(init=False, repr=False, compare=False)
    _even_sign: np.ndarray = field(init=False, repr=False, compare=False)
    _odd_log: np.ndarray = field(init=False, repr=False, compare=False)
    _odd_sign: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in PROFILE_KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}")
        values = _frozen(self.values)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("profile values must be a nonempty 1-d table")
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise SingularNonlinearityError(bad, self.eta, which="F")
        object.__setattr__(self, "values", values)
        for parity, start in (("even", 0), ("odd", 1)):
            f = values[start::2]
            with np.errstate(divide="ignore"):
                logs = np.concatenate(([0.0], np.cumsum(np.log(np.abs(f)))))
            signs = np.concatenate(([1.0], np.cumprod(np.sign(f))))
            object.__setattr__(self, f"_{parity}_log", _frozen(logs))
            object.__setattr__(self, f"_{parity}_sign", _frozen(signs))

    def __len__(self):
        return self.values.size

    def __getitem__(self, n):
        return self.values[n]

    @classmethod
    def trapped_ion(cls, eta, dim, floor=DENOMINATOR_FLOOR):
        """F(n) of the bichromatically driven ion for n < dim."""
        if not eta > 0:
            raise ValueError(f"eta must be positive, got {eta}")
        x = eta * eta
        nmax = dim - 1
        l0 = laguerre_table(nmax, 0, x)
        l2 = laguerre_table(nmax, 2, x)
        for table, name in ((l0, "L_n^0"), (l2, "L_n^2")):
            small = np.flatnonzero(np.abs(table) < floor)
            if small.size:
                raise SingularNonlinearityError(int(small[0]), eta, which=name)
        n = np.arange(dim)
        return cls(l2 / ((n + 1.0) * (n + 2.0) * l0), kind="trapped_ion", eta=float(eta))

    @classmethod
    def constant(cls, c, dim):
        return cls(np.full(dim, float(c)), kind="constant")

    @classmethod
    def squeezed_vacuum(cls, dim):
        """F(n) = 1/(1+n); the even state is a squeezed vacuum."""
        return cls(1.0 / (1.0 + np.arange(dim)), kind="squeezed_vacuum")

    @classmethod
    def squeezed_first_excited(cls, dim):
        """F(n) = 1/(2+n); the odd state is a squeezed |1>."""
        return cls(1.0 / (2.0 + np.arange(dim)), kind="squeezed_first_excited")

    def log_products(self, parity, count):
        """Log-magnitude and sign of the first ``count`` cumulative products.

        Entry k is log|F(p)F(p+2)...F(p+2k-2)| with p = 0 (even) or 1 (odd);
        entry 0 is the empty product.
        """
        logs = self._even_log if parity == "even" else self._odd_log
        signs = self._even_sign if parity == "even" else self._odd_sign
        if count > logs.size:
            raise IndexError(f"profile of length {len(self)} too short for {count} {parity} products")
        return logs[:count], signs[:count]


def _product(profile, parity, n):
    if n <= 0:
        return 1.0
    logs, signs = profile.log_products(parity, n + 1)
    return float(signs[n] * np.exp(logs[n]))


def f_even_product(profile, n):
    """F(2(n-1))!! = F(0) F(2) ... F(2(n-1)); unity for n <= 0."""
    if n >= 1 and 2 * (n - 1) >= len(profile):
        raise IndexError(f"F({2 * (n - 1)}) outside profile of length {len(profile)}")
    return _product(profile, "even", n)


def f_odd_product(profile, n):
    """F(2n-1)!! = F(1) F(3) ... F(2n-1); unity for n <= 0."""
    if n >= 1 and 2 * n - 1 >= len(profile):
        raise IndexError(f"F({2 * n - 1}) outside profile of length {len(profile)}")
    return _product(profile, "odd", n)
