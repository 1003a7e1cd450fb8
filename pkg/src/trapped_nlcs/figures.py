"""Parameter sweeps behind the three figures, and their CSV output.

Each grid point builds the analytic state with a truncation that is doubled
from ``dim`` until the tail mass drops below 1e-10 (or ``max_dim`` is hit);
the tail mass actually reached is written next to every value.
"""

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .fock import TAIL_TOLERANCE
from .nlcs import PARITIES, NlcsParams, build_nlcs
from .observables import mandel_q, occupation_distribution, quadrature_variance_p
from .special_functions import SingularNonlinearityError

QUANTITIES = ("delta_p_sq", "mandel_q", "pn")

FIG1_RATIOS = (1e-3, 1e-4)
FIG2_ETAS = (0.008, 0.012, 0.02, 0.1)
FIG2_RATIO = 1e-4
FIG3_RATIO = 1e-3
ETA_RANGE = (0.005, 0.5)
ETA_COUNT = 100


def log_eta_grid(eta_min=ETA_RANGE[0], eta_max=ETA_RANGE[1], count=ETA_COUNT):
    return tuple(float(e) for e in np.geomspace(eta_min, eta_max, count))


@dataclass(frozen=True)
class SweepSpec:
    quantity: str
    parity: str
    eta_grid: tuple = field(default_factory=log_eta_grid)
    omega_ratio: tuple = FIG1_RATIOS
    dim: int = 32
    output_path: str | None = None
    max_dim: int = 2048

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise ValueError(f"quantity must be one of {QUANTITIES}, got {self.quantity!r}")
        if self.parity not in PARITIES:
            raise ValueError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        grid = tuple(float(e) for e in np.atleast_1d(self.eta_grid))
        if not grid or grid[0] <= 0 or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("eta_grid must be nonempty, strictly positive and increasing")
        ratios = tuple(float(r) for r in np.atleast_1d(self.omega_ratio))
        if not ratios or any(not r > 0 for r in ratios):
            raise ValueError("omega_ratio must be positive")
        if int(self.dim) != self.dim or self.dim < 4:
            raise ValueError(f"dim must be an integer >= 4, got {self.dim}")
        if self.max_dim < self.dim:
            raise ValueError("max_dim must be at least dim")
        object.__setattr__(self, "eta_grid", grid)
        object.__setattr__(self, "omega_ratio", ratios)


def adaptive_state(eta, omega_ratio, parity, dim=32, max_dim=2048, tail_tol=TAIL_TOLERANCE):
    """Analytic stationary state, doubling ``dim`` until the tail mass is below ``tail_tol``."""
    while True:
        psi = build_nlcs(NlcsParams.trapped_ion(eta, omega_ratio, parity, dim))
        if psi.tail_mass < tail_tol or dim >= max_dim:
            return psi
        dim = min(2 * dim, max_dim)


def _point(args):
    quantity, parity, eta, ratio, dim, max_dim = args
    row = {"eta": eta, "omega_ratio": ratio, "alpha": ratio / eta**2}
    try:
        psi = adaptive_state(eta, ratio, parity, dim, max_dim)
    except SingularNonlinearityError as exc:
        return [dict(row, **{quantity: math.nan, "tail_mass": math.nan, "dim": dim,
                             "status": f"singular F: {exc}"})]
    row.update(tail_mass=psi.tail_mass, dim=psi.dim, status="ok" if psi.truncation_ok else "truncated")
    if quantity == "delta_p_sq":
        return [dict(row, delta_p_sq=quadrature_variance_p(psi))]
    if quantity == "mandel_q":
        return [dict(row, mandel_q=mandel_q(psi))]
    pn = occupation_distribution(psi)
    return [dict(row, n=n, pn=float(p)) for n, p in enumerate(pn)]


def sweep_rows(spec, jobs=1):
    """Evaluate every (omega_ratio, eta) point; rows come back in grid order."""
    tasks = [(spec.quantity, spec.parity, eta, ratio, spec.dim, spec.max_dim)
             for ratio in spec.omega_ratio for eta in spec.eta_grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_point, tasks))
    else:
        chunks = [_point(t) for t in tasks]
    return [row for chunk in chunks for row in chunk]


COLUMNS = {
    "delta_p_sq": ("eta", "omega_ratio", "alpha", "delta_p_sq", "tail_mass", "dim", "status"),
    "mandel_q": ("eta", "omega_ratio", "alpha", "mandel_q", "tail_mass", "dim", "status"),
    "pn": ("eta", "omega_ratio", "alpha", "n", "pn", "tail_mass", "dim", "status"),
}


def fig1_spec(eta_grid=None, omega_ratio=FIG1_RATIOS, dim=32, output_path=None, max_dim=2048):
    return SweepSpec("delta_p_sq", "even", eta_grid or log_eta_grid(), omega_ratio, dim, output_path, max_dim)


def fig2_spec(eta_list=FIG2_ETAS, omega_ratio=FIG2_RATIO, dim=32, output_path=None, max_dim=2048):
    return SweepSpec("pn", "even", tuple(eta_list), omega_ratio, dim, output_path, max_dim)


def fig3_spec(eta_grid=None, omega_ratio=FIG3_RATIO, dim=32, output_path=None, max_dim=2048):
    return SweepSpec("mandel_q", "odd", eta_grid or log_eta_grid(), omega_ratio, dim, output_path, max_dim)


def format_value(x):
    """CSV cell text: ints as-is, scientific notation below 1e-3 in magnitude."""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if x == 0.0:
        return "0.0"
    if math.isfinite(x) and abs(x) < 1e-3:
        # shortest mantissa that still round-trips
        for digits in range(17):
            text = f"{x:.{digits}e}"
            if float(text) == x:
                return text
    return repr(x)


def write_csv(rows, columns, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row[c]) for c in columns])


def run_sweep(spec, stream, jobs=1):
    rows = sweep_rows(spec, jobs)
    write_csv(rows, COLUMNS[spec.quantity], stream)
    return rows
