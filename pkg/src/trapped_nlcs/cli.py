"""Command-line front end.

    trapped-nlcs fig1 [--ratio R ...] [--eta-min A --eta-max B --eta-count N] [--out FILE]
    trapped-nlcs fig2 [--eta E ...] [--ratio R] [--out FILE]
    trapped-nlcs fig3 [--ratio R] [--eta-min A --eta-max B --eta-count N] [--out FILE]
    trapped-nlcs verify [--parity even|odd] [--eta E --ratio R --gamma G --recoil none] [--json]
    trapped-nlcs report --eta E --ratio R [--parity even|odd]

Every subcommand accepts ``--config FILE.json``; explicit flags win over the
file.  Exit codes: 0 success, 2 invalid input, 3 fidelity below threshold,
4 no convergence.
"""

import argparse
import json
import logging
import sys
import time

from . import figures
from ._kernels import backend
from .lindblad import DriveParams, verify_steady_state
from .observables import ObservableReport

EXIT_OK, EXIT_INVALID, EXIT_FIDELITY, EXIT_NOT_CONVERGED = 0, 2, 3, 4

log = logging.getLogger("trapped_nlcs")


class ConfigError(ValueError):
    pass


def load_config(path):
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def _pick(args, cfg, name, key=None, default=None):
    value = getattr(args, name, None)
    if value is not None:
        return value
    return cfg.get(key or name, default)


def _eta_grid(args, cfg):
    if args.eta_min is not None or args.eta_max is not None or args.eta_count is not None:
        lo, hi = figures.ETA_RANGE
        return figures.log_eta_grid(args.eta_min or lo, args.eta_max or hi, args.eta_count or figures.ETA_COUNT)
    if "eta_grid" in cfg:
        return tuple(cfg["eta_grid"])
    if "eta_range" in cfg:
        lo, hi = cfg["eta_range"]
        return figures.log_eta_grid(lo, hi, cfg.get("eta_count", figures.ETA_COUNT))
    return figures.log_eta_grid()


def _open_out(path):
    return sys.stdout if path in (None, "-") else open(path, "w", encoding="utf-8", newline="")


def _run_sweep(spec, jobs):
    stream = _open_out(spec.output_path)
    try:
        rows = figures.run_sweep(spec, stream, jobs)
    finally:
        if stream is not sys.stdout:
            stream.close()
    bad = [r for r in rows if r["status"] != "ok"]
    if bad:
        log.warning("%d of %d rows flagged (first: eta=%g, %s)", len(bad), len(rows), bad[0]["eta"], bad[0]["status"])
    return EXIT_OK


def cmd_fig1(args, cfg):
    spec = figures.fig1_spec(
        _eta_grid(args, cfg), _pick(args, cfg, "ratio", "omega_ratio", figures.FIG1_RATIOS),
        _pick(args, cfg, "dim", default=32), _pick(args, cfg, "out", "output"),
        _pick(args, cfg, "max_dim", default=2048))
    return _run_sweep(spec, args.jobs)


def cmd_fig2(args, cfg):
    ratio = _pick(args, cfg, "ratio", "omega_ratio", figures.FIG2_RATIO)
    if isinstance(ratio, (list, tuple)):
        if len(ratio) != 1:
            raise ConfigError("fig2 takes a single omega ratio")
        ratio = ratio[0]
    spec = figures.fig2_spec(
        _pick(args, cfg, "eta", "eta_grid", figures.FIG2_ETAS), ratio,
        _pick(args, cfg, "dim", default=32), _pick(args, cfg, "out", "output"),
        _pick(args, cfg, "max_dim", default=2048))
    return _run_sweep(spec, args.jobs)


def cmd_fig3(args, cfg):
    spec = figures.fig3_spec(
        _eta_grid(args, cfg), _pick(args, cfg, "ratio", "omega_ratio", figures.FIG3_RATIO),
        _pick(args, cfg, "dim", default=32), _pick(args, cfg, "out", "output"),
        _pick(args, cfg, "max_dim", default=2048))
    return _run_sweep(spec, args.jobs)


def _single(value, name):
    if isinstance(value, (list, tuple)):
        if len(value) != 1:
            raise ConfigError(f"{name} takes a single value")
        return value[0]
    return value


def cmd_verify(args, cfg):
    params = DriveParams(
        eta=float(_single(_pick(args, cfg, "eta", default=0.1), "eta")),
        omega0=float(_single(_pick(args, cfg, "ratio", "omega_ratio", 0.01), "omega ratio")),
        gamma=float(_pick(args, cfg, "gamma", default=0.1)),
        recoil=_pick(args, cfg, "recoil", default="none"),
        dim=int(_pick(args, cfg, "dim", default=20)))
    parity = _pick(args, cfg, "parity", default="even")
    threshold = float(_pick(args, cfg, "threshold", default=0.999))
    start = time.perf_counter()
    report = verify_steady_state(params, parity, tol=float(_pick(args, cfg, "tol", default=1e-8)),
                                 t_max=float(_pick(args, cfg, "t_max", default=2e4)))
    wall = time.perf_counter() - start
    d = report.diagnostics
    if args.json:
        out = report.as_dict()
        out.update(threshold=threshold, wall_time=wall, backend=backend())
        print(json.dumps(out, indent=2))
    else:
        print(f"parity            {parity}")
        print(f"eta, ratio, alpha {params.eta:g}, {params.omega_ratio:g}, {params.alpha:g}")
        print(f"gamma, recoil     {params.gamma:g}, {params.recoil}")
        print(f"dim               {params.dim}")
        print(f"fidelity          {report.fidelity:.12f}  (threshold {threshold})")
        print(f"rhs norm          {d.rhs_norm:.3e}  ({d.message})")
        print(f"trace drift       {d.trace_drift:.3e}")
        print(f"hermiticity       {d.hermiticity_defect:.3e}")
        print(f"parity leakage    {d.parity_leakage}")
        print(f"min eigenvalue    {d.min_eigenvalue:.3e}")
        print(f"t, steps          {d.t:.6g}, {d.steps} (+{d.rejected_steps} rejected)")
        print(f"wall time         {wall:.2f} s [{backend()}]")
    if not d.converged:
        return EXIT_NOT_CONVERGED
    if report.fidelity < threshold:
        return EXIT_FIDELITY
    return EXIT_OK


def cmd_report(args, cfg):
    eta = float(_single(_pick(args, cfg, "eta", default=0.1), "eta"))
    ratio = float(_single(_pick(args, cfg, "ratio", "omega_ratio", 1e-3), "omega ratio"))
    parity = _pick(args, cfg, "parity", default="even")
    psi = figures.adaptive_state(eta, ratio, parity, int(_pick(args, cfg, "dim", default=32)),
                                 int(_pick(args, cfg, "max_dim", default=2048)))
    out = {"eta": eta, "omega_ratio": ratio, "alpha": ratio / eta**2, "parity": parity,
           "dim": psi.dim, "tail_mass": psi.tail_mass}
    out.update(ObservableReport.from_state(psi).as_dict())
    print(json.dumps(out, indent=2))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="trapped-nlcs", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--dim", type=int, help="truncation dimension (starting value for sweeps)")
    common.add_argument("--out", help="output path, '-' for stdout")
    common.add_argument("--tol", type=float, help="steady-state tolerance on ||drho/dt||")

    sweep = argparse.ArgumentParser(add_help=False, parents=[common])
    sweep.add_argument("--max-dim", type=int, help="largest truncation tried per grid point")
    sweep.add_argument("--jobs", type=int, default=1, help="worker processes")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--eta-min", type=float)
    grid.add_argument("--eta-max", type=float)
    grid.add_argument("--eta-count", type=int)

    p = sub.add_parser("fig1", parents=[sweep, grid], help="p-quadrature variance of the even state vs eta")
    p.add_argument("--ratio", type=float, action="append", help="Omega0/Omega1 (repeatable)")
    p.set_defaults(func=cmd_fig1)

    p = sub.add_parser("fig2", parents=[sweep], help="occupation distribution of the even state")
    p.add_argument("--eta", type=float, action="append", help="Lamb-Dicke parameter (repeatable)")
    p.add_argument("--ratio", type=float, help="Omega0/Omega1")
    p.set_defaults(func=cmd_fig2)

    p = sub.add_parser("fig3", parents=[sweep, grid], help="Mandel q of the odd state vs eta")
    p.add_argument("--ratio", type=float, action="append", help="Omega0/Omega1 (repeatable)")
    p.set_defaults(func=cmd_fig3)

    p = sub.add_parser("verify", parents=[common], help="master-equation steady state vs analytic state")
    p.add_argument("--parity", choices=("even", "odd"))
    p.add_argument("--eta", type=float)
    p.add_argument("--ratio", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--recoil", choices=("none", "isotropic", "dipole"))
    p.add_argument("--t-max", type=float)
    p.add_argument("--threshold", type=float)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", parents=[common], help="observables of one analytic state as JSON")
    p.add_argument("--parity", choices=("even", "odd"))
    p.add_argument("--eta", type=float)
    p.add_argument("--ratio", type=float)
    p.add_argument("--max-dim", type=int)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        return args.func(args, cfg)
    except (ValueError, IndexError, TypeError, ArithmeticError) as exc:
        print(f"trapped-nlcs: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
