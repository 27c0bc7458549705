"""Command-line front end.

Subcommands: ``run``, ``converge``, ``growth``, ``stability``,
``dispersion`` and ``plot``.  Options may also come from a flat
``key = value`` file given with ``--config``; command-line flags win.

Exit codes: 0 on success, 2 for configuration errors, 3 for numerical
failures (singular ghost system, non-finite values).
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
import time
from pathlib import Path
from typing import Sequence

from . import harness
from .exact import dispersion_roots
from .interface import GhostSystemError
from .materials import MaterialParams, PhysicalMaterial, ScalingConvention, ev_to_angular, scale

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _add_material(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("material (right side in 2D)")
    g.add_argument("--eps-r", type=float, help="relative permittivity")
    g.add_argument("--mu-r", type=float, help="relative permeability")
    g.add_argument("--omega-p", type=float, help="scaled plasma frequency")
    g.add_argument("--gamma", type=float, help="scaled damping rate")
    g.add_argument("--omega-p-ev", type=float, help="plasma energy in eV (physical input)")
    g.add_argument("--gamma-si", type=float, help="damping rate in 1/s (physical input)")
    g.add_argument("--ct", type=float, help="time scale for physical inputs (default 1e15)")


def _add_run(p: argparse.ArgumentParser) -> None:
    p.add_argument("--case", choices=harness.CASES, default="periodic1d")
    p.add_argument("--scheme", choices=harness.SCHEMES, default="rc2")
    p.add_argument("--n", type=int, help="resolution (1D grid points, 2D intervals per unit length)")
    p.add_argument("--tfinal", type=float, help="final time")
    p.add_argument("--cfl-fraction", type=float, default=0.99)
    p.add_argument("--k", type=float, help="1D wavenumber")
    p.add_argument("--theta-i", type=float, help="incidence angle (scattering)")
    p.add_argument("--omega", type=float, help="scaled angular frequency (2D)")
    p.add_argument("--out", type=Path, default=Path("out"))
    _add_material(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="drude-rc", description=__doc__.splitlines()[0])
    parser.add_argument("--config", type=Path, help="key = value file with default options")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="single run, writes history and snapshot CSVs")
    _add_run(p)

    p = sub.add_parser("converge", help="convergence study over several resolutions")
    _add_run(p)
    p.add_argument("--ns", type=_int_list, help="comma-separated resolutions")

    p = sub.add_parser("growth", help="fit the spurious growth rate of the 1D error tail")
    _add_run(p)

    p = sub.add_parser("stability", help="time-step constraints and amplification scan")
    p.add_argument("--scheme", choices=harness.SCHEMES, default="rc2")
    p.add_argument("--h", type=_float_list, default=[0.01, 0.01], help="comma-separated spacings")
    p.add_argument("--with-vacuum", action="store_true", help="also include a vacuum side")
    p.add_argument("--samples", type=int, default=15, help="grid points per parameter axis")
    p.add_argument("--out", type=Path, default=Path("out"))
    _add_material(p)

    p = sub.add_parser("dispersion", help="roots of the 1D dispersion cubic")
    p.add_argument("--k", type=float, default=harness.PERIODIC_K)
    _add_material(p)

    p = sub.add_parser("plot", help="render a harness CSV as SVG")
    p.add_argument("csv", type=Path)
    p.add_argument("--kind", choices=sorted(harness_kinds()), required=True)
    p.add_argument("--output", type=Path)
    return parser


def harness_kinds():
    from .plotting import KINDS

    return KINDS


# ---------------------------------------------------------------------------
# option handling
# ---------------------------------------------------------------------------


def material_from_args(args, default: MaterialParams) -> MaterialParams:
    physical = any(getattr(args, k, None) is not None for k in ("omega_p_ev", "gamma_si"))
    scaled = any(getattr(args, k, None) is not None for k in ("omega_p", "gamma"))
    if physical and scaled:
        raise harness.ConfigError("give either scaled (--omega-p/--gamma) or physical (--omega-p-ev/--gamma-si) inputs")
    eps_r = args.eps_r if args.eps_r is not None else default.eps_r
    mu_r = args.mu_r if args.mu_r is not None else default.mu_r
    try:
        if physical:
            ct = args.ct or harness.DEFAULT_CT_2D
            phys = PhysicalMaterial(
                eps_r, mu_r, ev_to_angular(args.omega_p_ev or 0.0), args.gamma_si or 0.0
            )
            return scale(phys, ScalingConvention(ct))
        return MaterialParams(
            eps_r,
            mu_r,
            args.omega_p if args.omega_p is not None else default.omega_p,
            args.gamma if args.gamma is not None else default.gamma,
        )
    except ValueError as exc:
        raise harness.ConfigError(str(exc)) from exc


def config_from_args(args, **overrides) -> harness.ExperimentConfig:
    kw = dict(
        case=args.case,
        scheme=args.scheme,
        n=args.n if args.n is not None else (101 if args.case == "periodic1d" else 64),
        t_final=args.tfinal,
        cfl_fraction=args.cfl_fraction,
        out=args.out,
    )
    if args.ct is not None:
        kw["ct"] = args.ct
    if args.k is not None:
        kw["k"] = args.k
    if args.theta_i is not None:
        kw["theta_i"] = args.theta_i
    if args.omega is not None:
        kw["omega"] = args.omega
    if any(getattr(args, k) is not None for k in ("eps_r", "mu_r", "omega_p", "gamma", "omega_p_ev", "gamma_si")):
        default = harness.ExperimentConfig(case=args.case, ct=kw.get("ct", harness.DEFAULT_CT_2D)).medium
        kw["material"] = material_from_args(args, default)
    kw.update(overrides)
    return harness.ExperimentConfig(**kw)


def _apply_config_file(parser: argparse.ArgumentParser, argv: Sequence[str]) -> argparse.Namespace:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", type=Path)
    known, _ = pre.parse_known_args(argv)
    if known.config is None:
        return parser.parse_args(argv)
    try:
        values = harness.load_config_file(known.config)
    except OSError as exc:
        raise harness.ConfigError(f"cannot read config file: {exc}") from exc
    # route file values to the chosen subcommand's parser
    first = parser.parse_args(argv)
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    sp = subparsers.choices[first.command]
    dests = {a.dest for a in sp._actions}
    unknown = sorted(set(values) - dests)
    if unknown:
        raise harness.ConfigError(f"unknown config keys for '{first.command}': {', '.join(unknown)}")
    sp.set_defaults(**values)
    return parser.parse_args(argv)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _cmd_run(args) -> None:
    cfg = config_from_args(args)
    t0 = time.perf_counter()
    res = harness.run(cfg)
    print(f"case={cfg.case} scheme={cfg.scheme} N={cfg.n} h={res.h:.6g} dt={res.dt:.6g} steps={res.steps}")
    for name, (l1, l2, linf) in res.final_norms.items():
        print(f"  {name}: L1={l1:.4e} L2={l2:.4e} Linf={linf:.4e}")
    print(f"  wall time {time.perf_counter() - t0:.2f} s; CSVs in {cfg.out}")


def _cmd_converge(args) -> None:
    cfg = config_from_args(args)
    ns = args.ns or ([51, 101, 201, 401] if cfg.case == "periodic1d" else [32, 64, 128])
    report = harness.convergence_study(cfg, ns)
    for f in report.fields:
        for nm in harness.NORMS:
            rates = ", ".join(f"{r:.3f}" for r in report.rates(f, nm))
            print(f"{f:>3} {nm:>4}: rates [{rates}]")
    print(f"convergence CSV: {Path(cfg.out) / 'convergence.csv'}")


def _cmd_growth(args) -> None:
    cfg = config_from_args(args, t_final=args.tfinal or 120.0)
    fit = harness.growth_study(cfg)
    print(f"fitted rate {fit.rate:.6g} per unit time on t in [{fit.window[0]:.2f}, {fit.window[1]:.2f}]")
    print(f"theory gamma^3 dt^2 / 12 = {fit.theory:.6g} (dt = {fit.dt:.6g})")


def _cmd_stability(args) -> None:
    default = MaterialParams()
    mats = [material_from_args(args, default)]
    if args.with_vacuum:
        mats.insert(0, MaterialParams())
    rep = harness.stability_report(mats, args.h, args.scheme, n=args.samples)
    print(f"dt = {rep.dt:.6g} (binding: {rep.binding})")
    for name, v in rep.constraints.items():
        print(f"  {name}: {v:.6g}")
    path = harness.write_scan_csv(Path(args.out) / f"scan_{args.scheme}.csv", rep.scan)
    worst = max(r[4] for r in rep.scan) if rep.scan else math.nan
    print(f"scan: {len(rep.scan)} rows, max |A| = {worst:.15g}; CSV {path}")


def _cmd_dispersion(args) -> None:
    m = material_from_args(args, harness.PERIODIC_MATERIAL)
    roots = dispersion_roots(m.c, m.omega_p, m.eps_r, m.gamma, args.k)
    for name in roots._fields:
        z = getattr(roots, name)
        print(f"{name:>9}: {z.real:+.10f} {z.imag:+.10f}i")


def _cmd_plot(args) -> None:
    from .plotting import plot_emit

    out = plot_emit(args.csv, args.kind, args.output)
    print(out)


COMMANDS = {
    "run": _cmd_run,
    "converge": _cmd_converge,
    "growth": _cmd_growth,
    "stability": _cmd_stability,
    "dispersion": _cmd_dispersion,
    "plot": _cmd_plot,
}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config_file(parser, argv)
    except harness.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        COMMANDS[args.command](args)
    except (harness.ConfigError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (harness.NumericalFailure, GhostSystemError, FloatingPointError, harness.GrowthFitError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
