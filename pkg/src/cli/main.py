"""Command-line entry point.

Subcommands:

* ``check``  evaluate the admissibility condition for one δ or locate its threshold.
* ``run``    integrate one configuration and write the snapshot CSV plus a summary.
* ``mms``    run a manufactured-solution refinement study.
* ``sweep``  tabulate admissibility over a (δ, γ) grid.

Exit codes: 0 success, 1 configuration error, 2 parameters not admissible,
3 solver failure, 4 refinement slope below the preset minimum.
"""

from __future__ import annotations

import argparse
from concurrent.futures import ThreadPoolExecutor
from itertools import product
import logging
import math
from pathlib import Path
import sys
import time
from typing import List, Optional

from src.cli.config import ConfigModel, build_physics, load_config, render_config
from src.cli.output import (
    SWEEP_COLUMNS,
    SnapshotWriter,
    format_number,
    write_rows,
    write_summary,
)
from src.cli.presets import initial_state
from src.errors import (
    AdmissibilityError,
    ConfigError,
    DomainError,
    RadialNSError,
    SolverFailure,
)
from src.params.admissibility import (
    admissibility_report,
    find_delta_star,
    p_range,
    quadratic_residual,
    wz_comparison,
)
from src.params.physical import PhysParams
from src.simulation.core import run
from src.verify.manufactured import DEFAULT_LADDER, run_mms_study

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NOT_ADMISSIBLE = 2
EXIT_SOLVER = 3
EXIT_SLOPE = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="radialns",
        description="Radial compressible Navier-Stokes solver with degenerate viscosity.",
    )
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Verbosity of the log stream on stderr.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="Evaluate the admissibility condition.")
    check.add_argument("--delta", type=float, help="Viscosity exponent.")
    check.add_argument("--gamma", type=float, help="Adiabatic exponent.")
    check.add_argument("--p", type=float, help="Integrability exponent to test.")
    check.add_argument(
        "--find-threshold", action="store_true", help="Bisect for the critical delta."
    )
    check.add_argument("--tol", type=float, default=1e-8, help="Bisection tolerance.")
    check.set_defaults(handler=cmd_check)

    run_cmd = commands.add_parser("run", help="Integrate one configuration.")
    run_cmd.add_argument("config", type=Path)
    run_cmd.add_argument("output", type=Path, help="Snapshot CSV path.")
    run_cmd.add_argument("--summary", type=Path, help="Summary JSON path.")
    run_cmd.set_defaults(handler=cmd_run)

    mms = commands.add_parser("mms", help="Manufactured-solution refinement study.")
    mms.add_argument("config", type=Path)
    mms.set_defaults(handler=cmd_mms)

    sweep = commands.add_parser("sweep", help="Admissibility over a parameter grid.")
    sweep.add_argument("config", type=Path)
    sweep.add_argument("--output", type=Path, help="CSV path; stdout when omitted.")
    sweep.set_defaults(handler=cmd_sweep)
    return parser


def _print_rows(rows) -> None:
    for key, value in rows:
        print(f"{key} = {value}")


def cmd_check(args: argparse.Namespace) -> int:
    if args.find_threshold:
        delta_star = find_delta_star(args.tol)
        print(f"delta_star = {format_number(delta_star)}")
        return EXIT_OK
    if args.delta is None:
        raise ConfigError("check needs --delta or --find-threshold")

    report = admissibility_report(args.delta)
    _print_rows(report.as_rows())
    if args.p is not None:
        if not (math.isfinite(args.p) and args.p >= 2.0):
            raise ConfigError(f"--p must be a finite exponent >= 2, got {args.p!r}")
        rows = [("p", repr(args.p))]
        if math.isfinite(report.K):
            low, high = p_range(args.delta)
            rows.append(("quadratic_residual", repr(quadratic_residual(args.p, report.K))))
            rows.append(("p_in_range", str(low < args.p <= high).lower()))
        if args.gamma is not None:
            holds = wz_comparison(args.gamma, args.delta, args.p)
            rows.append(("wz_condition", str(holds).lower()))
        _print_rows(rows)
    return EXIT_OK if report.admissible else EXIT_NOT_ADMISSIBLE


def cmd_run(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    cfg = load_config(args.config, "run")
    verdict = admissibility_report(cfg.delta)
    if not verdict.admissible and not cfg.override_admissibility:
        print(f"not admissible: delta={cfg.delta!r}: {verdict.reason}", file=sys.stderr)
        return EXIT_NOT_ADMISSIBLE

    params, grid, run_cfg = build_physics(cfg)
    init = initial_state(cfg, grid, base_dir=args.config.parent)
    summary_path = args.summary or args.output.with_suffix(".json")

    with args.output.open("w", encoding="utf-8", newline="") as stream:
        writer = SnapshotWriter(stream)
        try:
            result = run(init, run_cfg, params, grid, on_snapshot=writer)
        except SolverFailure as exc:
            logger.error("run failed: %s", exc)
            write_summary(
                summary_path,
                {
                    "status": "failed",
                    "failed_at_t": exc.t,
                    "error": str(exc),
                    "snapshots_written": writer.rows,
                    "wall_time": time.perf_counter() - started,
                    "config": render_config(cfg),
                },
            )
            print(f"solver failure at t={exc.t!r}: {exc}", file=sys.stderr)
            return EXIT_SOLVER
        except AdmissibilityError as exc:
            print(f"not admissible: {exc}", file=sys.stderr)
            return EXIT_NOT_ADMISSIBLE

    final = result.snapshots[-1]
    initial_mass = result.snapshots[0].report.mass
    write_summary(
        summary_path,
        {
            "status": "ok",
            "steps": result.steps,
            "t_final": final.t,
            "wall_time": time.perf_counter() - started,
            "final": final.report.as_dict(),
            "diss_integral": final.diss_integral,
            "energy_residual": final.energy_residual,
            "mass_drift": abs(final.report.mass - initial_mass) / initial_mass,
            "min_density": result.min_density,
            "compatibility_g": result.compatibility_g,
            "admissible": result.admissibility.admissible,
            "config": render_config(cfg),
        },
    )
    logger.info("wrote %d snapshots to %s", writer.rows, args.output)
    return EXIT_OK


def _mms_params(cfg: ConfigModel) -> Optional[PhysParams]:
    if cfg.gamma is None or cfg.delta is None:
        return None
    return PhysParams(gamma=cfg.gamma, delta=cfg.delta, a=cfg.a or 1.0, alpha=cfg.alpha)


def cmd_mms(args: argparse.Namespace) -> int:
    cfg = load_config(args.config, "mms")
    study = run_mms_study(
        cfg.mms_preset,
        cfg.mms_ladder or DEFAULT_LADDER,
        a=cfg.a or 1.0,
        r_max=cfg.r_max or 2.0,
        params=_mms_params(cfg),
        t_end=cfg.t_end,
    )
    print("n,spacing,error,local_slope")
    for row in study.rows:
        cells = [format_number(value) for value in (row.spacing, row.error, row.slope)]
        print(",".join([str(row.n), *cells]))
    verdict = "pass" if study.passed else "fail"
    print(f"slope = {format_number(study.slope)} (minimum {study.min_slope!r}): {verdict}")
    return EXIT_OK if study.passed else EXIT_SLOPE


def _float_range(low: float, high: float, step: float, name: str) -> list[float]:
    if not step > 0.0:
        raise ConfigError(f"{name}_step must be positive, got {step}")
    if high < low:
        raise ConfigError(f"{name}_max must not be below {name}_min")
    count = int(math.floor((high - low) / step + 1e-9)) + 1
    return [round(low + i * step, 12) for i in range(count)]


def sweep_point(delta: float, gamma: float) -> tuple[float, float, float, float, float, bool]:
    report = admissibility_report(delta)
    return (
        delta,
        gamma,
        report.K,
        report.p_star,
        report.p_max,
        report.admissible and gamma >= 1.0,
    )


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = load_config(args.config, "sweep")
    deltas = _float_range(cfg.delta_min, cfg.delta_max, cfg.delta_step, "delta")
    if cfg.gamma_min is not None:
        if cfg.gamma_max is None or cfg.gamma_step is None:
            raise ConfigError("gamma_min needs gamma_max and gamma_step")
        gammas = _float_range(cfg.gamma_min, cfg.gamma_max, cfg.gamma_step, "gamma")
    else:
        gammas = [cfg.gamma if cfg.gamma is not None else 1.0]

    points = list(product(deltas, gammas))
    with ThreadPoolExecutor() as pool:
        rows = sorted(pool.map(lambda point: sweep_point(*point), points))

    if args.output is None:
        write_rows(sys.stdout, SWEEP_COLUMNS, rows)
    else:
        with args.output.open("w", encoding="utf-8", newline="") as stream:
            write_rows(stream, SWEEP_COLUMNS, rows)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    logging.basicConfig(
        level=getattr(logging, args.log_level),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AdmissibilityError as exc:
        print(f"not admissible: {exc}", file=sys.stderr)
        return EXIT_NOT_ADMISSIBLE
    except SolverFailure as exc:
        print(f"solver failure at t={exc.t!r}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except DomainError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RadialNSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    raise SystemExit(main())
