"""
Hadamard Sojourn — exact sojourn-time distributions of the Hadamard walk.
Main entry point.

Usage:
    sojourn expand --theorem 2 --order 10       # Closed-form expansion coefficients
    sojourn dp --start 0 --n-max 8              # Path-sum table
    sojourn measure --kind A --n 4 --format csv # Sojourn measure
    sojourn verify --order 12                   # Full cross-check suite
    sojourn first-return --n-max 12             # First-return amplitudes
"""
import argparse
import os
import sys
from pathlib import Path
from typing import Any, Optional

from loguru import logger
from pydantic import ValidationError

from core.errors import SojournError
from core.exact_ring import Mat2
from core.measures import (
    classical_arcsine,
    classical_equidistribution,
    sojourn_measure_A,
    sojourn_measure_B,
)
from core.theorems import PQRS, first_return_amplitudes, theorem1_series, theorem2_series
from core.walk_paths import sojourn_table
from harness.verify import first_failure, render_summary, run_verification
from shared.config import ConfigError, RunConfig, load_settings
from shared.serialize import document, emit, exact, matrix_fields, pqrs_fields
from shared.types import MeasureKind, OutputFormat, Subcommand

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2

LOG_FORMAT = "<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan> - {message}"


def configure_logging(level: str = "INFO", file: Optional[str] = None) -> None:
    """stderr sink always, rotating file sink when a path is configured."""
    logger.remove()
    logger.add(sys.stderr, level=level, format=LOG_FORMAT)
    if file:
        path = os.path.expanduser(file)
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        logger.add(path, rotation="10 MB", retention="7 days", level="DEBUG")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="Path to config file (default: config/config.yaml if present)")
    common.add_argument("--output", type=Path, default=None, help="Write data here instead of stdout")
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=None, help="json or csv")
    common.add_argument("--verbose", action="store_true", help="Log at DEBUG level")

    parser = argparse.ArgumentParser(prog="sojourn", description="Hadamard Sojourn — exact sojourn-time distributions")
    commands = parser.add_subparsers(dest="command", required=True)

    expand = commands.add_parser("expand", parents=[common], help="Expand a closed-form generating function")
    expand.add_argument("--theorem", type=int, default=None, help="1 for Psi^0 (p, q, r, s), 2 for Gamma")
    expand.add_argument("--order", type=int, default=None, help="Highest power of z")

    dp = commands.add_parser("dp", parents=[common], help="Path-sum table M_n(y, k)")
    dp.add_argument("--start", type=int, default=None, help="Starting position x0")
    dp.add_argument("--n-max", dest="n_max", type=int, default=None, help="Deepest time step")

    measure = commands.add_parser("measure", parents=[common], help="Sojourn measure at time n")
    measure.add_argument("--kind", choices=[k.value for k in MeasureKind], default=None)
    measure.add_argument("--n", type=int, required=True, help="Even time n")
    measure.add_argument("--state", default=None, help='Initial state "a_re,a_im,b_re,b_im"')

    verify = commands.add_parser("verify", parents=[common], help="Run every cross-check")
    verify.add_argument("--order", type=int, default=None)
    verify.add_argument("--x-min", dest="x_min", type=int, default=None)
    verify.add_argument("--x-max", dest="x_max", type=int, default=None)

    first = commands.add_parser("first-return", parents=[common], help="First-return amplitudes and blocks")
    first.add_argument("--n-max", dest="n_max", type=int, default=None, help="Largest excursion length 2r")

    return parser


_OVERRIDES = ("order", "theorem", "n", "n_max", "start", "kind", "state", "x_min", "x_max", "format", "output")


def _matrix_cells(matrix: Mat2, fmt: OutputFormat, prefix: str = "m") -> dict[str, Any]:
    if fmt is OutputFormat.CSV:
        return matrix_fields(matrix, prefix)
    key = "matrix" if prefix == "m" else prefix.rstrip("_")
    return {key: [[exact(x) for x in row] for row in matrix.rows()]}


def expand_rows(config: RunConfig) -> list[dict[str, Any]]:
    """Nonzero coefficients z^n t^k of the closed form, one row per (n, k)."""
    if config.theorem == 1:
        closed = theorem1_series(config.order)
        components = [closed.component(u) for u in PQRS]
        keys = sorted({(i, j) for f in components for i, j, _ in f.terms() if i <= config.order})
        return [
            {"z_power": i, "t_power": j, **pqrs_fields(closed.coefficient(i, j))}
            for i, j in keys
        ]
    closed = theorem2_series(config.order)
    keys = sorted({(i, j) for f in closed.entries() for i, j, _ in f.terms() if i <= config.order})
    return [
        {"z_power": i, "t_power": j, **_matrix_cells(closed.coefficient(i, j), config.format)}
        for i, j in keys
    ]


def dp_rows(config: RunConfig) -> list[dict[str, Any]]:
    table = sojourn_table(config.start, config.n_max)
    rows = []
    for n in range(config.n_max + 1):
        for y, k, matrix in table.layer(n):
            rows.append({"n": n, "y": y, "k": k, **_matrix_cells(matrix, config.format)})
    return rows


def measure_rows(config: RunConfig) -> list[dict[str, Any]]:
    builders = {
        MeasureKind.A: lambda: sojourn_measure_A(config.n, config.state),
        MeasureKind.B: lambda: sojourn_measure_B(config.n, config.state),
        MeasureKind.CLASSICAL_ARCSINE: lambda: classical_arcsine(config.n),
        MeasureKind.CLASSICAL_UNIFORM: lambda: classical_equidistribution(config.n),
    }
    measure = builders[config.kind]()
    return [
        {"k": k, "weight": exact(measure.weights.get(k, 0)), "probability": exact(measure.probability(k))}
        for k in range(0, config.n + 1, 2)
    ]


def first_return_rows(config: RunConfig) -> list[dict[str, Any]]:
    amplitudes = first_return_amplitudes(config.n_max)
    return [
        {
            "r": r,
            "amplitude": exact(amplitudes.amplitude(2 * r - 1)),
            **_matrix_cells(amplitudes.positive_excursion(r), config.format, "plus_"),
            **_matrix_cells(amplitudes.negative_excursion(r), config.format, "minus_"),
        }
        for r in range(1, (config.n_max + 1) // 2 + 1)
    ]


def verify(config: RunConfig) -> int:
    reports = run_verification(config.order, config.x_min, config.x_max)
    render_summary(reports)
    rows = [
        {"check": r.name, "compared": r.checked, "mismatches": len(r.mismatches), "passed": r.passed}
        for r in reports
    ]
    emit(document(config.subcommand.value, _params(config), rows), config.format, config.output, sys.stdout)
    failure = first_failure(reports)
    if failure is not None:
        report, mismatch = failure
        logger.error(f"Verification failed in {report.name}")
        print(f"MISMATCH [{report.name}] {mismatch.describe()}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def _params(config: RunConfig) -> dict[str, Any]:
    fields = {
        Subcommand.EXPAND: ("theorem", "order"),
        Subcommand.DP: ("start", "n_max"),
        Subcommand.MEASURE: ("kind", "n", "state"),
        Subcommand.VERIFY: ("order", "x_min", "x_max"),
        Subcommand.FIRST_RETURN: ("n_max",),
    }[config.subcommand]
    params = {name: getattr(config, name) for name in fields}
    if "state" in params:
        s = config.state
        params["state"] = ",".join(exact(x) for x in (s.alpha.re, s.alpha.im, s.beta.re, s.beta.im))
    return params


_ROW_BUILDERS = {
    Subcommand.EXPAND: expand_rows,
    Subcommand.DP: dp_rows,
    Subcommand.MEASURE: measure_rows,
    Subcommand.FIRST_RETURN: first_return_rows,
}


def run(argv: list[str]) -> int:
    """Parse, validate and dispatch one invocation; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    try:
        settings = load_settings(args.config)
    except (FileNotFoundError, ConfigError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    level = "DEBUG" if args.verbose else settings["logging"]["level"]
    configure_logging(level, settings["logging"]["file"])

    subcommand = Subcommand(args.command)
    overrides = {name: getattr(args, name, None) for name in _OVERRIDES}
    try:
        config = RunConfig.from_settings(subcommand, settings, **overrides)
        logger.debug(f"Running {subcommand.value} | {_params(config)}")
        if subcommand is Subcommand.VERIFY:
            return verify(config)
        rows = _ROW_BUILDERS[subcommand](config)
    except ValidationError as e:
        print(f"error: invalid arguments\n{e}", file=sys.stderr)
        return EXIT_USAGE
    except SojournError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    emit(document(subcommand.value, _params(config), rows), config.format, config.output, sys.stdout)
    logger.info(f"{subcommand.value}: {len(rows)} rows")
    return EXIT_OK


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
