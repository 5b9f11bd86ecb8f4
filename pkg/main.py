#!/usr/bin/env python3
"""
Command-line entry point for the robust sensor orientation simulator.

Usage:
    python main.py solve --config scene.json --out out/            # Integrated algorithm on one deployment
    python main.py compare --config exp.json --trials 100          # Random / IDS / Robustified comparison
    python main.py sweep --config exp.json --param theta_h --values 30,60,90
    python main.py validate --out out/                             # Oracle suites
    python main.py render --solution out/solution.json             # SVG scene
    python main.py -v ...                                          # Verbose logging

Exit codes: 0 success, 1 unexpected error, 2 config error,
3 infeasible deployment, 4 validation failure.
"""

import argparse
import math
import sys
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

from config import ConfigError, RunConfig, default_threads, load_config
from harness import SWEEP_PARAMETERS, parametric_sweep, run_comparison, trial_sensors, with_parameter
from orientation import build_sensor_diagram, run_integrated_algorithm
from persist import (
    COMPARE_HEADER,
    SUMMARY_HEADER,
    comparison_means_dict,
    comparison_rows,
    format_comparison_for_display,
    format_solution_for_display,
    format_sweep_for_display,
    save_csv,
    save_to_json,
    solution_summary_rows,
    solution_to_dict,
    sweep_header,
    sweep_rows,
)
from render import SolutionFormatError, render_solution_file
from validate import ValidationSettings, run_validation
from voronoi import InfeasibleDeploymentError


ARTIFACT_VERSION = "1.0.0"
DEFAULT_OUT_DIR = "out"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_VALIDATION = 4


def create_argument_parser() -> argparse.ArgumentParser:
    """Create and return the CLI argument parser for main.py."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "-v", "--verbose",
        action="store_true",
        help="Enable verbose logging",
    )

    parser = argparse.ArgumentParser(
        description="Robust orientation of directional sensors under location uncertainty.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py solve --config tests/e2e_test_data/m1.json --out out/
  python main.py compare --config exp.json --trials 10 --threads 4
  python main.py sweep --config exp.json --param r_outer --values 40,80,120
  python main.py validate --tolerance 0.02
  python main.py render --solution out/solution.json --svg out/scene.svg
        """,
    )
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", parents=[common], help="Run the integrated algorithm once")
    _add_config(solve, required=True)
    _add_out(solve)
    solve.add_argument("--seed", type=int, default=None, help="Override experiment.seed for a generated deployment")

    compare = commands.add_parser("compare", parents=[common], help="Compare Random, IDS and Robustified")
    _add_config(compare, required=True)
    _add_out(compare)
    _add_trial_flags(compare)

    sweep = commands.add_parser("sweep", parents=[common], help="Robustified coverage over one parameter")
    _add_config(sweep, required=True)
    _add_out(sweep)
    _add_trial_flags(sweep)
    sweep.add_argument("--param", required=True, choices=SWEEP_PARAMETERS, help="Parameter to vary")
    sweep.add_argument(
        "--values",
        required=True,
        help="Comma-separated values (theta_h in degrees)",
    )

    validate = commands.add_parser("validate", parents=[common], help="Run the oracle suites")
    _add_config(validate, required=False)
    _add_out(validate)
    validate.add_argument("--seed", type=int, default=None, help="Fixture seed")
    validate.add_argument(
        "--tolerance",
        type=float,
        default=None,
        help="Relative tolerance for Monte Carlo checks (default 0.01); the std-error band scales with it",
    )
    validate.add_argument(
        "--literal-case1",
        action="store_true",
        help="Compare the literal (theta_h/2)(R-r)^2 contained-footprint area against the sampler",
    )
    validate.add_argument("--fixtures", type=int, default=None, help="Override the number of area fixtures")
    validate.add_argument("--samples", type=int, default=None, help="Override Monte Carlo samples per fixture")

    render = commands.add_parser("render", parents=[common], help="Render a solution file to SVG")
    render.add_argument("--solution", required=True, help="solution.json written by 'solve'")
    render.add_argument("--svg", default=None, help="Output SVG path (default: scene.svg next to the solution)")
    return parser


def _add_config(parser: argparse.ArgumentParser, required: bool) -> None:
    parser.add_argument("--config", required=required, default=None, help="JSON config file")


def _add_out(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--out",
        default=DEFAULT_OUT_DIR,
        help=f"Output directory (default: {DEFAULT_OUT_DIR})",
    )


def _add_trial_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="Override experiment.seed")
    parser.add_argument("--trials", type=int, default=None, help="Override experiment.trials")
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="Worker processes (default: $RC_THREADS or 1)",
    )


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _experiment(run: RunConfig, args: argparse.Namespace):
    """Experiment config with --seed / --trials applied."""
    changes: Dict[str, Any] = {}
    if getattr(args, "seed", None) is not None:
        changes["seed"] = args.seed
    if getattr(args, "trials", None) is not None:
        changes["trials"] = args.trials
    try:
        return replace(run.experiment, **changes)
    except ValueError as e:
        raise ConfigError(str(e), field="--seed/--trials")


def _threads(args: argparse.Namespace) -> int:
    threads = args.threads if args.threads is not None else default_threads()
    if threads < 1:
        raise ConfigError(f"--threads must be at least 1, got {threads}", field="--threads")
    return threads


def _require_deployment(run: RunConfig, command: str) -> None:
    if not run.has_deployment:
        raise ConfigError(f"'{command}' needs a 'deployment' section, not an explicit sensor list", field="deployment")


def _write_manifest(
    out_dir: Path,
    command: str,
    seed: Optional[int],
    run: Optional[RunConfig],
    config_path: Optional[str],
    started_at: str,
    outputs: List[str],
    verbose: bool,
) -> bool:
    manifest = {
        "command": command,
        "version": ARTIFACT_VERSION,
        "seed": seed,
        "config_path": config_path,
        "config": run.document if run is not None else None,
        "started_at": started_at,
        "finished_at": _now(),
        "outputs": outputs,
    }
    return save_to_json(manifest, str(out_dir / "run_manifest.json"), verbose=verbose)


def _all_written(results: List[bool]) -> int:
    return EXIT_OK if all(results) else EXIT_ERROR


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_solve(args: argparse.Namespace) -> int:
    started_at = _now()
    run = load_config(args.config, verbose=args.verbose)
    experiment = _experiment(run, args)
    sensors = list(run.sensors) if run.sensors is not None else trial_sensors(experiment, 0)

    diagram = build_sensor_diagram(sensors, run.roi, verbose=args.verbose)
    solution = run_integrated_algorithm(sensors, run.roi, run.params, diagram=diagram, verbose=args.verbose)
    print(format_solution_for_display(solution))

    out_dir = Path(args.out)
    written = [
        save_to_json(solution_to_dict(solution, diagram), str(out_dir / "solution.json"), verbose=args.verbose),
        save_csv(SUMMARY_HEADER, solution_summary_rows(solution), str(out_dir / "summary.csv"), verbose=args.verbose),
    ]
    written.append(_write_manifest(
        out_dir, "solve", experiment.seed if run.has_deployment else None, run, args.config,
        started_at, ["solution.json", "summary.csv"], args.verbose,
    ))
    return _all_written(written)


def cmd_compare(args: argparse.Namespace) -> int:
    started_at = _now()
    run = load_config(args.config, verbose=args.verbose)
    _require_deployment(run, "compare")
    experiment = _experiment(run, args)

    result = run_comparison(experiment, threads=_threads(args), verbose=args.verbose)
    print(format_comparison_for_display(result))

    out_dir = Path(args.out)
    written = [
        save_csv(COMPARE_HEADER, comparison_rows(result), str(out_dir / "compare.csv"), verbose=args.verbose),
        save_to_json(comparison_means_dict(result), str(out_dir / "means.json"), verbose=args.verbose),
    ]
    written.append(_write_manifest(
        out_dir, "compare", experiment.seed, run, args.config, started_at,
        ["compare.csv", "means.json"], args.verbose,
    ))
    return _all_written(written)


def parse_sweep_values(parameter: str, raw: str) -> List[float]:
    """Comma-separated values; theta_h is given in degrees and returned in radians."""
    values = []
    for token in raw.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            value = float(token)
        except ValueError:
            raise ConfigError(f"Not a number: {token!r}", field="--values")
        if not math.isfinite(value):
            raise ConfigError(f"Not a finite number: {token!r}", field="--values")
        values.append(math.radians(value) if parameter == "theta_h" else value)
    if not values:
        raise ConfigError("At least one value is required", field="--values")
    return values


def cmd_sweep(args: argparse.Namespace) -> int:
    started_at = _now()
    run = load_config(args.config, verbose=args.verbose)
    _require_deployment(run, "sweep")
    experiment = _experiment(run, args)
    values = parse_sweep_values(args.param, args.values)
    for value in values:
        try:
            with_parameter(experiment, args.param, value)
        except ValueError as e:
            raise ConfigError(str(e), field="--values")

    rows = parametric_sweep(experiment, args.param, values, threads=_threads(args), verbose=args.verbose)
    degrees = args.param == "theta_h"
    print(format_sweep_for_display(rows, degrees=degrees))

    out_dir = Path(args.out)
    written = [
        save_csv(sweep_header(rows), sweep_rows(rows, degrees=degrees), str(out_dir / "sweep.csv"), verbose=args.verbose)
    ]
    written.append(_write_manifest(
        out_dir, "sweep", experiment.seed, run, args.config, started_at, ["sweep.csv"], args.verbose,
    ))
    return _all_written(written)


def cmd_validate(args: argparse.Namespace) -> int:
    started_at = _now()
    run = load_config(args.config, verbose=args.verbose) if args.config else None
    settings = run.validation if run is not None else ValidationSettings()

    changes: Dict[str, Any] = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.fixtures is not None:
        changes["area_fixtures"] = args.fixtures
    if args.samples is not None:
        changes["area_samples"] = args.samples
    if args.literal_case1:
        changes["literal_case1"] = True
    settings = replace(settings, **changes)
    if args.tolerance is not None:
        try:
            settings = settings.with_tolerance(args.tolerance)
        except ValueError as e:
            raise ConfigError(str(e), field="--tolerance")

    report = run_validation(settings, verbose=args.verbose)
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"[VALIDATE] {status} {check.name}: observed {check.observed:.6g} ({check.tolerance})")

    out_dir = Path(args.out)
    written = [save_to_json(report.to_dict(), str(out_dir / "validation.json"), verbose=args.verbose)]
    written.append(_write_manifest(
        out_dir, "validate", settings.seed, run, args.config, started_at, ["validation.json"], args.verbose,
    ))
    if not report.passed:
        print("[MAIN] Validation failed.")
        return EXIT_VALIDATION
    return _all_written(written)


def cmd_render(args: argparse.Namespace) -> int:
    svg_path = args.svg or str(Path(args.solution).with_name("scene.svg"))
    path = render_solution_file(args.solution, svg_path, verbose=args.verbose)
    print(f"[MAIN] Scene written to {path}")
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
    "validate": cmd_validate,
    "render": cmd_render,
}


def run_command(args: argparse.Namespace) -> int:
    """Dispatch a parsed command line and map failures to exit codes."""
    try:
        return COMMANDS[args.command](args)
    except ConfigError as e:
        print(f"[ERROR] Config error: {e}")
        return EXIT_CONFIG
    except SolutionFormatError as e:
        print(f"[ERROR] Malformed solution file: {e}")
        return EXIT_CONFIG
    except InfeasibleDeploymentError as e:
        print(f"[ERROR] Infeasible deployment: {e}")
        return EXIT_INFEASIBLE
    except KeyboardInterrupt:
        print("\n[MAIN] Interrupted by user.")
        return EXIT_ERROR
    except Exception as e:
        print(f"[MAIN] Unexpected error: {e}")
        if args.verbose:
            import traceback
            traceback.print_exc()
        return EXIT_ERROR


def main() -> None:
    parser = create_argument_parser()
    args = parser.parse_args()
    sys.exit(run_command(args))


if __name__ == "__main__":
    main()
