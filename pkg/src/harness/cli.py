"""
Command-line front door for the TF phase-space toolkit.

    tfps verify    [--suite NAME] [--config FILE] [--out DIR]
    tfps evolve    --config FILE --out DIR
    tfps transform INPUT --out FILE [--window gaussian] [--adjoint]

Exit codes: 0 success, 1 failed verification, 2 usage, configuration or dump
errors, 3 unwritable output.
"""

import argparse
import logging
import os
import sys
from datetime import datetime
from typing import List, Optional

from dotenv import load_dotenv

from ..calculus.errors import ConfigurationError, DumpFormatError, PhaseSpaceError
from ..calculus.grid import ConfigField, PhaseField, l2_norm
from ..calculus.tfgrid import read_tfgrid, write_tfgrid
from ..calculus.wavepacket import default_window, wavepacket_adjoint, wavepacket_forward
from ..evolution.propagate import Method, evolve_exact, evolve_numeric, export_history, norm_drift
from ..validation.reports import format_table, generate_verification_report, results_table, summary_line
from ..validation.validate import SUITES, validate_suite
from .config import load_scenario

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_OUTPUT = 3

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
WINDOWS = {"gaussian": default_window}

_show_timestamps = True


def log(message: str) -> None:
    """Print a progress line, timestamped unless --no-timestamp was given."""
    if _show_timestamps:
        timestamp = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
        print(f"[{timestamp}] {message}")
    else:
        print(message)


def configure_logging(level: Optional[str]) -> None:
    level = (level or os.environ.get("TFPS_LOG_LEVEL", "WARNING")).upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format=LOG_FORMAT,
                        stream=sys.stderr, force=True)


def cmd_verify(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.config)
    grid = scenario.build_grid()
    log(f"Verifying suite {args.suite} on N={grid.N}, Lx={grid.Lx:g}, hbar={grid.hbar:g}")

    results = validate_suite(args.suite, grid)
    print(format_table(results_table(results['checks'])))
    print(summary_line(results))

    if args.out:
        report_path = generate_verification_report(results, args.out, timestamp=not args.no_timestamp)
        log(f"Report written to {report_path}")
    return EXIT_OK if results['validation_passed'] else EXIT_FAILED


def cmd_evolve(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.config)
    grid = scenario.build_grid()
    plan = scenario.build_plan()
    start = scenario.build_state(grid)
    log(f"Evolving {scenario.hamiltonian.preset} with {plan.method.value} to t={plan.t_final:g} "
        f"({plan.n_steps} steps)")

    history = evolve_numeric(plan, start)
    manifest = export_history(history, args.out, timestamp=not args.no_timestamp)
    log(f"Wrote {len(history)} snapshots and {manifest}")

    t_final, final = history[-1]
    print(f"final norm drift: {norm_drift(history)[-1][1]:.3e}")
    if plan.method != Method.EXACT and plan.t_final > 0:
        exact = evolve_exact(plan.hamiltonian, t_final, start)
        error = l2_norm(final - exact) / l2_norm(start)
        print(f"exact vs {plan.method.value.lower()} relative L2 error: {error:.3e}")
    return EXIT_OK


def cmd_transform(args: argparse.Namespace) -> int:
    try:
        field = read_tfgrid(args.input)
    except OSError as exc:
        raise DumpFormatError(f"cannot read {args.input}: {exc}") from exc
    window = WINDOWS[args.window](field.grid)

    if args.adjoint:
        if not isinstance(field, PhaseField):
            raise DumpFormatError(f"{args.input}: --adjoint needs a phase-space dump (j k re im rows)")
        psi = wavepacket_adjoint(field, window)
        write_tfgrid(psi, args.out, timestamp=not args.no_timestamp)
        norm = l2_norm(field)
        defect = l2_norm(wavepacket_forward(psi, window) - field) / norm if norm > 0 else 0.0
        print(f"range defect: {defect:.3e}")
        return EXIT_OK

    if not isinstance(field, ConfigField):
        raise DumpFormatError(f"{args.input}: transform needs a configuration-space dump (j re im rows)")
    image = wavepacket_forward(field, window)
    write_tfgrid(image, args.out, timestamp=not args.no_timestamp)
    print(f"isometry defect: {abs(l2_norm(image) - l2_norm(field)):.3e}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Scenario file ([grid], [state], [hamiltonian], [run])")
    common.add_argument("--no-timestamp", action="store_true", help="Leave wall-clock times out of output")
    common.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], type=str.upper,
                        help="Logging level (default TFPS_LOG_LEVEL or WARNING)")
    common.add_argument("--n-jobs", type=int, help="Worker threads for quadratures")

    parser = argparse.ArgumentParser(prog="tfps", description="TF phase-space toolkit")
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", parents=[common], help="Run invariant suites")
    verify.add_argument("--suite", default="all", choices=list(SUITES) + ["all"], help="Suite to run")
    verify.add_argument("--out", help="Directory for a markdown report")
    verify.set_defaults(handler=cmd_verify)

    evolve = commands.add_parser("evolve", parents=[common], help="Evolve a scenario and dump snapshots")
    evolve.add_argument("--out", required=True, help="Output directory")
    evolve.set_defaults(handler=cmd_evolve)

    transform = commands.add_parser("transform", parents=[common], help="Wavepacket transform of a dump")
    transform.add_argument("input", help="TFGRID dump to transform")
    transform.add_argument("--out", required=True, help="Output TFGRID file")
    transform.add_argument("--window", default="gaussian", choices=list(WINDOWS), help="Window preset")
    transform.add_argument("--adjoint", action="store_true", help="Apply the adjoint transform instead")
    transform.set_defaults(handler=cmd_transform)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    global _show_timestamps
    load_dotenv()
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    configure_logging(args.log_level)
    _show_timestamps = not args.no_timestamp
    if args.n_jobs is not None:
        if args.n_jobs < 1:
            print("error: --n-jobs must be >= 1", file=sys.stderr)
            return EXIT_USAGE
        os.environ["TFPS_N_JOBS"] = str(args.n_jobs)

    try:
        return args.handler(args)
    except (ConfigurationError, DumpFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_OUTPUT
    except (PhaseSpaceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
