"""
mirror-povm Command Line
Single-point reports, (θ, p) sweeps, certificate checks, oracle sandwiches and network simulation
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from src.config import Config, load_key_value_file
from src.errors import MirrorPovmError
from src.measurement.ensemble import MirrorEnsemble, from_degrees, make_ensemble
from src.measurement.operators import check_helstrom
from src.measurement.strategy import optimal_povm, srm_success
from src.network.naimark import extend_unitary, max_born_deviation, simulate_network
from src.sweep import build_spec, format_csv, run_sweep, write_csv, write_json
from src.verification.oracle import sandwich

logger = logging.getLogger("mirror_povm.cli")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


# ===== Helpers =====

def _ensemble(args: argparse.Namespace) -> MirrorEnsemble:
    if args.degrees:
        return from_degrees(args.theta, args.p)
    return make_ensemble(args.theta, args.p)


def _render(report: Dict[str, Any], fmt: str) -> str:
    if fmt == "csv":
        # nested fields (POM rows, residual lists, per-state reports) stay JSON-only
        columns = [
            key for key, value in report.items() if not isinstance(value, (list, tuple, dict))
        ]
        return format_csv([report], columns).rstrip("\n")
    return json.dumps(report, indent=2)


def _emit(report: Dict[str, Any], args: argparse.Namespace) -> None:
    text = _render(report, args.format)
    if args.out:
        path = Path(args.out)
        with open(path, "w") as f:
            f.write(text + "\n")
        logger.info(f"Report written to {path}")
    else:
        print(text)


def _point(e: MirrorEnsemble) -> Dict[str, float]:
    return {"theta": e.theta, "p": e.p}


# ===== Subcommands =====

def cmd_optimal(args: argparse.Namespace) -> int:
    e = _ensemble(args)
    result = optimal_povm(e)
    certificate = check_helstrom(e, result.povm)
    report = {
        **_point(e),
        **result.to_dict(),
        "p_success_srm": srm_success(e),
        "certificate_ok": certificate.passed,
    }
    _emit(report, args)
    return EXIT_OK if certificate.passed else EXIT_CHECK_FAILED


def cmd_sweep(args: argparse.Namespace) -> int:
    file_values = load_key_value_file(Path(args.config)) if args.config else None
    overrides = {
        "theta_min": args.theta_min,
        "theta_max": args.theta_max,
        "p_min": args.p_min,
        "p_max": args.p_max,
        "n_theta": args.n_theta,
        "n_p": args.n_p,
        "columns": args.columns,
    }
    spec = build_spec(file_values, overrides, degrees=args.degrees)
    rows = run_sweep(spec, workers=args.workers)

    if args.out:
        out = Path(args.out)
    else:
        Config.ensure_directories()
        out = Config.DATA_DIR / f"sweep.{args.format}"
    if args.format == "json":
        write_json(rows, spec.columns, out)
    else:
        write_csv(rows, spec.columns, out)
    logger.info(f"Wrote {len(rows)} rows to {out}")

    failed = [row for row in rows if not row["certificate_ok"]]
    return EXIT_OK if not failed else EXIT_CHECK_FAILED


def cmd_verify(args: argparse.Namespace) -> int:
    e = _ensemble(args)
    result = optimal_povm(e)
    certificate = check_helstrom(e, result.povm, tol=args.tol)
    _emit({**_point(e), "regime": result.regime.tag.value, **certificate.to_dict()}, args)
    return EXIT_OK if certificate.passed else EXIT_CHECK_FAILED


def cmd_oracle(args: argparse.Namespace) -> int:
    e = _ensemble(args)
    result = sandwich(e, args.resolution)
    _emit({**_point(e), **result.to_dict()}, args)
    ok = result.contains_closed_form and result.weak_duality_ok
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_simulate(args: argparse.Namespace) -> int:
    e = _ensemble(args)
    strategy = optimal_povm(e)
    u = extend_unitary(strategy.network_parameter)
    simulation = simulate_network(u, e, args.shots, seed=args.seed, shards=args.shards)
    report = {
        **_point(e),
        "regime": strategy.regime.tag.value,
        "a": u.a,
        "degenerate": strategy.degenerate,
        "closed_form_success": strategy.success,
        "orthogonality_defect": u.orthogonality_defect(),
        "max_born_deviation": max_born_deviation(u, e, strategy.povm),
        **simulation.to_dict(),
    }
    _emit(report, args)
    return EXIT_OK


# ===== Parser =====

def _add_point_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--theta", type=float, required=True, help="Half-angle θ (radians unless --degrees)")
    parser.add_argument("--p", type=float, required=True, help="Prior of states 1 and 2, in [0, 1/2]")
    parser.add_argument("--degrees", action="store_true", help="Read θ in degrees")
    parser.add_argument("--out", type=str, help="Write the report to this file instead of stdout")
    parser.add_argument("--format", choices=["csv", "json"], default="json", help="Report format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mirror-povm",
        description="Minimum-error discrimination of three mirror-symmetric qubit states",
    )
    parser.add_argument(
        "--log-level",
        default=Config.LOG_LEVEL,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Logging level (logs go to stderr)",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    optimal = commands.add_parser("optimal", help="Optimal strategy at one (θ, p)")
    _add_point_arguments(optimal)
    optimal.set_defaults(handler=cmd_optimal)

    sweep = commands.add_parser("sweep", help="Evaluate a (θ, p) grid and write CSV or JSON")
    sweep.add_argument("--theta-min", dest="theta_min", type=float)
    sweep.add_argument("--theta-max", dest="theta_max", type=float)
    sweep.add_argument("--p-min", dest="p_min", type=float)
    sweep.add_argument("--p-max", dest="p_max", type=float)
    sweep.add_argument("--n-theta", dest="n_theta", type=int)
    sweep.add_argument("--n-p", dest="n_p", type=int)
    sweep.add_argument("--columns", type=str, help="Comma-separated output columns")
    sweep.add_argument("--degrees", action="store_true", help="Read θ bounds in degrees")
    sweep.add_argument("--config", type=str, help="key=value file with sweep settings (flags override)")
    sweep.add_argument("--workers", type=int, default=1, help="Worker processes")
    sweep.add_argument("--format", choices=["csv", "json"], default="csv")
    sweep.add_argument("--out", type=str, help="Output file (default: <output dir>/sweep.<format>)")
    sweep.set_defaults(handler=cmd_sweep)

    verify = commands.add_parser("verify", help="Check the optimality certificate of the closed form")
    _add_point_arguments(verify)
    verify.add_argument("--tol", type=float, default=None, help="Certificate tolerance")
    verify.set_defaults(handler=cmd_verify)

    oracle = commands.add_parser("oracle", help="Bracket the closed form with primal and dual searches")
    _add_point_arguments(oracle)
    oracle.add_argument("--resolution", type=float, default=Config.ORACLE_RESOLUTION)
    oracle.set_defaults(handler=cmd_oracle)

    simulate = commands.add_parser("simulate", help="Monte Carlo run of the optical network")
    _add_point_arguments(simulate)
    simulate.add_argument("--shots", type=int, default=100_000)
    simulate.add_argument("--seed", type=int, default=Config.DEFAULT_SEED)
    simulate.add_argument("--shards", type=int, default=1)
    simulate.set_defaults(handler=cmd_simulate)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run the command line; returns the process exit code"""
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        stream=sys.stderr,
    )

    try:
        return args.handler(args)
    except (MirrorPovmError, ValidationError) as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        if exc.filename:
            print(f"Error: cannot access {exc.filename}: {exc.strerror}", file=sys.stderr)
        else:
            print(f"Error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
