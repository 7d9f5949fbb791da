"""Command-line interface.

Subcommands: run (single time series), grid (101-step audit-probability
sweep), table (flip-probability matrix), verify (exact-enumeration check of
the kernel), equilibrium (long-run compliance estimate).  All inputs come
from flags, never the environment; identical flags give byte-identical data
files.  Exit codes: 0 success, 1 verification failure, 2 invalid
configuration.
"""

import argparse
import sys
import time
from contextlib import contextmanager

import numpy as np

from . import __version__
from .dynamics import ModelParams, flip_probability
from .errors import ConfigurationError
from .experiment import (
    estimate_equilibrium,
    run_grid,
    run_series,
    verify_against_enumeration,
)
from .output import (
    RunManifest,
    write_equilibrium_report,
    write_grid_csv,
    write_grid_matrix,
    write_manifest,
    write_series_csv,
    write_table,
    write_verification_report,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2


@contextmanager
def _open_out(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _write_sidecar_manifest(out_path, manifest):
    if out_path is None:
        return
    with open(out_path + ".manifest", "w", encoding="utf-8", newline="\n") as fh:
        write_manifest(fh, manifest)


def _add_lattice_flags(p, with_audit=True):
    p.add_argument("--temperature", type=float, required=True,
                   help="social temperature T in units of J/k_B")
    if with_audit:
        p.add_argument("--audit-prob", type=float, required=True,
                       help="per-sweep audit probability for a standing evader, in [0, 1]")
    p.add_argument("--punishment", type=int, required=True,
                   help="sweeps of forced honesty after a catch (k)")
    p.add_argument("--sweeps", type=int, required=True,
                   help="number of sweeps to simulate")
    p.add_argument("--size", type=int, default=256,
                   help="lattice side length (default 256; 1000 for full scale)")
    p.add_argument("--seed", type=int, default=0,
                   help="base seed of the splitmix64 stream (default 0)")


def _params_from_flags(parser, args, audit_prob):
    if not args.temperature > 0:
        parser.error("argument --temperature: must be positive")
    if not 0.0 <= audit_prob <= 1.0:
        parser.error("argument --audit-prob: must be within [0, 1]")
    if args.punishment < 0:
        parser.error("argument --punishment: must be non-negative")
    if args.sweeps < 1:
        parser.error("argument --sweeps: must be positive")
    if args.size < 2:
        parser.error("argument --size: must be at least 2")
    return ModelParams(
        temperature=args.temperature,
        audit_probability=audit_prob,
        punishment_length=args.punishment,
        side_length=args.size,
        sweeps=args.sweeps,
        seed=args.seed,
    )


def _cmd_run(parser, args):
    params = _params_from_flags(parser, args, args.audit_prob)
    start = time.perf_counter()
    series = run_series(params)
    duration = time.perf_counter() - start
    with _open_out(args.out) as fh:
        write_series_csv(fh, series)
    updates = params.sweeps * params.side_length ** 2
    _write_sidecar_manifest(args.out, RunManifest(
        command="run",
        version=__version__,
        params=params,
        duration_seconds=duration,
        site_updates_per_second=updates / duration if duration > 0 else 0.0,
    ))
    return EXIT_OK


def _cmd_grid(parser, args):
    params = _params_from_flags(parser, args, 0.0)
    if args.threads < 1:
        parser.error("argument --threads: must be positive")
    start = time.perf_counter()
    grid = run_grid(params, threads=args.threads)
    duration = time.perf_counter() - start
    with _open_out(args.out) as fh:
        write_grid_csv(fh, grid)
    if args.matrix_out is not None:
        with open(args.matrix_out, "w", encoding="utf-8", newline="\n") as fh:
            write_grid_matrix(fh, grid)
    updates = 101 * params.sweeps * params.side_length ** 2
    _write_sidecar_manifest(args.out, RunManifest(
        command="grid",
        version=__version__,
        params=params,
        duration_seconds=duration,
        site_updates_per_second=updates / duration if duration > 0 else 0.0,
        extra={"rows": "101", "p_a_step": "0.01"},
    ))
    return EXIT_OK


def _cmd_table(parser, args):
    try:
        temperatures = [float(tok) for tok in args.temperatures.split(",") if tok.strip()]
    except ValueError:
        parser.error("argument --temperatures: expected a comma-separated list of numbers")
    if not temperatures:
        parser.error("argument --temperatures: list is empty")
    if any(not t > 0 for t in temperatures):
        parser.error("argument --temperatures: every temperature must be positive")
    table = np.array(
        [[flip_probability(ie, t) for t in temperatures] for ie in (-4, -2, 0, 2, 4)]
    )
    with _open_out(args.out) as fh:
        write_table(fh, temperatures, table)
    return EXIT_OK


def _cmd_verify(parser, args):
    if args.size not in (2, 3, 4):
        parser.error("argument --size: enumeration supports sizes 2, 3, 4")
    if not args.temperature > 0:
        parser.error("argument --temperature: must be positive")
    if args.sweeps < 100:
        parser.error("argument --sweeps: need at least 100 measurement sweeps")
    report = verify_against_enumeration(
        args.size, args.temperature, sweeps=args.sweeps,
        burn_in=args.burn_in, seed=args.seed,
    )
    write_verification_report(sys.stdout, report)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def _cmd_equilibrium(parser, args):
    if args.burn_in < 0:
        parser.error("argument --burn-in: must be non-negative")
    if args.measure < 1:
        parser.error("argument --measure: must be positive")
    if args.seeds < 1:
        parser.error("argument --seeds: must be positive")
    if args.threads < 1:
        parser.error("argument --threads: must be positive")
    args.sweeps = args.burn_in + args.measure
    params = _params_from_flags(parser, args, args.audit_prob)
    start = time.perf_counter()
    estimate = estimate_equilibrium(
        params, args.burn_in, args.measure, args.seeds, threads=args.threads
    )
    duration = time.perf_counter() - start
    with _open_out(args.out) as fh:
        write_equilibrium_report(fh, estimate)
    updates = args.seeds * params.sweeps * params.side_length ** 2
    _write_sidecar_manifest(args.out, RunManifest(
        command="equilibrium",
        version=__version__,
        params=params,
        duration_seconds=duration,
        site_updates_per_second=updates / duration if duration > 0 else 0.0,
        extra={
            "burn_in": str(args.burn_in),
            "measure": str(args.measure),
            "seeds": str(args.seeds),
        },
    ))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="taxising",
        description="Heat-bath Ising tax-compliance simulator with audit-and-punishment enforcement",
    )
    parser.add_argument("--version", action="version", version=f"taxising {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="single time series as CSV")
    _add_lattice_flags(p_run)
    p_run.add_argument("--out", help="output CSV path (default: stdout)")

    p_grid = sub.add_parser("grid", help="audit probability swept 0..1 in one-percent steps")
    _add_lattice_flags(p_grid, with_audit=False)
    p_grid.add_argument("--out", help="long-form CSV path (default: stdout)")
    p_grid.add_argument("--matrix-out", help="also write a surface-plot matrix file")
    p_grid.add_argument("--threads", type=int, default=1,
                        help="rows to run concurrently (output independent of this)")

    p_table = sub.add_parser("table", help="flip-probability matrix")
    p_table.add_argument("--temperatures", default="0.25,2.0,2.5,3.0,25",
                         help="comma-separated temperature list")
    p_table.add_argument("--out", help="output path (default: stdout)")

    p_verify = sub.add_parser("verify", help="kernel vs exact enumeration")
    p_verify.add_argument("--size", type=int, required=True, help="lattice side (2, 3 or 4)")
    p_verify.add_argument("--temperature", type=float, required=True)
    p_verify.add_argument("--sweeps", type=int, default=1_000_000,
                          help="measurement sweeps (default 1e6)")
    p_verify.add_argument("--burn-in", type=int, default=10_000)
    p_verify.add_argument("--seed", type=int, default=0)

    p_eq = sub.add_parser("equilibrium", help="long-run evasion level across seeds")
    p_eq.add_argument("--temperature", type=float, required=True)
    p_eq.add_argument("--audit-prob", type=float, required=True)
    p_eq.add_argument("--punishment", type=int, required=True)
    p_eq.add_argument("--burn-in", type=int, default=8000)
    p_eq.add_argument("--measure", type=int, default=2000)
    p_eq.add_argument("--seeds", type=int, default=3)
    p_eq.add_argument("--size", type=int, default=256)
    p_eq.add_argument("--seed", type=int, default=0)
    p_eq.add_argument("--threads", type=int, default=1)
    p_eq.add_argument("--out", help="report path (default: stdout)")

    return parser


_HANDLERS = {
    "run": _cmd_run,
    "grid": _cmd_grid,
    "table": _cmd_table,
    "verify": _cmd_verify,
    "equilibrium": _cmd_equilibrium,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](parser, args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
