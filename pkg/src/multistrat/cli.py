"""Command-line entry point.

Exit codes: 0 pass, 1 a check failed, 2 bad configuration.
"""
from __future__ import annotations

import argparse
import logging
import sys

from ._backend import BACKEND
from .errors import ArgumentError, CheckFailure, ConfigError
from .funcs import constant_ones
from .harness.config import ExperimentConfig
from .harness.report import write_convergence_csv, write_transport_csv
from .harness.suites import (
    gn_table,
    mixed_tuple,
    run_agreement_suite,
    run_oracle_suite,
    run_polygonal_convergence,
    run_transport_suite,
)

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, help="override master_seed")
    p.add_argument("--out", help="output CSV path")
    p.add_argument("--paths", type=int, help="override num_paths")
    p.add_argument("--grid", type=int, help="override the Brownian grid size N")
    p.add_argument("--workers", type=int, help="parallel worker processes")


def _load(args) -> ExperimentConfig:
    cfg = ExperimentConfig.from_json(args.config)
    return cfg.with_overrides(master_seed=args.seed, num_paths=args.paths, N=args.grid, workers=args.workers, output=args.out)


def cmd_check(args) -> int:
    T = 1.0
    base = dict(
        T=T,
        N=args.grid or 2**14,
        num_paths=args.paths or 20,
        master_seed=42 if args.seed is None else args.seed,
        workers=args.workers or 1,
    )
    ok = True
    for n in range(1, 5):
        for tup in (constant_ones(n, T), mixed_tuple(n, T)):
            rep = run_agreement_suite(ExperimentConfig(n=n, functions=tup.funcs, **base))
            ok &= rep.passed
            print("\n".join(rep.lines()))
    orep = run_oracle_suite(transport_paths=args.transport_paths)
    print("\n".join(orep.lines()))
    ok &= orep.passed
    print("check:", "PASS" if ok else "FAIL")
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_converge(args) -> int:
    cfg = _load(args)
    if cfg.family != "polygonal":
        raise ConfigError("family", "converge needs family='polygonal'")
    cfg = cfg.with_overrides(record_timing=True if args.timing else None)
    rep = run_polygonal_convergence(cfg)
    print("\n".join(rep.lines()))
    if cfg.output:
        main, summ = write_convergence_csv(rep, cfg.output, record_timing=cfg.record_timing)
        print(f"wrote {main} and {summ}")
    return EXIT_PASS if rep.fitted_rate is not None and rep.fitted_rate < 0 else EXIT_FAIL


def cmd_transport(args) -> int:
    cfg = _load(args)
    rep = run_transport_suite(cfg)
    print("\n".join(rep.lines()))
    if cfg.output:
        print("wrote", write_transport_csv(rep, cfg.output, cfg.master_seed))
    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_tabulate(args) -> int:
    print("\n".join(gn_table(args.n)))
    return EXIT_PASS


def cmd_calibrate(args) -> int:
    from .harness.tolerance import calibrate, write_schedule

    res = calibrate(num_seeds=args.paths or 200)
    path = write_schedule(res, args.out)
    print(f"tol(N) = {res['constant']:.6g} * sqrt(T/N); written to {path}")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multistrat", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="evaluator agreement and oracle suites")
    _add_common(p)
    p.add_argument("--transport-paths", type=int, default=100_000, help="paths for the transport variance cross-check")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("converge", help="polygonal convergence study -> CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--timing", action="store_true", help="write measured runtime_ms (output no longer reproducible)")
    _add_common(p)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("transport", help="transport-process statistics -> CSV")
    p.add_argument("--config", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_transport)

    p = sub.add_parser("tabulate-gn", help="print the order-n multi-indices and weights")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_tabulate)

    p = sub.add_parser("calibrate-tol", help="rerun the tolerance refinement study")
    _add_common(p)
    p.set_defaults(func=cmd_calibrate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger(__name__).info("kernel backend: %s", BACKEND)
    try:
        return args.func(args)
    except (ConfigError, ArgumentError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CheckFailure as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
