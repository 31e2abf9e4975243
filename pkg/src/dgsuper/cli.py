"""Command line entry point: ``dgsuper run | sweep | check``.

Exit codes: 0 success, 1 usage error, 2 acceptance failure.
"""
from __future__ import annotations

import argparse
import logging
import sys

from . import acceptance
from .experiment import ExperimentConfig, describe, doubling, method_comparison_table, run_experiment, sweep

EXIT_OK, EXIT_USAGE, EXIT_ACCEPTANCE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dgsuper", description="Superconvergent DG initialization experiments "
                                                 "for u_t + u_x = 0.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log each solve")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="one convergence study")
    run.add_argument("--config", help="key=value file; flags override its entries")
    run.add_argument("--problem", help="example1 (periodic) or example2 (inflow)")
    run.add_argument("--k", type=int, help="polynomial degree")
    run.add_argument("--method", type=int, choices=[1, 2, 3, 4], help="initialization method")
    run.add_argument("--nmin", type=int, help="coarsest mesh (default 8)")
    run.add_argument("--nmax", type=int, help="finest mesh (default 64)")
    run.add_argument("--mesh", choices=["uniform", "split"], help="override the problem's mesh")
    run.add_argument("--tableau", help="rk4, ssprk33 or a tableau file")
    run.add_argument("--policy", help="auto, default, cfl:<c>:<p> or fixed:<c>:<p>")
    run.add_argument("--out", help="CSV path; the table goes next to it as .txt")
    run.add_argument("--dump-dir", dest="dump_dir", help="write final fields here")
    run.add_argument("--workers", type=int, help="parallel solves across N")

    sw = sub.add_parser("sweep", help="all methods on both problems for one k")
    sw.add_argument("--k", type=int, default=3)
    sw.add_argument("--nmax", type=int, default=64, help="finest mesh for example1")
    sw.add_argument("--tableau", default="rk4")
    sw.add_argument("--out-dir", dest="out_dir")
    sw.add_argument("--workers", type=int, default=1)

    sub.add_parser("check", help="run the acceptance criteria")
    return parser


def _run(args) -> int:
    overrides = {key: getattr(args, key) for key in
                 ("problem", "k", "method", "nmin", "nmax", "mesh", "tableau", "policy", "out",
                  "dump_dir", "workers")}
    if args.config:
        config = ExperimentConfig.from_file(args.config, **overrides)
    else:
        config = ExperimentConfig.from_mapping({k: v for k, v in overrides.items() if v is not None})
    report = run_experiment(config)
    print(report.to_table(title=describe(config)), end="")
    return EXIT_OK


def _sweep(args) -> int:
    ns = {"example1": doubling(8, args.nmax), "example2": doubling(4, max(4, args.nmax // 2))}
    reports = sweep(args.k, ns, args.out_dir, tableau=args.tableau, workers=args.workers)
    for problem in ns:
        print(method_comparison_table(reports, problem, args.k))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.command == "check":
        return EXIT_OK if acceptance.run_all() else EXIT_ACCEPTANCE
    try:
        return _run(args) if args.command == "run" else _sweep(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"dgsuper: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
