"""``spectral-lab`` command line.

Exit codes: 0 when every check passes, 1 when any check fails, 2 for a
bad configuration.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigError
from .suite import SuiteConfig, emit_report, run_suite

COMMANDS = {
    "verify-matrix": ("matrix",),
    "verify-curve": ("curve",),
    "verify-fiber": ("fiber",),
    "numerology": ("numerology",),
    "full-suite": ("matrix", "curve", "fiber", "numerology"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--group", default="SL_H", help="SL_H, SO_STAR or SP_MM")
    common.add_argument("--m", type=int, default=2)
    common.add_argument("--genus", type=int, default=2)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=200)
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--coeff-degree", type=int, default=4)
    common.add_argument("--radius", type=float, default=1.5, help="base disc radius")
    common.add_argument("--backend", choices=("exact", "floating"), default="exact")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", help="write the report here instead of stdout")

    parser = _Parser(prog="spectral-lab", description="Seeded checks for Pfaffian spectral data.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def config_from_args(args) -> SuiteConfig:
    return SuiteConfig(
        group=args.group,
        m=args.m,
        genus=args.genus,
        seed=args.seed,
        trials=args.trials,
        tolerance=args.tol,
        coeff_degree=args.coeff_degree,
        disc_radius=args.radius,
        backend=args.backend,
        format=args.format,
        sections=COMMANDS[args.command],
    ).validate()


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        config = config_from_args(args)
    except ConfigError as exc:
        print(f"spectral-lab: {exc}", file=sys.stderr)
        return 2
    report = run_suite(config)
    text = emit_report(report, config.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return report.exit_status


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
