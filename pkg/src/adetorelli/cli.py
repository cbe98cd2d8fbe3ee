"""Command-line entry point: ``adetorelli <command> INSTANCE [flags]``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import AdeTorelliError, InputError
from .instance import parse_instance
from .report import COMMANDS, EXIT_USAGE, exit_code_for_error, parse_degree_range, render_text, run_command


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="adetorelli",
        description="Exact Jacobian-ring and infinitesimal Torelli checks for hypersurfaces with ADE singularities.",
    )
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("instance", help="instance file (JSON)")
    ap.add_argument("--degree-range", metavar="a..b", help="degrees to tabulate (hilbert, koszul)")
    ap.add_argument("--degree", type=int, metavar="m", help="single degree (koszul)")
    ap.add_argument("--nmax", type=int, metavar="N", help="jet truncation bound for local algebras")
    ap.add_argument("--budget", type=int, metavar="COLS", help="largest allowed monomial basis size")
    ap.add_argument("--json", metavar="PATH", help="write the machine-readable report here")
    ap.add_argument("--strict-parity", action="store_true",
                    help="error instead of warning on odd n for algebraic commands")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors; we reserve 2
        return EXIT_USAGE if exc.code else 0
    try:
        flags = {"strict_parity": args.strict_parity, "degree": args.degree}
        if args.degree_range:
            flags["degree_range"] = parse_degree_range(args.degree_range)
        if args.degree is not None and args.degree < 0:
            raise InputError("--degree must be non-negative")
        if args.nmax is not None and args.nmax < 2:
            raise InputError("--nmax must be at least 2")
        if args.budget is not None and args.budget < 1:
            raise InputError("--budget must be positive")
        H = parse_instance(args.instance, nmax=args.nmax, budget=args.budget)
        report = run_command(args.command, H, flags)
    except (AdeTorelliError, ValueError, OSError) as exc:
        code = exit_code_for_error(exc)
        print(f"error: {exc}", file=sys.stderr)
        return code
    sys.stdout.write(render_text(report))
    if args.json:
        Path(args.json).write_text(report.to_json())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
