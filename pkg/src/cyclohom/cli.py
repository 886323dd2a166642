"""Command-line interface: ``cyclohom {cyclotomic,verify,sweep,homology,snf}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .exactlinalg import IntMatrix, smith_normal_form
from .numtheory import factorize
from .polynomial import cyclotomic
from .simplicial import SimplicialComplex, reduced_homology
from .verify import (
    CHECKS,
    parse_checks,
    reports_to_csv,
    reports_to_json,
    run_many,
    squarefree_range,
    sweep,
)


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclohom",
        description="Cyclotomic coefficients from the homology of d-partite complexes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("text", "json", "csv")):
        p.add_argument("--format", choices=formats, default="text")
        p.add_argument("--out", type=Path, help="write output here instead of stdout")

    p = sub.add_parser("cyclotomic", help="print the coefficients of Phi_N, constant term first")
    p.add_argument("N", type=_positive_int)
    common(p, ("text", "json"))

    def harness(p):
        p.add_argument("--checks", default="main", help=f"comma-separated subset of {','.join(CHECKS)}")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--timing", action="store_true", help="include elapsed_ms (breaks byte-identical output)")
        common(p)

    p = sub.add_parser("verify", help="run checks for one squarefree N")
    p.add_argument("N", type=_positive_int)
    harness(p)

    p = sub.add_parser("sweep", help="run checks over all squarefree n <= --max-n")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--d", type=int, default=None, help="only n with exactly D prime factors")
    harness(p)

    p = sub.add_parser("homology", help="reduced integer homology of a complex file")
    p.add_argument("--in", dest="infile", type=Path, required=True)
    p.add_argument("--dim", type=int, required=True)
    common(p, ("text", "json"))

    p = sub.add_parser("snf", help="Smith normal form of a sparse matrix file")
    p.add_argument("--in", dest="infile", type=Path, required=True)
    common(p, ("text", "json"))
    return parser


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _render_reports(reports, fmt: str, timing: bool) -> str:
    if fmt == "json":
        return reports_to_json(reports, timing)
    if fmt == "csv":
        return reports_to_csv(reports, timing)
    lines = []
    for r in reports:
        line = f"n={r.n} {r.check_id}: {r.status} ({len(r.cases)} cases"
        line += f", {r.elapsed_ms:.1f} ms)" if timing and r.elapsed_ms is not None else ")"
        lines.append(line)
        for c in r.failures():
            lines.append(f"  FAIL {c.id}: {json.dumps(c.witness)}")
    return "\n".join(lines) + ("\n" if lines else "")


def _cmd_cyclotomic(args) -> int:
    if args.N < 1:
        raise UsageError(f"N must be a positive integer, got {args.N}")
    f = cyclotomic(args.N)
    _emit((f.to_json() if args.format == "json" else str(f)) + "\n", args.out)
    return 0


def _run_harness(args, ns) -> int:
    try:
        checks = parse_checks(args.checks)
    except ValueError as exc:
        raise UsageError(str(exc))
    if args.threads < 1:
        raise UsageError("--threads must be at least 1")
    reports = run_many([(n, c) for n in ns for c in checks], args.threads, args.seed)
    _emit(_render_reports(reports, args.format, args.timing), args.out)
    failed = [r for r in reports if not r.passed]
    for r in failed:
        print(f"check failed: n={r.n} {r.check_id} ({len(r.failures())} failing cases)", file=sys.stderr)
    return 1 if failed else 0


def _cmd_verify(args) -> int:
    if args.N < 2 or not factorize(args.N).squarefree:
        raise UsageError(f"verify needs a squarefree N >= 2, got {args.N}")
    return _run_harness(args, [args.N])


def _cmd_sweep(args) -> int:
    if args.max_n < 1:
        raise UsageError("--max-n must be positive")
    return _run_harness(args, squarefree_range(2, args.max_n, args.d))


def _cmd_homology(args) -> int:
    try:
        X = SimplicialComplex.from_json(args.infile.read_text())
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read complex: {exc}")
    if args.dim < -1:
        raise UsageError("--dim must be at least -1")
    h = reduced_homology(X, args.dim)
    if args.format == "json":
        text = json.dumps({"dim": args.dim, **h.to_dict()})
    else:
        text = str(h)
    _emit(text + "\n", args.out)
    return 0


def _cmd_snf(args) -> int:
    try:
        A = IntMatrix.from_text(args.infile.read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read matrix: {exc}")
    snf = smith_normal_form(A)
    factors = list(snf.invariant_factors)
    if args.format == "json":
        text = json.dumps({"rows": A.rows, "cols": A.cols, "rank": snf.rank, "invariant_factors": factors})
    else:
        text = " ".join(str(d) for d in factors)
    _emit(text + "\n", args.out)
    return 0


COMMANDS = {
    "cyclotomic": _cmd_cyclotomic,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
    "homology": _cmd_homology,
    "snf": _cmd_snf,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"cyclohom {args.command}: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
