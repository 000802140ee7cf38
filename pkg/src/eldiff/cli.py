"""Command-line front end.

Subcommands: ``diff`` (the default), ``gen``, ``oracle``, and ``check``.
Exit codes for ``diff``: 0 no difference, 1 difference found and reported,
2 usage or input error, 3 internal invariant violation.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .model import InternalError, ModelError, Signature
from .normalize import NormalizedTerminology
from .oracle import brute_force_witnesses, generate_random_terminology
from .reasoner import classify, entails_subsumption
from .normalize import ensure_normalized
from .diff import compute_diff, default_signature
from .syntax import (
    ParseError, parse_concept, parse_signature, parse_terminology,
    render_report, render_terminology,
)
from .witnesses import CyclicityError

SUBCOMMANDS = ("diff", "gen", "oracle", "check")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eldiff",
        description="logical difference between two terminologies over a signature")
    sub = parser.add_subparsers(dest="command", required=True)

    p_diff = sub.add_parser("diff", help="compare two terminology files")
    p_diff.add_argument("t1", type=Path)
    p_diff.add_argument("t2", type=Path)
    p_diff.add_argument("--mode", choices=("concept", "instance", "query", "all"),
                        default="all")
    p_diff.add_argument("--sig", type=Path, default=None)
    p_diff.add_argument("--direction", choices=("both", "forward", "backward"),
                        default="both")
    p_diff.add_argument("--strategy", choices=("auto", "notwitness", "abox"),
                        default="auto")
    p_diff.add_argument("--examples", action="store_true")
    p_diff.add_argument("--output", choices=("text", "tsv"), default="text")
    p_diff.add_argument("--out", type=Path, default=None)
    p_diff.add_argument("--parallel", type=int, default=1, metavar="N")
    p_diff.add_argument("--max-example-size", type=int, default=64, metavar="N")
    p_diff.add_argument("--seed", type=int, default=0, metavar="N")

    p_gen = sub.add_parser("gen", help="generate a random acyclic terminology")
    p_gen.add_argument("--num-defined", type=int, default=100)
    p_gen.add_argument("--num-roles", type=int, default=62)
    p_gen.add_argument("--eq-ratio", type=float, default=0.525)
    p_gen.add_argument("--exists-ratio", type=float, default=0.304)
    p_gen.add_argument("--max-conj", type=int, default=2)
    p_gen.add_argument("--seed", type=int, default=0, metavar="N")
    p_gen.add_argument("--out", type=Path, default=None)

    p_oracle = sub.add_parser("oracle", help="brute-force witness search")
    p_oracle.add_argument("t1", type=Path)
    p_oracle.add_argument("t2", type=Path)
    p_oracle.add_argument("--sig", type=Path, default=None)
    p_oracle.add_argument("--mode", choices=("concept", "instance", "query", "all"),
                          default="all")
    p_oracle.add_argument("--depth-cap", type=int, default=2)
    p_oracle.add_argument("--conj-cap", type=int, default=2)
    p_oracle.add_argument("--out", type=Path, default=None)

    p_check = sub.add_parser("check", help="check one concept inclusion")
    p_check.add_argument("t", type=Path)
    p_check.add_argument("lhs")
    p_check.add_argument("rhs")
    return parser


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as e:
        raise ModelError(f"cannot read {path}: {e}") from None


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _signature_for(args, t1, t2) -> Signature:
    if args.sig is not None:
        return parse_signature(_read(args.sig))
    return default_signature(t1, t2)


def _cmd_diff(args) -> int:
    t1 = parse_terminology(_read(args.t1))
    t2 = parse_terminology(_read(args.t2))
    sigma = _signature_for(args, t1, t2)
    report = compute_diff(
        t1, t2, sigma, mode=args.mode, direction=args.direction,
        strategy=args.strategy, examples=args.examples,
        max_example_size=args.max_example_size, parallel=args.parallel)
    _emit(render_report(report, args.output), args.out)
    return 1 if report.has_difference() else 0


def _cmd_gen(args) -> int:
    t = generate_random_terminology(
        args.num_defined, args.num_roles, args.eq_ratio, args.exists_ratio,
        args.max_conj, args.seed)
    _emit(render_terminology(t), args.out)
    return 0


def _cmd_oracle(args) -> int:
    t1 = parse_terminology(_read(args.t1))
    t2 = parse_terminology(_read(args.t2))
    sigma = _signature_for(args, t1, t2)
    modes = ("concept", "instance", "query") if args.mode == "all" else (args.mode,)
    n1, n2 = ensure_normalized(t1), ensure_normalized(t2)
    found = brute_force_witnesses(n1, n2, classify(n1), classify(n2), sigma,
                                  args.depth_cap, args.conj_cap, modes)
    lines = []
    for mode in modes:
        ms = found[mode]
        for r, s in sorted(ms.role_wtn):
            lines.append(f"{mode}\trole\t{r} {s}")
        for a in sorted(ms.rhs_wtn):
            lines.append(f"{mode}\trhs\t{a}")
        for a in sorted(ms.lhs_atomic):
            lines.append(f"{mode}\tlhs-atomic\t{a}")
        for r in sorted(ms.lhs_dom):
            lines.append(f"{mode}\tlhs-dom\t{r}")
        for r in sorted(ms.lhs_ran):
            lines.append(f"{mode}\tlhs-ran\t{r}")
    _emit("\n".join(lines) + ("\n" if lines else ""), args.out)
    return 1 if lines else 0


def _cmd_check(args) -> int:
    t = parse_terminology(_read(args.t))
    lhs = parse_concept(args.lhs)
    rhs = parse_concept(args.rhs)
    holds = entails_subsumption(t, lhs, rhs)
    sys.stdout.write("entailed\n" if holds else "not-entailed\n")
    return 0 if holds else 1


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] not in SUBCOMMANDS and not argv[0] in ("-h", "--help"):
        argv.insert(0, "diff")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    handlers = {"diff": _cmd_diff, "gen": _cmd_gen,
                "oracle": _cmd_oracle, "check": _cmd_check}
    try:
        return handlers[args.command](args)
    except (ParseError, CyclicityError, ModelError, ValueError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except InternalError as e:
        sys.stderr.write(f"internal error: {e}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
