"""Command line interface: ``cpmgraphs {classify,census,iso,cycles,export}``."""

from __future__ import annotations

import argparse
import logging
import sys
from contextlib import contextmanager

from .census import (VerificationMismatch, enumerate_census, filter_records, format_table,
                     write_jsonl)
from .cycles import cycle_census, format_cycle_census
from .graphs import InvalidParamsError, Params, build_full, component
from .isomorphisms import IsoAnswer, UndecidedError, brute_force_iso, decide_isomorphic
from .permgroup import automorphism_group, transitivity_report
from .symmetry import classify

EXIT_OK, EXIT_INVALID, EXIT_MISMATCH = 0, 1, 2


def _add_params(p: argparse.ArgumentParser) -> None:
    for name in ("m", "s", "n", "r"):
        p.add_argument(f"--{name}", type=int, required=True)


def _params(args) -> Params:
    return Params(args.m, args.s, args.n, args.r)


@contextmanager
def _output(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


def cmd_classify(args) -> int:
    p = _params(args)
    cls = classify(p)
    print(f"{p}: {cls.kind.value}, stabilizer {cls.stabilizer_order}, |Aut| {cls.predicted_aut_order}")
    print(f"  order {cls.order}, normalized {cls.normalized}, witnesses {' '.join(cls.witness_recipe)}")
    if cls.order <= args.verify_below:
        g = component(p)
        group = automorphism_group(g)
        flags = transitivity_report(group, g)
        print(f"  brute force: |Aut| {group.order()}, vertex/edge/arc/2-arc transitive {flags.as_tuple()}")
        if group.order() != cls.predicted_aut_order:
            print("  MISMATCH", file=sys.stderr)
            return EXIT_MISMATCH
    return EXIT_OK


def cmd_census(args) -> int:
    records = enumerate_census(args.max_order, s_min=args.s_min, verify_below=args.verify_below,
                               canonical_only=not args.all_r, threads=args.threads)
    records = filter_records(records, args.cls, args.radius)
    with _output(args.out) as out:
        if args.format == "jsonl":
            write_jsonl(records, out)
        else:
            out.write(format_table(records) + "\n")
    for rec in records:
        for note in rec.notes:
            logging.info("%s: %s", rec.params, note)
    return EXIT_OK


def cmd_iso(args) -> int:
    left, right = Params.parse(args.left), Params.parse(args.right)
    verdict = decide_isomorphic(left, right)
    if verdict.answer is IsoAnswer.UNKNOWN_OPEN_CASE:
        try:
            bf = brute_force_iso(component(left), component(right), guard=args.guard)
        except UndecidedError as exc:
            print(f"open-case (theory); undecided ({exc})")
            return EXIT_OK
        word = "isomorphic" if bf.answer is IsoAnswer.ISOMORPHIC else "NOT isomorphic"
        how = "search" if bf.certificate == "search" else "invariants"
        print(f"open-case (theory); {word} ({how})")
        return EXIT_OK
    word = "isomorphic" if verdict.answer is IsoAnswer.ISOMORPHIC else "NOT isomorphic"
    print(f"{word} (theory: {verdict.certificate})")
    if args.verify:
        if verdict.witness is not None and not verdict.witness.verify():
            print("witness map failed the edge check", file=sys.stderr)
            return EXIT_MISMATCH
        try:
            bf = brute_force_iso(component(left), component(right), guard=args.guard)
        except UndecidedError as exc:
            print(f"brute force: undecided ({exc})")
            return EXIT_OK
        print(f"brute force: {bf.answer.value} ({bf.certificate})")
        if bf.answer is not verdict.answer:
            return EXIT_MISMATCH
    return EXIT_OK


def cmd_cycles(args) -> int:
    g = component(_params(args))
    print(f"{g.name}: {g.order} vertices, cycles through vertex 0 up to length {args.max_len}")
    print(format_cycle_census(cycle_census(g, args.max_len)))
    return EXIT_OK


def cmd_export(args) -> int:
    p = _params(args)
    g = build_full(p) if args.full else component(p)
    text = g.to_edge_list() if args.as_ == "edges" else g.to_adjacency_text()
    with _output(args.out) as out:
        out.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cpmgraphs", description="CPM graph toolkit")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="symmetry type of one graph")
    _add_params(p)
    p.add_argument("--verify-below", type=int, default=0,
                   help="brute-force Aut when the order is at most N")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("census", help="all graphs up to an order")
    p.add_argument("--max-order", type=int, required=True)
    p.add_argument("--s-min", type=int, default=2)
    p.add_argument("--class", dest="cls", choices=["hat", "at", "2at", "all"], default="all")
    p.add_argument("--radius", choices=["odd", "even", "all"], default="all")
    p.add_argument("--verify-below", type=int, default=0)
    p.add_argument("--format", choices=["jsonl", "table"], default="jsonl")
    p.add_argument("--out")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--all-r", action="store_true", help="sweep every r, not only canonical ones")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("iso", help="decide isomorphism of two graphs")
    p.add_argument("--left", required=True, help="m,s,n,r")
    p.add_argument("--right", required=True, help="m,s,n,r")
    p.add_argument("--verify", action="store_true", help="cross-check with brute force")
    p.add_argument("--guard", type=int, default=1500)
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("cycles", help="short cycle census by trace")
    _add_params(p)
    p.add_argument("--max-len", type=int, default=8)
    p.set_defaults(func=cmd_cycles)

    p = sub.add_parser("export", help="write a graph as text")
    _add_params(p)
    p.add_argument("--as", dest="as_", choices=["adjacency", "edges"], default="edges")
    p.add_argument("--full", action="store_true", help="whole construction, not the component")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s")
    try:
        return args.func(args)
    except (InvalidParamsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except VerificationMismatch as exc:
        print(f"verification mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
