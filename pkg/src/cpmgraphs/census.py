"""Census of CPM graphs up to a vertex bound."""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, TextIO

from .graphs import Params, component, component_order, radius_and_attachment
from .isomorphisms import (IsoAnswer, UndecidedError, trace_invariants_apply, brute_force_iso,
                           decide_isomorphic, normalize_params)
from .modring import is_valid_r
from .permgroup import automorphism_group, transitivity_report
from .symmetry import SymClass, SymKind, classify

log = logging.getLogger(__name__)

CLASS_FILTERS = {
    "hat": {SymKind.HALF_ARC},
    "at": {SymKind.ARC, SymKind.ARC_PX},
    "2at": {SymKind.TWO_ARC},
    "all": set(SymKind),
}


class VerificationMismatch(RuntimeError):
    """Brute force disagrees with the classification."""


@dataclass
class CensusRecord:
    params: Params
    order: int
    radius: int
    sym_class: SymClass
    verified: str = "theory_only"
    iso_class_id: int = -1
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        m, s, n, r = self.params.astuple()
        return {"m": m, "s": s, "n": n, "r": r, "order": self.order, "radius": self.radius,
                "class": self.sym_class.kind.value, "stab": self.sym_class.stabilizer_order,
                "aut_order": self.sym_class.predicted_aut_order, "verified": self.verified,
                "iso_class": self.iso_class_id}


def parameter_tuples(max_order: int, s_min: int = 2, s_max: int | None = None,
                     canonical_only: bool = True) -> Iterator[Params]:
    """Valid tuples with component order <= max_order, in (s, m, n, r) order.

    The bounds use the smallest possible component order for each prefix:
    2s * 2^s over all m, n; m s 2^s over all n; m s (n/2)^s for the given n.
    """
    s = s_min
    while 2 * s * 2 ** s <= max_order and (s_max is None or s <= s_max):
        m = 1
        while m * s * 2 ** s <= max_order:
            n = 3
            while m * s * (n // 2) ** s <= max_order:
                for r in range(1, n):
                    if not is_valid_r(m, s, n, r):
                        continue
                    p = Params(m, s, n, r)
                    if component_order(p) > max_order:
                        continue
                    if canonical_only and normalize_params(p) != p:
                        continue
                    yield p
                n += 1
            m += 1
        s += 1


def _verify(p: Params) -> tuple[Params, int, tuple]:
    g = component(p)
    group = automorphism_group(g)
    return p, group.order(), transitivity_report(group, g).as_tuple()


def _expected_flags(kind: SymKind) -> tuple[bool, bool, bool, bool]:
    return (True, True, kind is not SymKind.HALF_ARC, kind is SymKind.TWO_ARC)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            lo, hi = sorted((ra, rb), key=_sort_key)
            self.parent[hi] = lo


def _sort_key(p: Params):
    return (component_order(p), p.m, p.s, p.n, p.r)


def _group_classes(reps: list[Params], guard: int) -> tuple[_UnionFind, dict[Params, list[str]]]:
    """Union normalized tuples into isomorphism classes."""
    uf = _UnionFind(reps)
    notes: dict[Params, list[str]] = {p: [] for p in reps}
    by_order: dict[int, list[Params]] = {}
    for p in reps:
        by_order.setdefault(component_order(p), []).append(p)
    for group in by_order.values():
        for i, a in enumerate(group):
            for b in group[i + 1:]:
                outside = not (trace_invariants_apply(a) and trace_invariants_apply(b))
                if (a.m, a.s, a.n) != (b.m, b.s, b.n) and not outside:
                    continue
                open_case = False
                if (a.m, a.s, a.n) == (b.m, b.s, b.n):
                    verdict = decide_isomorphic(a, b)
                    open_case = verdict.answer is IsoAnswer.UNKNOWN_OPEN_CASE
                    if verdict.answer is IsoAnswer.ISOMORPHIC:
                        uf.union(a, b)
                        continue
                    if verdict.answer is IsoAnswer.NOT_ISOMORPHIC and not outside:
                        continue
                try:
                    bf = brute_force_iso(component(a), component(b), guard=guard)
                except UndecidedError:
                    for x in (a, b):
                        notes[x].append(f"undecided against {b if x is a else a}")
                    continue
                if open_case:
                    for x in (a, b):
                        notes[x].append(f"open case vs {b if x is a else a}: {bf.answer.value} ({bf.certificate})")
                if bf.answer is IsoAnswer.ISOMORPHIC:
                    uf.union(a, b)
    return uf, notes


def enumerate_census(max_order: int, s_min: int = 2, verify_below: int = 0,
                     canonical_only: bool = True, threads: int = 1,
                     s_max: int | None = None, guard: int = 1500) -> list[CensusRecord]:
    """Classify every CPM graph of order <= max_order, one record per isomorphism class.

    With ``canonical_only=False`` every valid tuple gets a record and
    records share the class id of their normalized representative.
    """
    tuples = list(parameter_tuples(max_order, s_min, s_max, canonical_only))
    norm = {p: normalize_params(p) for p in tuples}
    reps = sorted(set(norm.values()), key=_sort_key)
    uf, notes = _group_classes(reps, guard)

    roots = sorted({uf.find(p) for p in reps}, key=_sort_key)
    class_id = {root: k for k, root in enumerate(roots)}

    chosen = sorted(tuples, key=_sort_key) if not canonical_only else roots
    records = []
    for p in chosen:
        q = norm.get(p, p)
        cls = classify(p)
        rec = CensusRecord(p, component_order(p), radius_and_attachment(q)[0], cls,
                           iso_class_id=class_id[uf.find(q)], notes=list(notes.get(q, [])))
        records.append(rec)

    todo = [rec.params for rec in records if rec.order <= verify_below]
    if todo:
        if threads > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(_verify, todo))
        else:
            results = [_verify(p) for p in todo]
        got = {p: (order, flags) for p, order, flags in results}
        for rec in records:
            if rec.params not in got:
                continue
            order, flags = got[rec.params]
            if order != rec.sym_class.predicted_aut_order or flags != _expected_flags(rec.sym_class.kind):
                raise VerificationMismatch(
                    f"{rec.params}: brute force |Aut| = {order}, flags {flags}; "
                    f"classification predicts {rec.sym_class.predicted_aut_order}, {rec.sym_class.kind.value}")
            rec.verified = "brute_force_confirmed"
    return records


def filter_records(records: Iterable[CensusRecord], cls: str = "all",
                   radius: str = "all") -> list[CensusRecord]:
    kinds = CLASS_FILTERS[cls]
    out = []
    for rec in records:
        if rec.sym_class.kind not in kinds:
            continue
        odd = rec.sym_class.normalized.n % 2 == 1
        if radius == "odd" and not odd or radius == "even" and odd:
            continue
        out.append(rec)
    return out


def write_jsonl(records: Iterable[CensusRecord], out: TextIO) -> None:
    for rec in records:
        out.write(json.dumps(rec.to_json(), separators=(",", ":")) + "\n")


def format_table(records: Iterable[CensusRecord]) -> str:
    head = ("graph", "order", "radius", "class", "stab", "|Aut|", "verified", "iso", "notes")
    rows = [head]
    for rec in records:
        rows.append((str(rec.params), str(rec.order), str(rec.radius), rec.sym_class.kind.value,
                     str(rec.sym_class.stabilizer_order), str(rec.sym_class.predicted_aut_order),
                     rec.verified, str(rec.iso_class_id), "; ".join(rec.notes)))
    widths = [max(len(r[j]) for r in rows) for j in range(len(head))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)
