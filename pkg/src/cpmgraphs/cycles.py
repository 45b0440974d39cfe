"""Short cycles, anchors and traces.

A 2-path (x, y, z) is an anchor when x and z lie on the same level; the
code of a closed walk records ``a`` or ``n`` at every vertex and the trace
of a cycle is its code up to rotation and reflection.
"""

from __future__ import annotations

import re
from collections import Counter, deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .graphs import CpmGraph, Vertex

MAX_LEN = 10


class TwoPathKind(Enum):
    NON_ANCHOR = "non-anchor"
    POSITIVE_ANCHOR = "positive anchor"
    NEGATIVE_ANCHOR = "negative anchor"

    @property
    def is_anchor(self) -> bool:
        return self is not TwoPathKind.NON_ANCHOR


def _idx(g: CpmGraph, x) -> int:
    if isinstance(x, (int, np.integer)):
        return int(x)
    return g.index(x)


def classify_two_path(g: CpmGraph, path) -> TwoPathKind:
    """Anchor type of the 2-path (x, y, z); vertices or indices."""
    x, y, z = (_idx(g, u) for u in path)
    if x == z or not (g.has_edge(x, y) and g.has_edge(y, z)):
        raise ValueError("not a 2-path")
    lx, ly, lz = int(g.level[x]), int(g.level[y]), int(g.level[z])
    if lx != lz:
        return TwoPathKind.NON_ANCHOR
    # with two levels V_(i-1) = V_(i+1); the first clause wins
    if lx == (ly - 1) % g.nlevels:
        return TwoPathKind.POSITIVE_ANCHOR
    return TwoPathKind.NEGATIVE_ANCHOR


def two_paths_at(g: CpmGraph, y: int) -> list[tuple[int, int, int]]:
    nb = g.neighbors(y)
    return [(nb[a], y, nb[b]) for a in range(len(nb)) for b in range(a + 1, len(nb))]


# --- codes and traces ------------------------------------------------------------

def expand(text: str) -> str:
    """'a^2n^6' -> 'aannnnnn'."""
    text = text.replace(" ", "")
    if not re.fullmatch(r"(?:[an](?:\^\d+)?)+", text):
        raise ValueError(f"bad trace {text!r}")
    return "".join(sym * (int(exp) if exp else 1)
                   for sym, exp in re.findall(r"([an])(?:\^(\d+))?", text))


def exponent_form(code: str) -> str:
    """'aannnnnn' -> 'a^2n^6'."""
    parts = []
    for m in re.finditer(r"a+|n+", code):
        run = m.group()
        parts.append(run[0] if len(run) == 1 else f"{run[0]}^{len(run)}")
    return "".join(parts)


def canonical_code(code: str) -> str:
    """Lexicographic minimum over rotations and reflections."""
    if not code:
        raise ValueError("empty code")
    best = code
    for word in (code, code[::-1]):
        for k in range(len(word)):
            cand = word[k:] + word[:k]
            if cand < best:
                best = cand
    return best


def disbalancedness(code: str) -> int:
    """|k_1 - k_2 + k_3 - ...| for the code a n^k1 a n^k2 ...; the length if no anchors."""
    t = code.count("a")
    if t == 0:
        return len(code)
    if t % 2:
        raise ValueError("odd number of anchors")
    k = code.index("a")
    word = code[k:] + code[:k]
    runs = [len(chunk) for chunk in word[1:].split("a")]
    return abs(sum((-1) ** (j + 1) * kj for j, kj in enumerate(runs)))


@dataclass(frozen=True)
class Trace:
    canonical_code: str
    length: int
    disbalancedness: int

    @classmethod
    def from_code(cls, code: str) -> "Trace":
        return cls(canonical_code(code), len(code), disbalancedness(code))

    @classmethod
    def parse(cls, text: str) -> "Trace":
        return cls.from_code(expand(text))

    @property
    def exponent_form(self) -> str:
        return exponent_form(self.canonical_code)

    @property
    def coiled(self) -> bool:
        return self.disbalancedness != 0

    def __str__(self):
        return self.exponent_form


def _check_cycle(g: CpmGraph, cycle: Sequence[int]) -> None:
    k = len(cycle)
    if k < 3 or len(set(cycle)) != k:
        raise ValueError("not a cycle")
    for j in range(k):
        if not g.has_edge(cycle[j], cycle[(j + 1) % k]):
            raise ValueError("not a cycle")


def code_of_cycle(g: CpmGraph, cycle: Sequence[int]) -> str:
    lv = g.level
    k = len(cycle)
    return "".join("a" if lv[cycle[j - 1]] == lv[cycle[(j + 1) % k]] else "n" for j in range(k))


def trace_of_cycle(g: CpmGraph, cycle: Sequence, check: bool = True) -> Trace:
    cycle = [_idx(g, x) for x in cycle]
    if check:
        _check_cycle(g, cycle)
    return Trace.from_code(code_of_cycle(g, cycle))


# --- explicit cycles ------------------------------------------------------------

def _explicit(g: CpmGraph, layout: list[tuple[int, list[int]]]) -> tuple[int, ...]:
    cycle = tuple(g.index(Vertex(i, tuple(v))) for i, v in layout)
    _check_cycle(g, cycle)
    return cycle


def generic_eight_cycle(g: CpmGraph) -> tuple[int, ...]:
    """The 8-cycle through <0;0>, <1;e_0>, <2;e_0+re_1> that every CPM graph with ms >= 3 has."""
    p = g.params
    if p is None or p.ms < 3:
        raise ValueError("needs a CPM graph with ms >= 3")
    r, s = p.r, p.s

    def vec(a, b):
        v = [0] * s
        v[0], v[1] = a, b
        return v

    layout = [(0, vec(0, 0)), (1, vec(1, 0)), (2, vec(1, r)), (1, vec(1, 2 * r)),
            (0, vec(0, 2 * r)), (1, vec(-1, 2 * r)), (2, vec(-1, r)), (1, vec(-1, 0))]
    return _explicit(g, layout)


def coiled_six_cycle(g: CpmGraph) -> tuple[int, ...]:
    """The 6-cycle <0;0>, <1;e_0>, <2;e_0+re_1>, <0;e_0+re_1+r^2e_2>, ... for m = 1, s = 3."""
    p = g.params
    if p is None or p.s != 3 or p.m != 1:
        raise ValueError("needs m = 1 and s = 3")
    r, r2 = p.r, p.r * p.r
    layout = [(0, [0, 0, 0]), (1, [1, 0, 0]), (2, [1, r, 0]), (0, [1, r, r2]),
            (1, [0, r, r2]), (2, [0, 0, r2])]
    return _explicit(g, layout)


# --- enumeration ------------------------------------------------------------------

def _check_len(max_len: int) -> None:
    if max_len > MAX_LEN:
        raise ValueError(f"max_len is capped at {MAX_LEN}")


def _distances(g: CpmGraph, src: int, limit: int) -> np.ndarray:
    dist = np.full(g.order, limit + 1, dtype=np.int64)
    dist[src] = 0
    queue = deque([src])
    adj = g.adj
    while queue:
        u = queue.popleft()
        if dist[u] >= limit:
            continue
        for w in adj[u]:
            if dist[w] > dist[u] + 1:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def _paths(g: CpmGraph, start: int, goal: int, blocked: set, max_edges: int,
           allowed=None) -> Iterable[list[int]]:
    """Simple paths start -> goal with at most max_edges edges avoiding blocked."""
    adj = g.adj.tolist()
    dist = _distances(g, goal, max_edges).tolist()
    path = [start]
    on = set(blocked) | {start}

    def rec(u):
        if u == goal:
            yield list(path)
            return
        left = max_edges - (len(path) - 1)
        for w in adj[u]:
            if w in on or dist[w] > left - 1:
                continue
            if allowed is not None and not allowed(w):
                continue
            path.append(w)
            on.add(w)
            yield from rec(w)
            on.discard(w)
            path.pop()

    if start == goal:
        yield [start]
        return
    yield from rec(start)


def cycles_through_vertex(g: CpmGraph, v: int = 0, max_len: int = 8) -> list[tuple[int, ...]]:
    """Every cycle of length <= max_len through v, once, starting at v."""
    _check_len(max_len)
    out = []
    nb = g.neighbors(v)
    for a in nb:
        for b in nb:
            if a >= b:
                continue
            for path in _paths(g, a, b, {v}, max_len - 2):
                out.append((v, *path))
    return out


def enumerate_cycles(g: CpmGraph, max_len: int = 8) -> list[tuple[Trace, tuple[int, ...]]]:
    """Every cycle of length <= max_len exactly once, as (trace, cycle).

    Each cycle is reported from its least vertex, in the direction whose
    second vertex is smaller than its last.
    """
    _check_len(max_len)
    out = []
    for v in range(g.order):
        nb = [w for w in g.neighbors(v) if w > v]
        for a in nb:
            for b in nb:
                if a >= b:
                    continue
                for path in _paths(g, a, b, {v}, max_len - 2, allowed=lambda w, v=v: w > v):
                    cyc = (v, *path)
                    out.append((trace_of_cycle(g, cyc, check=False), cyc))
    return out


def monotone_cycles_through(g: CpmGraph, v: int = 0) -> int:
    """Number of cycles of trace n^(ms) through v: walks climbing every level once.

    Counted by propagating along up-edges, so it is not subject to the
    length cap.
    """
    counts = {v: 1}
    adj = g.adj.tolist()
    for _ in range(g.nlevels):
        nxt: dict[int, int] = {}
        for u, c in counts.items():
            for w in adj[u][:2]:
                nxt[w] = nxt.get(w, 0) + c
        counts = nxt
    return counts.get(v, 0)


def count_cycles_through(g: CpmGraph, path, max_len: int = 8, trace_filter=None,
                         length: int | None = None) -> int:
    """Cycles of length <= max_len (or exactly ``length``) containing the 2-path x-y-z."""
    _check_len(max_len)
    x, y, z = (_idx(g, u) for u in path)
    classify_two_path(g, (x, y, z))
    want = None
    if trace_filter is not None:
        want = trace_filter if isinstance(trace_filter, Trace) else Trace.parse(trace_filter)
        length = want.length
    count = 0
    for p in _paths(g, z, x, {y}, max_len - 2):
        cyc = (y, *p)
        if length is not None and len(cyc) != length:
            continue
        if want is not None and trace_of_cycle(g, cyc, check=False) != want:
            continue
        count += 1
    return count


# --- structural cycle rules--------------------------------------------------------------

def anchors_alternate(g: CpmGraph, cycle: Sequence[int]) -> bool:
    k = len(cycle)
    signs = []
    for j in range(k):
        kind = classify_two_path(g, (cycle[j - 1], cycle[j], cycle[(j + 1) % k]))
        if kind.is_anchor:
            signs.append(kind)
    return all(signs[j] != signs[(j + 1) % len(signs)] for j in range(len(signs))) if signs else True


def label_condition(g: CpmGraph, cycle: Sequence[int]) -> bool:
    """Each label is used 0 or >= 2 times, and a label used twice is not used on consecutive edges."""
    k = len(cycle)
    labels = [g.edge(cycle[j], cycle[(j + 1) % k]).label for j in range(k)]
    cnt = Counter(labels)
    if any(c == 1 for c in cnt.values()):
        return False
    for j in range(k):
        if labels[j] == labels[(j + 1) % k] and cnt[labels[j]] == 2:
            return False
    return True


def anchor_label_rules_hold(g: CpmGraph, cycle: Sequence[int]) -> bool:
    return anchors_alternate(g, cycle) and label_condition(g, cycle)


def coil_rule_holds(g: CpmGraph, cycle: Sequence[int]) -> bool:
    t = trace_of_cycle(g, cycle, check=False)
    return not t.coiled or t.disbalancedness % g.params.ms == 0


SIX_CYCLE_TRACES = frozenset(Trace.parse(t) for t in ("a^6", "an^2an^2", "n^6"))
EIGHT_CYCLE_TRACES_2AT = {
    "T1": Trace.parse("anananan"), "T2": Trace.parse("a^8"),
    "T3": Trace.parse("a^3n^2an^2"), "T4": Trace.parse("an^3an^3"),
    "T12": Trace.parse("a^2n^6"), "T13": Trace.parse("n^8"),
}


# --- census of short cycles ---------------------------------------------------------

@dataclass(frozen=True)
class CycleCensusRow:
    trace: Trace
    total: int
    per_positive_anchor: int
    per_negative_anchor: int
    per_non_anchor: int

    @property
    def length(self) -> int:
        return self.trace.length

    @property
    def per_anchor(self) -> int | tuple[int, int]:
        if self.per_positive_anchor == self.per_negative_anchor:
            return self.per_positive_anchor
        return (self.per_positive_anchor, self.per_negative_anchor)


def reference_two_paths(g: CpmGraph, v: int = 0) -> dict[TwoPathKind, tuple[int, int, int]]:
    """One 2-path of each kind with mid-vertex v."""
    found = {}
    for path in two_paths_at(g, v):
        found.setdefault(classify_two_path(g, path), path)
    return found


def cycle_census(g: CpmGraph, max_len: int = 8, v: int = 0) -> list[CycleCensusRow]:
    """Per-trace cycle counts, assuming a vertex-transitive graph.

    Totals are extrapolated from the cycles through v; per-2-path counts use
    one reference 2-path of each kind at v.
    """
    cycles = cycles_through_vertex(g, v, max_len)
    refs = reference_two_paths(g, v)
    by_trace: dict[Trace, Counter] = {}
    for c in cycles:
        t = trace_of_cycle(g, c, check=False)
        cnt = by_trace.setdefault(t, Counter())
        cnt["through"] += 1
        ends = {c[1], c[-1]}
        for kind, (x, _, z) in refs.items():
            if ends == {x, z}:
                cnt[kind] += 1
    rows = []
    for t in sorted(by_trace, key=lambda t: (t.length, t.canonical_code)):
        cnt = by_trace[t]
        rows.append(CycleCensusRow(
            t, cnt["through"] * g.order // t.length,
            cnt[TwoPathKind.POSITIVE_ANCHOR], cnt[TwoPathKind.NEGATIVE_ANCHOR],
            cnt[TwoPathKind.NON_ANCHOR]))
    return rows


def format_cycle_census(rows: Sequence[CycleCensusRow]) -> str:
    head = ("trace", "length", "total", "per-anchor", "per-non-anchor")
    body = []
    for row in rows:
        pa = row.per_anchor
        pa = f"{pa[0]}/{pa[1]}" if isinstance(pa, tuple) else str(pa)
        body.append((row.trace.exponent_form, str(row.length), str(row.total), pa,
                     str(row.per_non_anchor)))
    widths = [max(len(r[j]) for r in [head, *body]) for j in range(len(head))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in [head, *body]]
    return "\n".join(lines)
