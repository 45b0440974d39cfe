"""Construction of CPM graphs and Praeger-Xu graphs.

A vertex is a pair <i; v> with i in Z_ms and v in Z_n^s; the edges are

    <i; v> ~ <i+1; v +- r^i e_l>,   l = i mod s.

``build_component`` returns the component containing <0; 0>, ``build_full``
the whole (possibly disconnected) graph. Vertices are indexed in BFS order
from <0; 0>, neighbours of each vertex enqueued in lexicographic (i, v) order,
so permutation arrays on the same parameters are reproducible.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .modring import is_valid_r


class InvalidParamsError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Params:
    m: int
    s: int
    n: int
    r: int

    def __post_init__(self):
        object.__setattr__(self, "r", int(self.r) % self.n if self.n > 0 else int(self.r))
        if not is_valid_r(self.m, self.s, self.n, self.r):
            raise InvalidParamsError(
                f"invalid parameters (m,s,n,r)=({self.m},{self.s},{self.n},{self.r}): "
                "need m,s >= 1, n >= 3, r a unit with r^(ms) = +-1"
            )

    @property
    def ms(self) -> int:
        return self.m * self.s

    def astuple(self) -> tuple[int, int, int, int]:
        return (self.m, self.s, self.n, self.r)

    def __str__(self):
        return f"CPM({self.m},{self.s},{self.n};{self.r})"

    @classmethod
    def parse(cls, text: str) -> "Params":
        parts = [int(x) for x in text.replace(";", ",").split(",")]
        if len(parts) != 4:
            raise InvalidParamsError(f"expected m,s,n,r, got {text!r}")
        return cls(*parts)


class Vertex(NamedTuple):
    i: int
    v: tuple


@dataclass(frozen=True)
class Edge:
    lower: Vertex
    upper: Vertex
    label: int
    sign: int


def _rpowers(p: Params) -> list[int]:
    return [pow(p.r, k, p.n) for k in range(p.ms)]


def _neighbor_list(p: Params, x: Vertex, rp=None) -> list[Vertex]:
    """Up-neighbours (+, -) followed by down-neighbours (+, -)."""
    if rp is None:
        rp = _rpowers(p)
    ms, s, n = p.ms, p.s, p.n
    i, v = x
    up, down = (i + 1) % ms, (i - 1) % ms
    l, l2 = i % s, (i - 1) % s
    a, b = rp[i], rp[down]
    out = []
    for step, lev, pos in ((a, up, l), (-a, up, l), (b, down, l2), (-b, down, l2)):
        w = list(v)
        w[pos] = (w[pos] + step) % n
        out.append(Vertex(lev, tuple(w)))
    return out


def neighbors_rule(p: Params, x: Vertex) -> set[Vertex]:
    x = Vertex(x[0] % p.ms, tuple(c % p.n for c in x[1]))
    return set(_neighbor_list(p, x))


class CpmGraph:
    """Immutable graph with the level structure <i; v>.

    ``adj`` is an (N, deg) integer array; for CPM graphs row k lists the two
    neighbours one level up followed by the two one level down.
    """

    def __init__(self, vertices: list[Vertex], adj: np.ndarray, nlevels: int,
                 modulus: int, params: Params | None = None, kind: str = "CPM",
                 full: bool = False, name: str | None = None):
        self.vertices = vertices
        self.index_of = {x: k for k, x in enumerate(vertices)}
        self.adj = np.asarray(adj, dtype=np.int64)
        self.adj.setflags(write=False)
        self.nlevels = nlevels
        self.modulus = modulus
        self.params = params
        self.kind = kind
        self.full = full
        self.name = name or (str(params) if params is not None else kind)
        self.level = np.array([x.i for x in vertices], dtype=np.int64)
        self.level.setflags(write=False)
        self.levels = [np.flatnonzero(self.level == i) for i in range(nlevels)]
        self._adjsets = None

    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def degree(self) -> int:
        return self.adj.shape[1]

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"<{self.name}: {self.order} vertices>"

    @property
    def adjsets(self) -> list[frozenset]:
        if self._adjsets is None:
            self._adjsets = [frozenset(row) for row in self.adj.tolist()]
        return self._adjsets

    def neighbors(self, u: int) -> list[int]:
        return self.adj[u].tolist()

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjsets[u]

    def edges(self) -> np.ndarray:
        """Each undirected edge once, as rows (u, v) with u < v."""
        u = np.repeat(np.arange(self.order), self.degree)
        v = self.adj.ravel()
        keep = u < v
        return np.stack([u[keep], v[keep]], axis=1)

    def index(self, x) -> int:
        """Index of a vertex given as Vertex or (i, v)."""
        x = Vertex(int(x[0]) % self.nlevels, tuple(int(c) % self.modulus for c in x[1]))
        try:
            return self.index_of[x]
        except KeyError:
            raise KeyError(f"{x} is not a vertex of {self.name}") from None

    def is_automorphism(self, perm) -> bool:
        """Exhaustive edge scan: perm maps every edge to an edge."""
        images = np.asarray(getattr(perm, "images", perm))
        return is_isomorphism(self, self, images)

    def edge(self, u: int, w: int) -> Edge:
        """Label and sign of the edge uw (CPM graphs only)."""
        if self.params is None:
            raise ValueError("edge labels are defined for CPM graphs only")
        if not self.has_edge(u, w):
            raise ValueError(f"{u} and {w} are not adjacent")
        p = self.params
        x, y = self.vertices[u], self.vertices[w]
        for lo, hi in ((x, y), (y, x)):
            if (lo.i + 1) % p.ms != hi.i:
                continue
            l = lo.i % p.s
            step = pow(p.r, lo.i, p.n)
            diff = (hi.v[l] - lo.v[l]) % p.n
            if diff == step:
                return Edge(lo, hi, l, +1)
            if diff == (-step) % p.n:
                return Edge(lo, hi, l, -1)
        raise AssertionError("edge without a label")

    def to_adjacency_text(self) -> str:
        lines = [self.header()]
        for k, row in enumerate(self.adj.tolist()):
            lines.append(f"{k}: " + " ".join(map(str, sorted(row))))
        return "\n".join(lines) + "\n"

    def to_edge_list(self) -> str:
        lines = [self.header()]
        lines += [f"{u} {v}" for u, v in self.edges().tolist()]
        return "\n".join(lines) + "\n"

    def header(self) -> str:
        if self.kind == "PX":
            t, s = self.nlevels, len(self.vertices[0].v)
            return f"# PX {t} {s} {self.order}"
        p = self.params
        tag = "CPMbar" if self.full and p.n % 2 == 0 else "CPM"
        return f"# {tag} {p.m} {p.s} {p.n} {p.r} {self.order}"


def is_isomorphism(g1: CpmGraph, g2: CpmGraph, images) -> bool:
    """True iff images is a bijection V(g1) -> V(g2) mapping edges onto edges."""
    images = np.asarray(images, dtype=np.int64)
    if g1.order != g2.order or images.shape != (g1.order,):
        return False
    if g1.degree != g2.degree:
        return False
    if images.min() < 0 or images.max() >= g2.order:
        return False
    if len(np.unique(images)) != g1.order:
        return False
    mapped = np.sort(images[g1.adj], axis=1)
    target = np.sort(g2.adj[images], axis=1)
    return bool(np.array_equal(mapped, target))


def _bfs(start: Vertex, nbrs, seen: dict, order: list):
    seen[start] = len(order)
    order.append(start)
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in sorted(nbrs(x)):
            if y not in seen:
                seen[y] = len(order)
                order.append(y)
                queue.append(y)


def _assemble(order: list[Vertex], seen: dict, nbrs) -> np.ndarray:
    rows = []
    for x in order:
        row = [seen[y] for y in nbrs(x)]
        if len(set(row)) != len(row) or seen[x] in row:
            raise ValueError("construction produced loops or multiple edges (ms too small)")
        rows.append(row)
    return np.array(rows, dtype=np.int64)


def build_component(p: Params) -> CpmGraph:
    """CPM(m,s,n;r): the component of the construction containing <0; 0>."""
    rp = _rpowers(p)
    nbrs = lambda x: _neighbor_list(p, x, rp)
    seen, order = {}, []
    _bfs(Vertex(0, (0,) * p.s), nbrs, seen, order)
    adj = _assemble(order, seen, nbrs)
    return CpmGraph(order, adj, p.ms, p.n, params=p, full=(p.n % 2 == 1))


@lru_cache(maxsize=64)
def component(p: Params) -> CpmGraph:
    """Memoised ``build_component``; graphs are immutable, so sharing is safe."""
    return build_component(p)


@lru_cache(maxsize=16)
def full_graph(p: Params) -> CpmGraph:
    return build_full(p)


def build_full(p: Params) -> CpmGraph:
    """The whole graph on all ms*n^s vertices (equal to the component for odd n)."""
    if p.n % 2 == 1:
        return build_component(p)
    rp = _rpowers(p)
    nbrs = lambda x: _neighbor_list(p, x, rp)
    seen, order = {}, []
    for x in _all_vertices(p):
        if x not in seen:
            _bfs(x, nbrs, seen, order)
    adj = _assemble(order, seen, nbrs)
    return CpmGraph(order, adj, p.ms, p.n, params=p, full=True)


def _all_vertices(p: Params) -> Iterable[Vertex]:
    for i in range(p.ms):
        for v in np.ndindex(*(p.n,) * p.s):
            yield Vertex(i, tuple(int(c) for c in v))


def component_order(p: Params) -> int:
    m, s, n = p.m, p.s, p.n
    if n % 2 == 1:
        return m * s * n ** s
    if m % 2 == 0:
        return m * s * (n // 2) ** s
    return 2 * m * s * (n // 2) ** s


def level_parity_pattern(p: Params, i: int) -> tuple[int, ...]:
    """Parities of the components of the vertices <i; v> reachable from <0; 0>
    (one of the two admissible patterns when m is odd)."""
    s = p.s
    i %= p.ms
    return tuple(((i - l + s - 1) // s) % 2 for l in range(s))


def parity_membership(p: Params, x) -> bool:
    """Decide whether x lies in the component of <0; 0> (n even only)."""
    if p.n % 2 == 1:
        raise ValueError("n is odd: graph is connected")
    i, v = int(x[0]) % p.ms, tuple(int(c) % p.n for c in x[1])
    pattern = level_parity_pattern(p, i)
    parity = tuple(c % 2 for c in v)
    if parity == pattern:
        return True
    if p.m % 2 == 1:
        return parity == tuple(1 - b for b in pattern)
    return False


def radius_and_attachment(p: Params) -> tuple[int, str]:
    radius = p.n if p.n % 2 == 1 else p.n // 2
    return radius, ("tight" if p.s == 1 else "loose")


def alternating_cycle_length(g: CpmGraph) -> int:
    """Length of the alternating cycle through <0; 0> and <1; e_0>.

    Edges are oriented from V_i to V_(i+1); the walk alternately leaves along
    an out-edge and returns along the other in-edge of the current vertex.
    """
    start = 0
    prev, cur = start, int(g.adj[start][0])
    length, going_up = 1, False
    while True:
        cands = g.adj[cur][2:] if not going_up else g.adj[cur][:2]
        nxt = next(int(w) for w in cands if w != prev)
        prev, cur = cur, nxt
        length += 1
        going_up = not going_up
        if cur == start and not going_up:
            return length


def build_px(t: int, s: int) -> CpmGraph:
    """Praeger-Xu graph PX(t,s) on Z_t x Z_2^s."""
    if t < 3 or s < 1:
        raise ValueError("PX(t,s) needs t >= 3 and s >= 1")

    def nbrs(x):
        i, v = x
        out = [Vertex((i + 1) % t, v[1:] + (b,)) for b in (0, 1)]
        out += [Vertex((i - 1) % t, (b,) + v[:-1]) for b in (0, 1)]
        return out

    seen, order = {}, []
    _bfs(Vertex(0, (0,) * s), nbrs, seen, order)
    if len(order) != t * 2 ** s:
        raise AssertionError("PX graph unexpectedly disconnected")
    adj = _assemble(order, seen, nbrs)
    return CpmGraph(order, adj, t, 2, params=None, kind="PX", full=True, name=f"PX({t},{s})")


def build_hypercube(d: int) -> CpmGraph:
    """Q_d on bit tuples, as a fixture; levels are the Hamming weights mod 2."""
    verts = [Vertex(sum(b) % 2, tuple(b)) for b in np.ndindex(*(2,) * d)]
    verts = [Vertex(x.i, tuple(int(c) for c in x.v)) for x in verts]
    index = {x.v: k for k, x in enumerate(verts)}
    adj = []
    for x in verts:
        row = []
        for j in range(d):
            w = list(x.v)
            w[j] ^= 1
            row.append(index[tuple(w)])
        adj.append(row)
    return CpmGraph(verts, np.array(adj), 2, 2, kind="Q", full=True, name=f"Q{d}")
