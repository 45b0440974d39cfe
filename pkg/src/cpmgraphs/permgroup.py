"""Permutation groups on graph vertices and a brute-force automorphism search.

Permutations act on the right: ``x * (a * b) == (x * a) * b``; as image
arrays this is ``(a * b).images == b.images[a.images]``.

``schreier_sims`` is the deterministic textbook algorithm with sifting.
``automorphism_group`` is an individualisation-refinement search: colour
refinement by neighbour-colour multisets, branching on the first smallest
non-singleton cell, and a bottom-up stabiliser chain so that the group order
is the product of the fundamental orbit lengths.
"""

from __future__ import annotations

import hashlib
import sys
from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .graphs import CpmGraph, is_isomorphism

SIZE_GUARD = 1500


class GroupTooLargeError(RuntimeError):
    pass


class Perm:
    __slots__ = ("images",)

    def __init__(self, images):
        arr = np.asarray(images, dtype=np.int64)
        if arr.ndim != 1:
            raise ValueError("images must be one-dimensional")
        check = np.zeros(len(arr), dtype=bool)
        if len(arr) and (arr.min() < 0 or arr.max() >= len(arr)):
            raise ValueError("images out of range")
        check[arr] = True
        if not check.all():
            raise ValueError("images do not form a bijection")
        arr = arr.copy()
        arr.setflags(write=False)
        self.images = arr

    @classmethod
    def _trusted(cls, arr: np.ndarray) -> "Perm":
        p = cls.__new__(cls)
        arr = np.asarray(arr, dtype=np.int64)
        arr.setflags(write=False)
        p.images = arr
        return p

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls._trusted(np.arange(degree, dtype=np.int64))

    @classmethod
    def from_line(cls, line: str) -> "Perm":
        return cls([int(t) for t in line.split()])

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return int(self.images[x])

    def __mul__(self, other: "Perm") -> "Perm":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        return Perm._trusted(other.images[self.images])

    def __pow__(self, k: int) -> "Perm":
        result = Perm.identity(self.degree)
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            result = result * base
        return result

    def inverse(self) -> "Perm":
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.degree)
        return Perm._trusted(inv)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.images, np.arange(self.degree)))

    def order(self) -> int:
        seen = np.zeros(self.degree, dtype=bool)
        result = 1
        from math import lcm
        for x in range(self.degree):
            if seen[x]:
                continue
            length, y = 0, x
            while not seen[y]:
                seen[y] = True
                y = int(self.images[y])
                length += 1
            result = lcm(result, length)
        return result

    def to_line(self) -> str:
        return " ".join(map(str, self.images.tolist()))

    def __eq__(self, other):
        return isinstance(other, Perm) and np.array_equal(self.images, other.images)

    def __hash__(self):
        return hash(self.images.tobytes())

    def __repr__(self):
        if self.degree <= 12:
            return f"Perm([{', '.join(map(str, self.images.tolist()))}])"
        return f"<Perm of degree {self.degree}>"


def _as_array(p) -> np.ndarray:
    return p.images if isinstance(p, Perm) else np.asarray(p, dtype=np.int64)


def _inv(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    out[a] = np.arange(len(a))
    return out


class _Chain:
    """Base, strong generators and explicit transversals of a stabiliser chain."""

    def __init__(self, degree: int):
        self.degree = degree
        self.base: list[int] = []
        self.levels: list[list[np.ndarray]] = []   # strong generators fixing base[:i]
        self.trans: list[dict] = []                # point -> (u, u^-1) with base[i] u = point

    def add_level(self, point: int):
        self.base.append(point)
        self.levels.append([])
        ident = np.arange(self.degree, dtype=np.int64)
        self.trans.append({point: (ident, ident)})

    def extend_orbit(self, i: int):
        """Grow the transversal at level i under levels[i] (old entries stay)."""
        t = self.trans[i]
        gens = self.levels[i]
        queue = list(t.keys())
        while queue:
            nxt = []
            for x in queue:
                u, _ = t[x]
                for g in gens:
                    y = int(g[x])
                    if y not in t:
                        w = g[u]
                        t[y] = (w, _inv(w))
                        nxt.append(y)
            queue = nxt

    def sift(self, h: np.ndarray, start: int = 0):
        for j in range(start, len(self.base)):
            x = int(h[self.base[j]])
            entry = self.trans[j].get(x)
            if entry is None:
                return h, j
            h = entry[1][h]
        return h, len(self.base)

    def order(self) -> int:
        return prod(len(t) for t in self.trans)

    @classmethod
    def from_known(cls, degree: int, base: Sequence[int], gens: Sequence[np.ndarray]) -> "_Chain":
        """Chain from a base and generators already known to be strong."""
        ch = cls(degree)
        for b in base:
            ch.add_level(int(b))
        for i in range(len(base)):
            prefix = list(base[:i])
            ch.levels[i] = [g for g in gens if all(g[b] == b for b in prefix)]
            ch.extend_orbit(i)
        return ch


def schreier_sims(gens: Sequence[np.ndarray], degree: int, base_prefix: Sequence[int] = ()) -> _Chain:
    ident = np.arange(degree, dtype=np.int64)
    gens = [np.asarray(g, dtype=np.int64) for g in gens]
    gens = [g for g in gens if not np.array_equal(g, ident)]
    ch = _Chain(degree)
    for b in base_prefix:
        ch.add_level(int(b))
    for g in gens:
        if all(g[b] == b for b in ch.base):
            ch.add_level(int(np.flatnonzero(g != ident)[0]))
    for i in range(len(ch.base)):
        ch.levels[i] = [g for g in gens if all(g[b] == b for b in ch.base[:i])]
        ch.extend_orbit(i)
    checked: list[set] = [set() for _ in ch.base]

    i = len(ch.base) - 1
    while i >= 0:
        added = False
        trans, gens_i = ch.trans[i], ch.levels[i]
        for beta in list(trans.keys()):
            u = trans[beta][0]
            for gi, s in enumerate(gens_i):
                key = (beta, gi)
                if key in checked[i]:
                    continue
                gamma = int(s[beta])
                h = trans[gamma][1][s[u]]
                h, j = ch.sift(h, i + 1)
                if np.array_equal(h, ident):
                    checked[i].add(key)
                    continue
                if j == len(ch.base):
                    ch.add_level(int(np.flatnonzero(h != ident)[0]))
                    checked.append(set())
                for l in range(i + 1, j + 1):
                    ch.levels[l].append(h)
                    ch.extend_orbit(l)
                i = j
                added = True
                break
            if added:
                break
        if not added:
            i -= 1
    return ch


class PermGroup:
    """Group given by generators; the stabiliser chain is computed on demand."""

    def __init__(self, generators: Iterable, degree: int | None = None,
                 base: Sequence[int] = (), chain: _Chain | None = None):
        gens = [Perm._trusted(_as_array(g)) if not isinstance(g, Perm) else g for g in generators]
        if degree is None:
            if not gens:
                raise ValueError("degree needed for a group without generators")
            degree = gens[0].degree
        if any(g.degree != degree for g in gens):
            raise ValueError("degree mismatch among generators")
        self.degree = degree
        self.generators = gens
        self._base_prefix = tuple(int(b) for b in base)
        self._chain = chain

    @property
    def chain(self) -> _Chain:
        if self._chain is None:
            self._chain = schreier_sims([g.images for g in self.generators], self.degree,
                                        self._base_prefix)
        return self._chain

    @property
    def base(self) -> list[int]:
        return list(self.chain.base)

    @property
    def strong_generators(self) -> list[Perm]:
        seen, out = set(), []
        for level in self.chain.levels:
            for g in level:
                key = g.tobytes()
                if key not in seen:
                    seen.add(key)
                    out.append(Perm._trusted(g))
        return out

    def order(self) -> int:
        return self.chain.order()

    def contains(self, p) -> bool:
        h = _as_array(p)
        if len(h) != self.degree:
            return False
        h, _ = self.chain.sift(h)
        return bool(np.array_equal(h, np.arange(self.degree)))

    __contains__ = contains

    def orbit_labels(self) -> np.ndarray:
        return perm_orbits(self.degree, [g.images for g in self.generators])

    def orbit(self, x: int) -> np.ndarray:
        labels = self.orbit_labels()
        return np.flatnonzero(labels == labels[x])

    def is_transitive(self) -> bool:
        return bool((self.orbit_labels() == 0).all())

    def stabilizer(self, x: int) -> "PermGroup":
        ch = self.chain
        if ch.base and ch.base[0] == x:
            gens = ch.levels[1] if len(ch.levels) > 1 else []
            return PermGroup(gens, self.degree)
        if ch.base and x in ch.trans[0]:
            u, uinv = ch.trans[0][x]
            gens = ch.levels[1] if len(ch.levels) > 1 else []
            # conjugate Stab(base0) by u: uinv * g * u
            return PermGroup([u[g[uinv]] for g in gens], self.degree)
        sub = PermGroup(self.generators, self.degree, base=(x,))
        ch = sub.chain
        gens = ch.levels[1] if len(ch.levels) > 1 else []
        return PermGroup(gens, self.degree)

    def elements(self, limit: int = 100000) -> list[Perm]:
        """All elements by closure (small groups only)."""
        if self.order() > limit:
            raise GroupTooLargeError("group too large to enumerate")
        ident = np.arange(self.degree, dtype=np.int64)
        seen = {ident.tobytes(): ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for a in frontier:
                for g in self.generators:
                    b = g.images[a]
                    k = b.tobytes()
                    if k not in seen:
                        seen[k] = b
                        nxt.append(b)
            frontier = nxt
        return [Perm._trusted(v) for v in seen.values()]

    def __repr__(self):
        return f"<PermGroup degree={self.degree} gens={len(self.generators)}>"


def group_order(gens: Sequence, degree: int | None = None) -> int:
    return PermGroup(gens, degree).order()


def perm_orbits(npoints: int, images: Sequence[np.ndarray]) -> np.ndarray:
    """Orbit labels (0 for the orbit of point 0, ...) of the group generated by images."""
    if not images:
        return np.arange(npoints)
    rows = np.concatenate([np.arange(npoints)] * len(images))
    cols = np.concatenate([np.asarray(g) for g in images])
    mat = sp.coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)),
                        shape=(npoints, npoints))
    _, labels = connected_components(mat, directed=True, connection="weak")
    return labels


# --- actions on edges, arcs and 2-arcs -----------------------------------

def _positions(adj: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Index of y in the adjacency row of x, elementwise."""
    hit = adj[x] == y[:, None]
    if not hit.any(axis=1).all():
        raise ValueError("permutation does not preserve adjacency")
    return hit.argmax(axis=1)


@dataclass(frozen=True)
class TransitivityReport:
    vertex_transitive: bool
    edge_transitive: bool
    arc_transitive: bool
    two_arc_transitive: bool

    def as_tuple(self):
        return (self.vertex_transitive, self.edge_transitive,
                self.arc_transitive, self.two_arc_transitive)


def transitivity_report(group: PermGroup, g: CpmGraph) -> TransitivityReport:
    adj = g.adj
    n, d = adj.shape
    gens = [p.images for p in group.generators]
    vt = bool((perm_orbits(n, gens) == 0).all())

    # arcs (x, adj[x][a]) indexed x*d + a
    ax = np.repeat(np.arange(n), d)
    ay = adj.ravel()
    arc_images = []
    for p in gens:
        px, py = p[ax], p[ay]
        arc_images.append(px * d + _positions(adj, px, py))
    arc_labels = perm_orbits(n * d, arc_images)
    at = bool((arc_labels == 0).all())

    # edges: an edge is the union of its two arcs
    rev = ay * d + _positions(adj, ay, ax)
    edge_imgs = arc_images + [rev]
    et = bool((perm_orbits(n * d, edge_imgs) == 0).all())

    # 2-arcs (a, x, b) with a != b, indexed x*d*d + ia*d + ib
    xs, ia, ib = np.meshgrid(np.arange(n), np.arange(d), np.arange(d), indexing="ij")
    keep = (ia != ib).ravel()
    xs, ia, ib = xs.ravel()[keep], ia.ravel()[keep], ib.ravel()[keep]
    ids = xs * d * d + ia * d + ib
    lookup = np.full(n * d * d, -1, dtype=np.int64)
    lookup[ids] = np.arange(len(ids))
    a_pts, b_pts = adj[xs, ia], adj[xs, ib]
    two_images = []
    for p in gens:
        px = p[xs]
        ja = _positions(adj, px, p[a_pts])
        jb = _positions(adj, px, p[b_pts])
        two_images.append(lookup[px * d * d + ja * d + jb])
    two_labels = perm_orbits(len(ids), two_images)
    tat = bool((two_labels == 0).all())
    return TransitivityReport(vt, et, at, tat)


def is_block_partition(group: PermGroup, partition: Sequence[Iterable[int]]) -> bool:
    part_of = np.full(group.degree, -1, dtype=np.int64)
    sizes = []
    for k, part in enumerate(partition):
        idx = np.asarray(list(part), dtype=np.int64)
        if len(idx) == 0:
            raise ValueError("empty part")
        if (part_of[idx] != -1).any() or len(np.unique(idx)) != len(idx):
            raise ValueError("parts overlap")
        part_of[idx] = k
        sizes.append(len(idx))
    if (part_of == -1).any():
        raise ValueError("partition does not cover all points")
    for p in group.generators:
        img = part_of[p.images]
        for k in range(len(sizes)):
            members = img[part_of == k]
            if (members != members[0]).any():
                return False
    return True


@dataclass(frozen=True)
class LocalAction:
    order: int
    transitive: bool
    orbit_sizes: tuple[int, ...]


def local_action_at(group: PermGroup, g: CpmGraph, x: int) -> LocalAction:
    """Action of the stabiliser of x on the neighbours of x."""
    nbrs = g.adj[x]
    stab = group.stabilizer(x)
    local = []
    for p in stab.generators:
        img = p.images[nbrs]
        local.append(np.array([int(np.flatnonzero(nbrs == v)[0]) for v in img]))
    d = len(nbrs)
    sub = PermGroup([Perm(l) for l in local], d)
    labels = sub.orbit_labels()
    sizes = tuple(sorted(np.bincount(labels).tolist(), reverse=True))
    return LocalAction(sub.order(), len(sizes) == 1, sizes)


# --- automorphism search ---------------------------------------------------

def walk_invariants(g: CpmGraph, kmax: int = 8) -> np.ndarray:
    """Closed-walk counts diag(A^k), k = 3..kmax, per vertex."""
    n = g.order
    a = sp.csr_matrix((np.ones(g.adj.size, dtype=np.int64),
                       (np.repeat(np.arange(n), g.degree), g.adj.ravel())), shape=(n, n))
    m = a.toarray()
    cols = []
    for k in range(2, kmax + 1):
        m = np.asarray(a @ m)
        if k >= 3:
            cols.append(np.diagonal(m).copy())
    return np.stack(cols, axis=1)


def _digest(*arrays) -> bytes:
    h = hashlib.blake2b(digest_size=16)
    for arr in arrays:
        h.update(np.ascontiguousarray(arr).tobytes())
    return h.digest()


class _Refiner:
    """Colour refinement returning canonical colour ids and a round-by-round trace."""

    def __init__(self, adj: np.ndarray):
        self.adj = adj
        n, d = adj.shape
        self.bits = max(1, int(n).bit_length())
        if self.bits * (d + 1) > 62:
            self.bits = 0  # fall back to row-wise unique

    def _round(self, colors):
        nb = np.sort(colors[self.adj], axis=1)
        if self.bits:
            key = colors.astype(np.int64)
            for j in range(nb.shape[1]):
                key = (key << self.bits) | nb[:, j]
            uniq, inv, counts = np.unique(key, return_inverse=True, return_counts=True)
        else:
            rows = np.column_stack([colors, nb])
            uniq, inv, counts = np.unique(rows, axis=0, return_inverse=True, return_counts=True)
        return inv.ravel().astype(np.int64), len(uniq), _digest(uniq, counts)

    def refine(self, colors: np.ndarray, ncolors: int, target=None):
        trace = []
        while True:
            colors, new, sig = self._round(colors)
            if target is not None and (len(trace) >= len(target) or target[len(trace)] != sig):
                return None
            trace.append(sig)
            if new == ncolors:
                break
            ncolors = new
        if target is not None and len(trace) != len(target):
            return None
        return colors, ncolors, trace


def _initial_colors(g: CpmGraph):
    inv = walk_invariants(g)
    uniq, labels, counts = np.unique(inv, axis=0, return_inverse=True, return_counts=True)
    return labels.ravel().astype(np.int64), len(uniq), _digest(uniq, counts)


def _individualize(colors, ncolors, v):
    c = colors * 2
    c[v] += 1
    uniq, inv = np.unique(c, return_inverse=True)
    return inv.ravel().astype(np.int64), len(uniq)


def _target_cell(colors, ncolors):
    counts = np.bincount(colors, minlength=ncolors)
    big = np.flatnonzero(counts > 1)
    if len(big) == 0:
        return None
    return int(big[np.argmin(counts[big])])


@dataclass
class _Level:
    colors: np.ndarray
    ncolors: int
    cell_color: int
    point: int
    trace: list


class _Search:
    def __init__(self, left: CpmGraph, right: CpmGraph | None = None):
        self.g1 = left
        self.g2 = right if right is not None else left
        self.ref1 = _Refiner(left.adj)
        self.ref2 = self.ref1 if right is None else _Refiner(self.g2.adj)
        self.nodes = 0
        c, k, sig = _initial_colors(left)
        self.root_sig = sig
        c, k, self.root_trace = self.ref1.refine(c, k)
        self.root = (c, k)
        self.levels: list[_Level] = []
        while True:
            cell = _target_cell(c, k)
            if cell is None:
                break
            b = int(np.flatnonzero(c == cell)[0])
            ci, ki = _individualize(c, k, b)
            ci, ki, tr = self.ref1.refine(ci, ki)
            self.levels.append(_Level(c, k, cell, b, tr))
            c, k = ci, ki
        self.leaf_colors = c
        self.left_order = np.lexsort((np.arange(left.order), c))

    @property
    def base(self) -> list[int]:
        return [lv.point for lv in self.levels]

    def _try_natural(self, colors_left, colors_right):
        lo = np.lexsort((np.arange(len(colors_left)), colors_left))
        ro = np.lexsort((np.arange(len(colors_right)), colors_right))
        perm = np.empty(len(lo), dtype=np.int64)
        perm[lo] = ro
        return perm if is_isomorphism(self.g1, self.g2, perm) else None

    def extend(self, j: int, colors, ncolors):
        """Find an isomorphism compatible with the right path so far, or None."""
        self.nodes += 1
        perm = self._try_natural(self.levels[j].colors if j < len(self.levels) else self.leaf_colors,
                                 colors)
        if perm is not None or j == len(self.levels):
            return perm
        lv = self.levels[j]
        for c in np.flatnonzero(colors == lv.cell_color):
            ci, ki = _individualize(colors, ncolors, int(c))
            res = self.ref2.refine(ci, ki, lv.trace)
            if res is None:
                continue
            out = self.extend(j + 1, res[0], res[1])
            if out is not None:
                return out
        return None

    def branch(self, j: int, c: int):
        lv = self.levels[j]
        ci, ki = _individualize(lv.colors, lv.ncolors, c)
        res = self.ref2.refine(ci, ki, lv.trace)
        if res is None:
            return None
        return self.extend(j + 1, res[0], res[1])


def _orbit(point: int, gens: list[np.ndarray]) -> set:
    orbit, frontier = {point}, [point]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(g[x])
                if y not in orbit:
                    orbit.add(y)
                    nxt.append(y)
        frontier = nxt
    return orbit


@dataclass
class AutSearchResult:
    group: PermGroup
    base: list[int]
    orbit_lengths: list[int]
    nodes: int

    @property
    def order(self) -> int:
        return prod(self.orbit_lengths)


def automorphism_search(g: CpmGraph, guard: int = SIZE_GUARD) -> AutSearchResult:
    if g.order > guard:
        raise GroupTooLargeError(
            f"graph too large for brute-force search ({g.order} > {guard} vertices)")
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * g.order + 100))
    try:
        s = _Search(g)
        gens: list[np.ndarray] = []
        lengths = [0] * len(s.levels)
        for j in reversed(range(len(s.levels))):
            lv = s.levels[j]
            orbit = _orbit(lv.point, gens)
            for c in np.flatnonzero(lv.colors == lv.cell_color):
                c = int(c)
                if c in orbit:
                    continue
                perm = s.branch(j, c)
                if perm is not None:
                    gens.append(perm)
                    orbit = _orbit(lv.point, gens)
            lengths[j] = len(orbit)
    finally:
        sys.setrecursionlimit(old)
    chain = _Chain.from_known(g.order, s.base, gens)
    if chain.order() != prod(lengths):
        raise AssertionError("inconsistent stabiliser chain")
    group = PermGroup([Perm._trusted(x) for x in gens], g.order, base=s.base, chain=chain)
    return AutSearchResult(group, s.base, lengths, s.nodes)


def automorphism_group(g: CpmGraph, guard: int = SIZE_GUARD) -> PermGroup:
    """Generators (with a stabiliser chain) of the full automorphism group."""
    return automorphism_search(g, guard).group


def find_isomorphism(g1: CpmGraph, g2: CpmGraph, vertex_transitive: bool = False,
                     guard: int = SIZE_GUARD):
    """An isomorphism g1 -> g2 as an image array, or None.

    With ``vertex_transitive`` only one image of the first base point is
    tried, which is complete when g2 is vertex-transitive.
    """
    if g1.order != g2.order or g1.degree != g2.degree:
        return None
    if max(g1.order, g2.order) > guard:
        raise GroupTooLargeError("graph too large for brute-force isomorphism search")
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * g1.order + 100))
    try:
        s = _Search(g1, g2)
        c, k, sig = _initial_colors(g2)
        if sig != s.root_sig:
            return None
        res = s.ref2.refine(c, k, s.root_trace)
        if res is None:
            return None
        c, k = res[0], res[1]
        if not s.levels:
            return s._try_natural(s.leaf_colors, c)
        lv = s.levels[0]
        cands = np.flatnonzero(c == lv.cell_color)
        if vertex_transitive:
            cands = cands[:1]
        for v in cands:
            ci, ki = _individualize(c, k, int(v))
            r2 = s.ref2.refine(ci, ki, lv.trace)
            if r2 is None:
                continue
            out = s.extend(1, r2[0], r2[1])
            if out is not None:
                return out
        return None
    finally:
        sys.setrecursionlimit(old)
