"""Explicit automorphisms of CPM graphs and the closed-form symmetry classification."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable

import numpy as np

from .graphs import CpmGraph, Params, Vertex, component, component_order, full_graph
from .isomorphisms import (PreconditionError, iso_phi, normalization_map,
                           normalize_params)
from .modring import (cond_arc_transitive, cond_two_arc_transitive, crt, inv_mod,
                      is_pm_one)
from .permgroup import Perm, PermGroup, automorphism_search


class ComponentError(ValueError):
    """The requested map does not preserve the component of <0; 0>."""


def _graph(p: Params, full: bool) -> CpmGraph:
    return full_graph(p) if full else component(p)


def perm_from_rule(g: CpmGraph, rule: Callable[[Vertex], tuple], name: str = "map") -> Perm:
    images = np.empty(g.order, dtype=np.int64)
    try:
        for k, x in enumerate(g.vertices):
            images[k] = g.index(rule(x))
    except KeyError:
        raise ComponentError(f"{name} does not preserve {g.name}") from None
    return Perm(images)


# --- the group G --------------------------------------------------------------

def rho(p: Params, l: int, k: int = 1, full: bool = False) -> Perm:
    """<i; v> -> <i; v + k e_l>."""
    if not full and p.n % 2 == 0 and k % 2:
        raise ComponentError("rho_l moves the component for even n; use rho_l^2")

    def rule(x):
        v = list(x.v)
        v[l] += k
        return (x.i, v)

    return perm_from_rule(_graph(p, full), rule, f"rho_{l}")


def tau(p: Params, l: int, full: bool = False) -> Perm:
    """<i; v> -> <i; v with v_l negated>."""

    def rule(x):
        v = list(x.v)
        v[l] = -v[l]
        return (x.i, v)

    return perm_from_rule(_graph(p, full), rule, f"tau_{l}")


def _sigma_rule(p: Params, shift: int = 0):
    r = p.r

    def rule(x):
        v = x.v
        w = [r * v[-1]] + [r * c for c in v[:-1]]
        w[0] += shift
        return (x.i + 1, w)

    return rule


def sigma(p: Params, full: bool = False) -> Perm:
    """<i; v> -> <i+1; (r v_{s-1}, r v_0, ..., r v_{s-2})>."""
    if not full and p.n % 2 == 0:
        raise ComponentError("sigma moves the component for even n; use sigma_rho0")
    return perm_from_rule(_graph(p, full), _sigma_rule(p), "sigma")


def sigma_rho0(p: Params, full: bool = False) -> Perm:
    """sigma followed by rho_0."""
    return perm_from_rule(_graph(p, full), _sigma_rule(p, 1), "sigma*rho_0")


def G_generators(p: Params, full: bool = False) -> dict[str, Perm]:
    if full or p.n % 2 == 1:
        return {"sigma": sigma(p, full),
                "rho_0": rho(p, 0, full=full),
                "tau_0": tau(p, 0, full=full)}
    gens = {"sigma*rho_0": sigma_rho0(p)}
    for l in range(p.s):
        gens[f"rho_{l}^2"] = rho(p, l, 2)
    for l in range(p.s):
        gens[f"tau_{l}"] = tau(p, l)
    return gens


def group_G(p: Params, full: bool = False) -> PermGroup:
    g = _graph(p, full)
    return PermGroup(list(G_generators(p, full).values()), degree=g.order)


# --- reflections eta, eta' ------------------------------------------------------

def _eta_rule(p: Params, prime: bool):
    n, s, r = p.n, p.s, p.r
    rinv = inv_mod(r, n)
    coef = [pow(rinv, 2 * (s - 1 - j) + 1, n) for j in range(s)]
    half = n // 2

    def rule(x):
        w = []
        for j in range(s):
            c = coef[j] * x.v[s - 1 - j]
            if prime and 2 * s <= x.i % (4 * s) + j <= 4 * s - 1:
                c += half
            w.append(c)
        return (-x.i, w)

    return rule


def eta(p: Params, full: bool = False) -> Perm:
    if not is_pm_one(pow(p.r, 2 * p.s, p.n), p.n):
        raise PreconditionError("eta needs r^(2s) = +-1")
    return perm_from_rule(_graph(p, full), _eta_rule(p, False), "eta")


def eta_prime(p: Params, full: bool = False) -> Perm:
    t = pow(p.r, 2 * p.s, p.n)
    if is_pm_one(t, p.n) or not cond_arc_transitive(p.s, p.n, p.r):
        raise PreconditionError("eta' needs r^(2s) != +-1 and 2(r^(2s) +- 1) = 0")
    if p.m % 4 or p.n % 4:
        raise PreconditionError("eta' needs 4 | m and 4 | n")
    return perm_from_rule(_graph(p, full), _eta_rule(p, True), "eta'")


def reflection(p: Params, full: bool = False) -> Perm:
    """eta or eta', whichever applies."""
    if is_pm_one(pow(p.r, 2 * p.s, p.n), p.n):
        return eta(p, full)
    return eta_prime(p, full)


# --- the 2-arc-transitive witness nu ---------------------------------------------

def beta_map(q: int, k: int) -> Callable[[tuple[int, int, int]], tuple[int, int, int]]:
    """The additive involution of Z_k^3 used to build nu."""
    if k % 2 == 0 or k < 1:
        raise ValueError("k must be odd")
    q %= k
    if k > 1 and np.gcd(q, k) != 1:
        raise ValueError(f"{q} is not a unit mod {k}")
    if k == 1:
        return lambda v: (0, 0, 0)
    h, qi = inv_mod(2, k), inv_mod(q, k)

    def beta(v):
        x, y, z = v
        return ((y - q * z) % k, (h * (x + y + q * z)) % k, (h * (z - qi * x + qi * y)) % k)

    return beta


NU4_FIXED = ((2, 3, 1), (3, 2, 1), (0, 2, 2), (1, 3, 2))
NU4_ANCHORS = {(1, 3, 0): (3, 0, 1), (2, 3, 3): (0, 0, 2)}


@lru_cache(maxsize=1)
def nu4() -> dict[tuple[int, int, int], tuple[int, int, int]]:
    """The reflection of CPM(2,2,4;1) pinned down by its fixed cycle and two anchors.

    Found by running through all automorphisms; raises if the choice is not unique.
    """
    g = component(Params(2, 2, 4, 1))
    enc = [(x.i, *x.v) for x in g.vertices]
    idx = {e: k for k, e in enumerate(enc)}
    found = []
    for perm in automorphism_search(g).group.elements():
        a = perm.images
        if not (perm * perm).is_identity() or perm.is_identity():
            continue
        if any(a[idx[f]] != idx[f] for f in NU4_FIXED):
            continue
        if all(enc[a[idx[u]]] == w for u, w in NU4_ANCHORS.items()):
            found.append(a)
    if len(found) != 1:
        raise RuntimeError(f"nu_4 not unique: {len(found)} candidates")
    a = found[0]
    return {enc[k]: enc[a[k]] for k in range(g.order)}


def _nu_odd_n(p: Params) -> Perm:
    n = p.n
    beta = beta_map(1, n)

    def rule(x):
        e = x.i % 2
        xx, yy, zz = beta((x.i % n, x.v[0], x.v[1]))
        return (crt([e, xx], [2, n]), (yy, zz))

    return perm_from_rule(component(p), rule, "nu")


def _nu_even_n(p: Params) -> Perm:
    k = p.m // 2
    r = p.r if p.r % 4 == 3 else p.n - p.r
    beta = beta_map(r % k, k)
    table = nu4()

    def rule(x):
        v = (x.i, *x.v)
        a = table[tuple(c % 4 for c in v)]
        b = beta(tuple(c % k for c in v))
        w = [crt([a[j], b[j]], [4, k]) for j in range(3)]
        return (w[0], (w[1], w[2]))

    return perm_from_rule(component(p), rule, "nu")


def _conjugate(perm: Perm, m) -> Perm:
    """Transport perm along the VertexMap m (acting on m.target) back to m.source."""
    return Perm(m.inverse().images[perm.images[m.images]])


def nu(p: Params) -> Perm:
    """Involutory automorphism fixing <0;(0,0)> and <1;(1,0)> and moving <1;(-1,0)>."""
    if not cond_two_arc_transitive(p.m, p.s, p.n, p.r):
        raise PreconditionError(f"{p} is not 2-arc-transitive")
    if p.n == 4 and p.m == 1:
        target = Params(2, 2, 4, 1)
        return _conjugate(nu(target), normalization_map(p))
    if p.n % 2 == 1:
        if p.r == 1:
            return _nu_odd_n(p)
        return _conjugate(nu(Params(p.m, p.s, p.n, 1)), iso_phi(p, 1))
    return _nu_even_n(p)


# --- classification -----------------------------------------------------------

class SymKind(Enum):
    HALF_ARC = "HAT"
    ARC_PX = "AT-PX"
    ARC = "AT"
    TWO_ARC = "2AT"

    @property
    def arc_transitive(self) -> bool:
        return self is not SymKind.HALF_ARC


@dataclass(frozen=True)
class SymClass:
    kind: SymKind
    stabilizer_order: int
    predicted_aut_order: int
    witness_recipe: tuple[str, ...]
    normalized: Params
    order: int


def classify(p: Params) -> SymClass:
    if p.s < 2:
        raise ValueError("classification requires s ≥ 2 (tightly attached case out of scope)")
    q = normalize_params(p)
    m, s, n, r = q.astuple()
    order = component_order(q)
    base = ("sigma", "rho_0", "tau_0")
    if cond_two_arc_transitive(m, s, n, r):
        kind, stab, recipe = SymKind.TWO_ARC, 24, base + ("tau_1", "nu")
    elif cond_arc_transitive(s, n, r):
        if n == 4:
            kind, stab, recipe = SymKind.ARC_PX, 2 ** (s * (m - 1) + 1), ("px",)
        else:
            tag = "eta" if is_pm_one(pow(r, 2 * s, n), n) else "eta'"
            kind, stab, recipe = SymKind.ARC, 2 ** (s + 1), base + (tag,)
    else:
        kind, stab, recipe = SymKind.HALF_ARC, 2 ** s, base
    return SymClass(kind, stab, order * stab, recipe, q, order)


def automorphism_generators(p: Params) -> dict[str, Perm]:
    """Explicit generators of a group containing G and the classification witnesses.

    For the generic classes this generates all of Aut; for the Praeger-Xu
    class only G together with a reflection is returned.
    """
    gens = G_generators(p)
    cls = classify(p)
    if cls.kind is SymKind.HALF_ARC:
        return gens
    if cond_arc_transitive(p.s, p.n, p.r) and (p.n % 4 == 0 or is_pm_one(pow(p.r, 2 * p.s, p.n), p.n)):
        try:
            gens["eta"] = reflection(p)
        except PreconditionError:
            pass
    if cls.kind is SymKind.TWO_ARC:
        gens["nu"] = nu(p)
    return gens
