"""Shared oracles. Nothing here imports the code under test beyond the graph container."""

import itertools

import networkx as nx
import pytest

from cpmgraphs.graphs import Params, component_order
from cpmgraphs.modring import is_valid_r


def valid_tuples(max_order, s_values=(2, 3, 4, 5), m_max=40, n_max=80):
    """All valid (m,s,n,r) with construction order m*s*n^s small enough to sweep."""
    out = []
    for s in s_values:
        for m in range(1, m_max + 1):
            for n in range(3, n_max + 1):
                if m * s * (n // 2) ** s > max_order:
                    break
                for r in range(1, n):
                    if is_valid_r(m, s, n, r):
                        p = Params(m, s, n, r)
                        if component_order(p) <= max_order:
                            out.append(p)
    return out


def naive_neighbors(m, s, n, r, i, v):
    """Neighbour rule written out with repeated multiplication for r^i."""
    ms = m * s

    def rpow(k):
        x = 1
        for _ in range(k):
            x = (x * r) % n
        return x

    out = set()
    for sign in (1, -1):
        w = list(v)
        w[i % s] = (w[i % s] + sign * rpow(i)) % n
        out.add(((i + 1) % ms, tuple(w)))
        j = (i - 1) % ms
        w = list(v)
        w[j % s] = (w[j % s] + sign * rpow(j)) % n
        out.add((j, tuple(w)))
    return out


def naive_component(m, s, n, r):
    """Reachable set of <0;0> with plain DFS."""
    start = (0, (0,) * s)
    seen = {start}
    stack = [start]
    while stack:
        i, v = stack.pop()
        for y in naive_neighbors(m, s, n, r, i, v):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def to_nx(g):
    G = nx.Graph()
    G.add_nodes_from(range(g.order))
    G.add_edges_from(map(tuple, g.edges().tolist()))
    return G


def nx_automorphism_count(g):
    G = to_nx(g)
    return sum(1 for _ in nx.algorithms.isomorphism.GraphMatcher(G, G).isomorphisms_iter())


def naive_cycles(g, max_len):
    """Simple cycles of length <= max_len as frozensets of edges (networkx oracle)."""
    G = to_nx(g)
    out = set()
    for c in nx.simple_cycles(G, length_bound=max_len):
        if len(c) < 3:
            continue
        edges = frozenset(frozenset((c[k], c[(k + 1) % len(c)])) for k in range(len(c)))
        out.add(edges)
    return out


@pytest.fixture(scope="session")
def small_tuples():
    return valid_tuples(260)
