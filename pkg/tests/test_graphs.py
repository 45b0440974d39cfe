import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cpmgraphs.graphs import (InvalidParamsError, Params, Vertex, build_component, build_full,
                              build_hypercube, build_px, component, component_order,
                              neighbors_rule, parity_membership, radius_and_attachment)

from conftest import naive_component, naive_neighbors, to_nx, valid_tuples

SWEEP = [p for p in valid_tuples(2000, s_values=(1, 2, 3, 4), m_max=8, n_max=24)
         if p.ms >= 3 or p.s == 2]
SMALL = [p for p in SWEEP if component_order(p) <= 300]


def _norm(p, x):
    return (x.i % p.ms, tuple(c % p.n for c in x.v))


def test_neighbors_rule_examples():
    p = Params(3, 2, 5, 2)
    got = {_norm(p, x) for x in neighbors_rule(p, Vertex(0, (0, 0)))}
    assert got == {(1, (1, 0)), (1, (4, 0)), (5, (0, 2)), (5, (0, 3))}
    p = Params(3, 2, 3, 1)
    got = {_norm(p, x) for x in neighbors_rule(p, Vertex(1, (1, 0)))}
    assert got == {(2, (1, 1)), (2, (1, 2)), (0, (0, 0)), (0, (2, 0))}


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([p for p in SWEEP if p.ms >= 3]), st.data())
def test_neighbors_rule_matches_oracle(p, data):
    i = data.draw(st.integers(0, p.ms - 1))
    v = tuple(data.draw(st.integers(0, p.n - 1)) for _ in range(p.s))
    got = {_norm(p, x) for x in neighbors_rule(p, Vertex(i, v))}
    assert got == naive_neighbors(*p.astuple(), i, v)
    assert len(got) == 4 and (i, v) not in got


@pytest.mark.parametrize("t,order", [((3, 2, 7, 2), 294), ((4, 2, 4, 1), 32), ((1, 2, 4, 1), 16),
                                     ((6, 2, 9, 2), 972), ((2, 2, 4, 1), 16), ((1, 3, 3, 1), 81)])
def test_component_order_examples(t, order):
    p = Params(*t)
    assert component_order(p) == order
    assert build_component(p).order == order


def test_invalid_params():
    with pytest.raises(InvalidParamsError):
        Params(1, 2, 8, 2)
    with pytest.raises(InvalidParamsError):
        Params(1, 2, 2, 1)


def test_component_order_matches_bfs_sweep():
    assert len(SWEEP) > 1000
    for p in SWEEP:
        g = build_component(p)
        assert g.order == component_order(p), p
        adj = g.adj
        assert adj.shape[1] == 4
        srt = np.sort(adj, axis=1)
        assert (np.diff(srt, axis=1) > 0).all(), p
        assert not (adj == np.arange(g.order)[:, None]).any(), p
        # symmetric: the edge multiset from both ends agrees
        u = np.repeat(np.arange(g.order), 4)
        v = adj.ravel()
        fwd = np.sort(u * g.order + v)
        assert (fwd == np.sort(v * g.order + u)).all(), p
        step = (g.level[adj] - g.level[:, None]) % p.ms
        assert np.isin(step, [1, p.ms - 1]).all(), p


@pytest.mark.parametrize("p", SMALL, ids=str)
def test_vertex_set_matches_oracle(p):
    g = component(p)
    assert {(x.i, x.v) for x in g.vertices} == naive_component(*p.astuple())
    for k, x in enumerate(g.vertices):
        want = naive_neighbors(*p.astuple(), x.i, x.v)
        assert {(g.vertices[w].i, g.vertices[w].v) for w in g.adj[k].tolist()} == want
    # BFS indexing: vertex 0 is <0;0>, distances non-decreasing
    assert g.vertices[0] == Vertex(0, (0,) * p.s)
    dist = nx.single_source_shortest_path_length(to_nx(g), 0)
    d = [dist[k] for k in range(g.order)]
    assert d == sorted(d)


def test_edge_labels_and_signs():
    p = Params(3, 2, 5, 2)
    g = component(p)
    for u, w in g.edges().tolist():
        e = g.edge(u, w)
        assert e.label == e.lower.i % p.s
        step = pow(p.r, e.lower.i, p.n) * e.sign
        diff = [(a - b) % p.n for a, b in zip(e.upper.v, e.lower.v)]
        expect = [0] * p.s
        expect[e.label] = step % p.n
        assert diff == expect


@pytest.mark.parametrize("x,expected", [((0, (0, 2)), True), ((0, (1, 0)), False)])
def test_parity_membership_examples(x, expected):
    assert parity_membership(Params(4, 2, 4, 1), x) is expected


def test_parity_membership_odd_m():
    assert parity_membership(Params(1, 2, 4, 1), (0, (1, 1)))
    with pytest.raises(ValueError, match="connected"):
        parity_membership(Params(3, 2, 7, 2), (0, (0, 0)))


@pytest.mark.parametrize("p", [p for p in valid_tuples(10**6, s_values=(2,), m_max=6, n_max=12)
                               if p.n in (4, 8, 12)], ids=str)
def test_parity_membership_agrees_with_bfs(p):
    reach = naive_component(*p.astuple())
    for i in range(p.ms):
        for v in itertools.product(range(p.n), repeat=p.s):
            assert parity_membership(p, (i, v)) == ((i, v) in reach)


def test_full_graph():
    p = Params(3, 2, 5, 2)
    g = build_full(p)
    assert g.order == 3 * 2 * 25
    assert build_full(Params(4, 2, 4, 1)).order == 4 * 2 * 16
    assert nx.number_connected_components(to_nx(build_full(Params(4, 2, 4, 1)))) == 4


@pytest.mark.parametrize("t,s,order", [(4, 2, 16), (8, 2, 32), (3, 1, 6), (5, 3, 40)])
def test_px(t, s, order):
    g = build_px(t, s)
    assert g.order == order
    G = to_nx(g)
    assert all(d == 4 for _, d in G.degree())
    assert nx.is_connected(G)


def test_component_2241_is_four_cube():
    g = component(Params(2, 2, 4, 1))
    G = to_nx(g)
    assert g.order == 16 and nx.is_bipartite(G) and nx.girth(G) == 4
    assert all(d == 4 for _, d in G.degree())
    assert nx.is_isomorphic(G, nx.hypercube_graph(4))
    assert nx.is_isomorphic(G, to_nx(build_hypercube(4)))


@pytest.mark.parametrize("t,expected", [((3, 2, 7, 2), (7, "loose")), ((4, 2, 4, 1), (2, "loose")),
                                        ((3, 1, 7, 2), (7, "tight"))])
def test_radius(t, expected):
    assert radius_and_attachment(Params(*t)) == expected


def test_export_formats():
    g = component(Params(2, 2, 4, 1))
    text = g.to_adjacency_text()
    lines = text.splitlines()
    assert lines[0] == "# CPM 2 2 4 1 16"
    assert len(lines) == 17
    k, rest = lines[1].split(": ")
    assert k == "0" and len(rest.split()) == 4
    edges = g.to_edge_list().splitlines()
    assert len(edges) == 1 + 32
