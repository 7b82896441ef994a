"""Graph expansion oracles on graphs small enough to check by hand."""

from fractions import Fraction

import numpy as np
import pytest

from expandlab import (
    Graph,
    RegularityError,
    ShapeError,
    SizeLimitError,
    UnsupportedError,
    ValidationError,
    complete_graph,
    cycle_graph,
    edge_expansion,
    expansion_relations_check,
    expansion_report,
    graph_to_permutation_tuple,
    path_graph,
    random_regular_graph,
    spectral_expansion,
    validate_doubly_stochastic,
    vertex_expansion,
)


def test_graph_construction_and_validation():
    g = Graph(4, ((3, 1), (1, 2)))
    assert g.edges == ((1, 2), (1, 3))  # sorted, 1-based
    assert g.m == 2
    assert list(g.degrees()) == [2, 1, 1, 0]
    assert g.neighbors(1) == (2, 3)
    with pytest.raises(ValidationError):
        Graph(3, ((1, 1),))
    with pytest.raises(ValidationError):
        Graph(3, ((1, 4),))
    with pytest.raises(ValidationError):
        Graph(3, ((1, 2), (2, 1)))
    with pytest.raises(ShapeError):
        Graph(0, ())


def test_regular_degree():
    assert cycle_graph(5).regular_degree() == 2
    assert complete_graph(4).regular_degree() == 3
    with pytest.raises(RegularityError):
        path_graph(4).regular_degree()


def test_edge_expansion_worked_values():
    # h = min |boundary| / (d |W|)
    assert edge_expansion(complete_graph(2)) == (Fraction(1), (1,))
    value, witness = edge_expansion(cycle_graph(4))
    assert value == Fraction(1, 2)
    assert witness == (1, 2)  # adjacent pair, lexicographically first
    assert edge_expansion(complete_graph(4))[0] == Fraction(2, 3)
    value, witness = edge_expansion(cycle_graph(6))
    assert value == Fraction(1, 3)
    assert witness == (1, 2, 3)


def test_vertex_expansion_worked_values():
    assert vertex_expansion(complete_graph(2)) == (Fraction(1), (1,))
    assert vertex_expansion(cycle_graph(4))[0] == Fraction(1)
    assert vertex_expansion(complete_graph(4))[0] == Fraction(1)
    assert vertex_expansion(cycle_graph(6))[0] == Fraction(2, 3)


def test_expansion_against_direct_scan():
    # independent recomputation of both minima on a random regular graph
    from itertools import combinations

    g = random_regular_graph(8, 3, seed=4)
    d = g.regular_degree()
    adj = g.adjacency_matrix()
    best_h = best_mu = None
    for size in range(1, g.n // 2 + 1):
        for w in combinations(range(1, g.n + 1), size):
            inside = np.zeros(g.n, dtype=bool)
            inside[[x - 1 for x in w]] = True
            crossing = int(adj[inside][:, ~inside].sum())
            outer = int(np.count_nonzero(adj[inside].any(axis=0) & ~inside))
            best_h = min(best_h or Fraction(crossing, d * size), Fraction(crossing, d * size))
            best_mu = min(best_mu or Fraction(outer, size), Fraction(outer, size))
    assert edge_expansion(g)[0] == best_h
    assert vertex_expansion(g)[0] == best_mu


def test_spectral_expansion_conventions():
    # C4 walk matrix has eigenvalues 1, 0, 0, -1: eigenvalue gap 1,
    # singular-value gap 0 (bipartite)
    s = spectral_expansion(cycle_graph(4))
    assert abs(s["lambda_eig"] - 1.0) < 1e-12
    assert abs(s["lambda_sv"]) < 1e-12
    s = spectral_expansion(complete_graph(4))
    assert abs(s["lambda_eig"] - 4 / 3) < 1e-12
    assert abs(s["lambda_sv"] - 2 / 3) < 1e-12


def test_expansion_report_keys():
    rep = expansion_report(cycle_graph(4))
    assert rep["n"] == 4 and rep["degree"] == 2
    assert rep["edge_expansion"] == Fraction(1, 2)
    assert rep["vertex_expansion"] == Fraction(1)
    assert isinstance(rep["edge_witness"], tuple)


@pytest.mark.parametrize("g", [cycle_graph(5), complete_graph(5), cycle_graph(8)])
def test_classical_relations_hold(g):
    out = expansion_relations_check(g)
    assert out["passed"], out["checks"]


def test_random_regular_graph_properties():
    g = random_regular_graph(10, 3, seed=0)
    assert set(g.degrees().tolist()) == {3}
    h = random_regular_graph(10, 3, seed=0)
    assert g.edges == h.edges  # deterministic
    assert random_regular_graph(10, 3, seed=1).edges != g.edges
    with pytest.raises(ValidationError):
        random_regular_graph(5, 3, seed=0)  # odd n * odd d


def test_subset_scan_size_cap():
    big = cycle_graph(21)
    with pytest.raises(SizeLimitError):
        edge_expansion(big)


def test_permutation_tuple_from_even_regular_graph():
    g = cycle_graph(5)
    b = graph_to_permutation_tuple(g)
    assert b.d == 2 and b.n == 5
    assert validate_doubly_stochastic(b)
    # each matrix is a permutation and together they rebuild A
    total = np.zeros((5, 5))
    for i in range(2):
        m = b.mats[i].real
        assert np.array_equal(m.sum(axis=0), np.ones(5))
        assert np.array_equal(m.sum(axis=1), np.ones(5))
        total += m
    assert np.array_equal(total, g.adjacency_matrix())


def test_permutation_tuple_odd_degree_needs_explicit_decomposition():
    g = complete_graph(4)
    with pytest.raises(UnsupportedError):
        graph_to_permutation_tuple(g)
    perms = [(2, 1, 4, 3), (3, 4, 1, 2), (4, 3, 2, 1)]
    b = graph_to_permutation_tuple(g, permutations=perms)
    assert b.d == 3
    assert np.array_equal(sum(b.mats).real, g.adjacency_matrix())
    with pytest.raises(ValidationError):
        graph_to_permutation_tuple(g, permutations=perms[:2])
    with pytest.raises(ValidationError):
        graph_to_permutation_tuple(g, permutations=[(1, 2, 3, 4)] * 3)
