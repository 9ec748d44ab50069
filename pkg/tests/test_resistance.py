import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lewis_ermp.graph import complete_graph, cycle_graph, path_graph
from lewis_ermp.laplacian import LaplacianSystem
from lewis_ermp.resistance import (
    ResistanceProfile,
    effective_resistance,
    kirchhoff,
    kirchhoff_gradient,
    logdet_gradient,
    metric_check,
    pair_resistances,
    resistance_matrix,
)

from conftest import random_connected_graph


def system(G, seed=0, dense_threshold=2000):
    g = np.random.default_rng(seed).uniform(0.2, 2.0, G.m)
    return LaplacianSystem(G, g / g.sum(), dense_threshold=dense_threshold)


def test_path_resistance_is_length():
    S = LaplacianSystem(path_graph(6), np.ones(5))
    assert effective_resistance(S, 0, 5) == pytest.approx(5)
    assert effective_resistance(S, 1, 3) == pytest.approx(2)


def test_complete_graph_kirchhoff():
    n = 7
    G = complete_graph(n)
    S = LaplacianSystem(G, np.full(G.m, 1 / G.m))
    assert kirchhoff(S, cross_check=True) == pytest.approx(n * (n - 1) ** 2 / 2)


def test_against_networkx():
    G = random_connected_graph(20, 15, 3)
    S = LaplacianSystem(G, np.ones(G.m))
    H = nx.Graph(G.edge_list())
    for i, j in [(0, 5), (3, 17), (8, 9)]:
        assert effective_resistance(S, i, j) == pytest.approx(nx.resistance_distance(H, i, j), rel=1e-9)


@pytest.mark.parametrize("dense_threshold", [2000, 5])
def test_pair_resistances_batch(dense_threshold):
    G = random_connected_graph(30, 20, 1)
    S = system(G, dense_threshold=dense_threshold)
    pairs = [(0, 1), (4, 20), (29, 3)]
    R = resistance_matrix(system(G))
    assert np.allclose(pair_resistances(S, pairs), [R[i, j] for i, j in pairs], rtol=1e-8)


@given(st.integers(4, 25), st.integers(0, 30), st.integers(0, 10_000))
def test_resistance_identities(n, extra, seed):
    G = random_connected_graph(n, extra, seed)
    S = system(G, seed)
    R = S.edge_resistances
    assert np.isclose(R @ S.g, G.n - 1)
    assert np.isclose(kirchhoff(S), np.triu(resistance_matrix(S), 1).sum())
    assert metric_check(S, samples=30, seed=seed)["failures"] == 0


def test_kirchhoff_gradient_finite_difference():
    G = random_connected_graph(15, 12, 4)
    S = system(G, 4)
    grad = kirchhoff_gradient(S)
    h = 1e-6
    for l in range(0, G.m, 3):
        gp, gm = S.g.copy(), S.g.copy()
        gp[l] += h
        gm[l] -= h
        fd = (kirchhoff(LaplacianSystem(G, gp)) - kirchhoff(LaplacianSystem(G, gm))) / (2 * h)
        assert fd == pytest.approx(grad[l], rel=1e-5)
    assert np.isclose(grad @ S.g, -kirchhoff(S))


def test_logdet_gradient_is_resistance():
    G = cycle_graph(9)
    S = system(G, 2)
    R = logdet_gradient(S)
    h = 1e-6
    for l in range(G.m):
        gp, gm = S.g.copy(), S.g.copy()
        gp[l] += h
        gm[l] -= h
        fd = -(LaplacianSystem(G, gp).logdet_pinv - LaplacianSystem(G, gm).logdet_pinv) / (2 * h)
        assert fd == pytest.approx(R[l], rel=1e-5)


def test_profile():
    S = system(complete_graph(5))
    P = ResistanceProfile.from_system(S)
    assert P.kirchhoff == pytest.approx(kirchhoff(S))
    assert len(P.edge_resistances) == 10


def test_same_vertex_rejected():
    S = system(path_graph(3))
    with pytest.raises(ValueError):
        effective_resistance(S, 1, 1)
