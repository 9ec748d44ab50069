import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lewis_ermp.graph import complete_graph, grid_graph, lollipop_graph, path_graph, random_tree
from lewis_ermp.laplacian import LaplacianSystem
from lewis_ermp.oracle import design_gap_demo, duality_gap, ermp_solve, hm_gm_construct
from lewis_ermp.trees import congestions, tree_optimal

from conftest import random_connected_graph


def hm(x):
    return len(x) / np.sum(1 / x)


def gm(x):
    return float(np.exp(np.mean(np.log(x))))


def test_triangle_and_complete():
    assert ermp_solve(complete_graph(3)).k_star == pytest.approx(6)
    n = 7
    sol = ermp_solve(complete_graph(n))
    assert sol.k_star == pytest.approx(n * (n - 1) ** 2 / 2)
    assert np.allclose(sol.g_star, 1 / 21)


@pytest.mark.parametrize("G", [grid_graph(4, 5), lollipop_graph(6, 5), random_connected_graph(25, 20, 1)])
def test_solution_invariants(G):
    sol = ermp_solve(G, tol=1e-6)
    assert sol.converged
    assert sol.g_star.min() >= 0 and sol.g_star.sum() == pytest.approx(1)
    assert sol.duality_gap >= -1e-9
    assert sol.k_star >= G.n * (G.n - 1) ** 2 / 2 - 1e-6
    q = G.n * LaplacianSystem(G, sol.g_star).pinv_b_norms_sq
    assert q.max() <= sol.k_star * (1 + 10 * 1e-6)


def test_gap_zero_at_tree_optimum():
    T = random_tree(20, 3)
    g, _ = tree_optimal(T)
    assert abs(duality_gap(T, g)) <= 1e-9
    assert abs(duality_gap(complete_graph(6), np.full(15, 1 / 15))) <= 1e-9


def test_gap_at_uniform_on_a_tree():
    T = random_tree(15, 2)
    c = congestions(T).astype(float)
    m = T.m
    K = m * c.sum()  # n Tr L^+ at uniform weights 1/m
    qmax = m * m * c.max()  # n ||L^+ b_l||^2 = m^2 c_l at uniform weights
    assert duality_gap(T, np.full(m, 1 / m)) == pytest.approx(K - K * K / qmax, rel=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_gap_nonnegative(seed):
    G = random_connected_graph(20, 15, seed)
    g = np.random.default_rng(seed).dirichlet(np.ones(G.m))
    assert duality_gap(G, g) >= -1e-9


def test_size_guard():
    with pytest.raises(ValueError):
        ermp_solve(path_graph(201))


def test_design_gap_small():
    d = design_gap_demo(2)
    assert d["trace_at_lw"] == pytest.approx(2.5)
    assert d["trace_at_inverse_law"] == pytest.approx(2.25)
    assert d["lw_fixed_point_residual"] == 0


def test_design_gap_hundred():
    d = design_gap_demo(100)
    i = np.arange(1, 101)
    assert d["trace_at_lw"] == pytest.approx(100 * np.sum(1.0 / i**2), abs=1e-9)
    assert d["trace_at_inverse_law"] == pytest.approx(np.sum(1.0 / i) ** 2, abs=1e-9)


def test_design_gap_ratio_grows():
    ratios = [design_gap_demo(n)["ratio"] for n in (8, 16, 64, 256, 1024)]
    assert all(b > a for a, b in zip(ratios, ratios[1:]))


def test_hm_gm_example():
    x = hm_gm_construct([1.0, 1.0], 0.5)
    assert x == pytest.approx([2 + math.sqrt(3), 2 - math.sqrt(3)])
    x = hm_gm_construct([1.0, 1.0], 1 - 1e-12)
    assert x == pytest.approx([1, 1], abs=1e-5)
    x = np.array([2.0, 8.0, 4.0])
    y = hm_gm_construct(x, 0.25)
    assert gm(y) == pytest.approx(4, rel=1e-10)
    assert hm(y) == pytest.approx(0.25 * 24 / 7, rel=1e-10)


@given(
    st.lists(st.floats(0.01, 100), min_size=2, max_size=12),
    st.floats(0.01, 0.99),
)
def test_hm_gm_property(xs, t):
    x = np.array(xs)
    y = hm_gm_construct(x, t)
    assert gm(y) == pytest.approx(gm(x), rel=1e-10)
    assert hm(y) == pytest.approx(t * hm(x), rel=1e-10)
    assert y.mean() > x.mean()
    for v in (x, y):
        assert hm(v) <= gm(v) * (1 + 1e-12) and gm(v) <= v.mean() * (1 + 1e-12)


def test_hm_gm_rejects():
    with pytest.raises(ValueError):
        hm_gm_construct([1.0, 2.0], 1.0)
    with pytest.raises(ValueError):
        hm_gm_construct([1.0, -2.0], 0.5)
