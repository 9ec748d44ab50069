import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lewis_ermp.graph import complete_graph, grid_graph, lollipop_graph, random_regular_graph, random_tree
from lewis_ermp.laplacian import LaplacianSystem
from lewis_ermp.lewis import (
    LewisNonConvergence,
    fixed_point_residual,
    iteration_budget,
    lewis_weights,
)


def test_triangle():
    r = lewis_weights(complete_graph(3), eps=0.01)
    assert np.allclose(r.w_inf, 2 / 3)
    assert np.allclose(r.g_lw, 1 / 3)
    assert r.residual == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_tree_weights_are_uniform(seed):
    T = random_tree(25, seed)
    r = lewis_weights(T, eps=0.01)
    assert np.allclose(r.w_inf, 1)
    assert r.iterations == 1


def test_lollipop_certificate():
    G = lollipop_graph(10, 10)
    r = lewis_weights(G, eps=0.01)
    assert r.converged and r.residual <= 0.01
    assert fixed_point_residual(G, r.w_inf) == pytest.approx(r.residual, rel=1e-9)


def test_fixed_point_residual_examples():
    assert fixed_point_residual(random_tree(10, 0), np.ones(9)) == pytest.approx(0, abs=1e-12)
    assert fixed_point_residual(complete_graph(3), np.ones(3)) == pytest.approx(1 / 3)
    assert fixed_point_residual(complete_graph(4), np.full(6, 0.5)) == pytest.approx(0, abs=1e-12)
    with pytest.raises(ValueError):
        fixed_point_residual(complete_graph(3), np.array([1.0, 0.0, 1.0]))


def test_budget():
    G = grid_graph(20, 20)
    assert iteration_budget(G, 0.01) == math.ceil(4 / 0.01 * math.log(2))
    G = complete_graph(30)
    assert iteration_budget(G, 0.1, C=2) == math.ceil(2 / 0.1 * math.log(G.m / G.n))


def test_strict_raises_on_budget_exhaustion():
    G = grid_graph(6, 6)
    with pytest.raises(LewisNonConvergence) as info:
        lewis_weights(G, eps=1e-6, max_iters=3, strict=True)
    assert not info.value.result.converged


@given(st.integers(3, 6), st.integers(5, 30), st.integers(0, 1000))
def test_foster_and_bounds_on_regular_graphs(d, half, seed):
    n = 2 * half + (d % 2 == 0)
    G = random_regular_graph(d, n, seed)
    r = lewis_weights(G, eps=0.05)
    assert abs(r.w_inf.sum() - (G.n - 1)) <= 1e-6
    assert np.all(r.w_inf > 0) and np.all(r.w_inf <= 1 + 1e-9)
    assert r.converged and r.residual <= 0.05


def test_resistances_saturate_at_lewis_weights():
    G = lollipop_graph(6, 5)
    r = lewis_weights(G, eps=0.001)
    R = LaplacianSystem(G, r.g_lw).edge_resistances
    assert np.max(np.abs(R - (G.n - 1))) / (G.n - 1) <= 3e-3


@pytest.mark.parametrize("seed", range(4))
def test_lewis_weights_minimise_max_resistance(seed):
    G = grid_graph(5, 6)
    eps = 0.001
    r = lewis_weights(G, eps=eps)
    rng = np.random.default_rng(seed)
    for _ in range(20):
        g = rng.dirichlet(np.ones(G.m))
        assert LaplacianSystem(G, g).edge_resistances.max() >= (1 - 3 * eps) * (G.n - 1)
    assert LaplacianSystem(G, r.g_lw).edge_resistances.max() <= (1 + 3 * eps) * (G.n - 1)


def test_deterministic():
    G = random_regular_graph(3, 60, 1)
    a, b = lewis_weights(G, 0.01), lewis_weights(G, 0.01)
    assert np.array_equal(a.w_inf, b.w_inf) and a.iterations == b.iterations
