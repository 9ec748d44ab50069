import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lewis_ermp.graph import (
    GraphError,
    bowtie_graph,
    build_graph,
    chordal_cycle_graph,
    complete_graph,
    diameter,
    generate,
    grid_graph,
    lollipop_graph,
    margulis_gabber_galil_graph,
    parse_edge_list,
    path_graph,
    random_regular_graph,
    random_tree,
    read_edge_list,
    star_graph,
    watts_strogatz_graph,
    write_edge_list,
)

from conftest import random_connected_graph


def to_nx(G):
    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    H.add_edges_from(G.edge_list())
    return H


def test_edges_canonical_and_deduplicated():
    G = build_graph([(1, 0), (0, 1), (2, 1), (2, 2)])
    assert G.n == 3 and G.m == 2
    assert np.all(G.edges[:, 0] < G.edges[:, 1])


def test_incidence_orientation():
    G = path_graph(3)
    B = G.incidence.toarray()
    for l, (u, v) in enumerate(G.edges):
        assert B[u, l] == 1 and B[v, l] == -1
    assert np.allclose(B.sum(axis=0), 0)


def test_disconnected_input():
    with pytest.raises(GraphError):
        build_graph([(0, 1), (2, 3)], take_lcc=False)
    G = build_graph([(0, 1), (2, 3), (3, 4)])
    assert G.n == 3 and G.m == 2


def test_empty_input():
    with pytest.raises(GraphError):
        build_graph([])


def test_parse_comments_and_one_indexing():
    assert parse_edge_list("# header\n1 2\n2 3 # tail\n") == [(0, 1), (1, 2)]


def test_edge_list_roundtrip(tmp_path):
    G = grid_graph(3, 4)
    write_edge_list(G, tmp_path / "g.edges")
    H = read_edge_list(tmp_path / "g.edges")
    assert H == G


@pytest.mark.parametrize(
    "G,n,m",
    [
        (path_graph(5), 5, 4),
        (star_graph(6), 6, 5),
        (complete_graph(6), 6, 15),
        (grid_graph(20, 20), 400, 760),
        (grid_graph(10, 40), 400, 750),
        (lollipop_graph(400, 400), 800, 80200),
        (bowtie_graph(1000, 999, 1000), 3000, 2999),
        (margulis_gabber_galil_graph(20), 400, 1480),
    ],
)
def test_family_sizes(G, n, m):
    assert (G.n, G.m) == (n, m)
    assert G.is_connected()


def test_chordal_cycle_is_connected_and_simple():
    G = chordal_cycle_graph(400)
    assert G.n == 400 and G.is_connected()
    assert G.m == 797 and G.degrees.max() <= 5


@pytest.mark.parametrize("d,n", [(3, 400), (4, 100), (6, 400)])
def test_random_regular(d, n):
    G = random_regular_graph(d, n, seed=3)
    assert G.n == n and np.all(G.degrees == d)


def test_random_regular_deterministic():
    assert random_regular_graph(3, 50, 7) == random_regular_graph(3, 50, 7)
    assert random_regular_graph(3, 50, 7) != random_regular_graph(3, 50, 8)


def test_watts_strogatz_lcc():
    G = watts_strogatz_graph(400, 4, 2 / 3, seed=1)
    assert G.is_connected() and G.n <= 400 and G.n > 350


def test_generate_parses_fractions():
    G = generate("watts_strogatz", {"n": "100", "k": "4", "p": "2/3"}, seed=0)
    assert G.is_connected()


def test_generate_errors():
    with pytest.raises(GraphError):
        generate("grid", {"w": 3})
    with pytest.raises(GraphError):
        generate("nope", {})


def test_trees():
    assert random_tree(40, 2).is_tree()
    assert bowtie_graph(3, 2, 4).is_tree()
    assert not complete_graph(4).is_tree()


@pytest.mark.parametrize("seed", range(4))
def test_diameter_matches_networkx(seed):
    G = random_connected_graph(60, 10, seed)
    assert diameter(G) == nx.diameter(to_nx(G))


def test_diameter_large_path_uses_sweeps():
    G = path_graph(300)
    assert diameter(G, exact_all_pairs_limit=10) == 299


@given(st.lists(st.tuples(st.integers(0, 15), st.integers(0, 15)), min_size=1, max_size=40))
def test_build_graph_properties(pairs):
    try:
        G = build_graph(pairs)
    except GraphError:
        assume_no_edges = all(a == b for a, b in pairs)
        assert assume_no_edges
        return
    assert G.is_connected()
    assert np.all(G.edges[:, 0] < G.edges[:, 1])
    assert len({tuple(e) for e in G.edge_list()}) == G.m
    assert G.degrees.sum() == 2 * G.m
