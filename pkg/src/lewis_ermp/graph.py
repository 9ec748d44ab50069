"""Simple undirected graphs with a canonical edge order, edge-list I/O and generators.

Edge ``l`` of a :class:`Graph` is the pair ``edges[l] = (u, v)`` with ``u < v``;
its incidence vector ``b_l`` has ``+1`` at ``u`` and ``-1`` at ``v``. Every other
module indexes weights, resistances and leverage scores by this order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import breadth_first_order, connected_components, shortest_path


class GraphError(ValueError):
    """Invalid graph input or generator parameters."""


@dataclass(frozen=True, eq=False)
class Graph:
    n: int
    edges: np.ndarray  # (m, 2) int64, rows sorted, u < v
    name: str = field(default="", compare=False)

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        edges.setflags(write=False)
        object.__setattr__(self, "edges", edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    def __repr__(self):
        label = f"{self.name}, " if self.name else ""
        return f"Graph({label}n={self.n}, m={self.m})"

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __hash__(self):
        return hash((self.n, self.edges.tobytes()))

    @cached_property
    def incidence(self) -> sp.csr_matrix:
        """Signed n x m incidence matrix B; column l is b_l."""
        m = self.m
        rows = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
        cols = np.concatenate([np.arange(m), np.arange(m)])
        vals = np.concatenate([np.ones(m), -np.ones(m)])
        return sp.csr_matrix((vals, (rows, cols)), shape=(self.n, m))

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        u, v = self.edges[:, 0], self.edges[:, 1]
        data = np.ones(2 * self.m)
        a = sp.csr_matrix(
            (data, (np.concatenate([u, v]), np.concatenate([v, u]))), shape=(self.n, self.n)
        )
        return a

    @cached_property
    def neighbors(self) -> list[np.ndarray]:
        a = self.adjacency
        return [a.indices[a.indptr[i] : a.indptr[i + 1]] for i in range(self.n)]

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.adjacency.indptr)

    def edge_index(self) -> dict[tuple[int, int], int]:
        return {(int(u), int(v)): l for l, (u, v) in enumerate(self.edges)}

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        k, _ = connected_components(self.adjacency, directed=False)
        return k == 1

    def is_tree(self) -> bool:
        return self.m == self.n - 1 and self.is_connected()

    def edge_list(self) -> list[tuple[int, int]]:
        return [(int(u), int(v)) for u, v in self.edges]


def _canonical_edges(pairs: Iterable[tuple[int, int]]) -> np.ndarray:
    arr = np.asarray(list(pairs), dtype=np.int64).reshape(-1, 2)
    if len(arr) == 0:
        return arr
    arr = np.sort(arr, axis=1)
    arr = np.unique(arr, axis=0)  # lexicographic row sort + dedup
    return arr


def build_graph(
    edge_list: Iterable[Sequence[int]],
    drop_self_loops: bool = True,
    take_lcc: bool = True,
    name: str = "",
) -> Graph:
    """Clean an edge list into a canonical connected simple graph.

    Vertex ids are compressed to ``0..n-1`` preserving their order. Parallel
    edges are merged. With ``take_lcc`` the largest connected component is kept
    (ties go to the component with the smallest id), otherwise a disconnected
    input raises.
    """
    pairs = [(int(a), int(b)) for a, b in edge_list]
    if any(a < 0 or b < 0 for a, b in pairs):
        raise GraphError("vertex ids must be nonnegative integers")
    loops = [p for p in pairs if p[0] == p[1]]
    if loops and not drop_self_loops:
        raise GraphError(f"self-loop at vertex {loops[0][0]}")
    pairs = [p for p in pairs if p[0] != p[1]]
    if not pairs:
        raise GraphError("empty graph after cleanup")

    ids = np.unique(np.asarray(pairs, dtype=np.int64))
    arr = np.searchsorted(ids, np.asarray(pairs, dtype=np.int64))
    edges = _canonical_edges(arr)

    g = Graph(len(ids), edges, name=name)
    if g.is_connected():
        return g
    if not take_lcc:
        raise GraphError("graph is disconnected (pass take_lcc to keep the largest component)")
    _, comp = connected_components(g.adjacency, directed=False)
    sizes = np.bincount(comp)
    best = int(np.flatnonzero(sizes == sizes.max())[0])  # lowest-id among largest
    kept = edges[comp[edges[:, 0]] == best]
    verts = np.unique(kept)
    return Graph(len(verts), _canonical_edges(np.searchsorted(verts, kept)), name=name)


# ---------------------------------------------------------------------------
# edge-list text format


def parse_edge_list(text: str) -> list[tuple[int, int]]:
    """Parse ``u v`` lines; ``#`` starts a comment. 1-indexed input is shifted to 0."""
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if len(tok) < 2:
            raise GraphError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            pairs.append((int(tok[0]), int(tok[1])))
        except ValueError as exc:
            raise GraphError(f"line {lineno}: non-integer vertex id in {raw!r}") from exc
    if pairs and min(min(p) for p in pairs) == 1:
        pairs = [(a - 1, b - 1) for a, b in pairs]
    return pairs


def read_edge_list(path, drop_self_loops=True, take_lcc=True) -> Graph:
    path = Path(path)
    return build_graph(
        parse_edge_list(path.read_text()),
        drop_self_loops=drop_self_loops,
        take_lcc=take_lcc,
        name=path.stem,
    )


def write_edge_list(G: Graph, path) -> None:
    lines = [f"# n={G.n} m={G.m}"] + [f"{u} {v}" for u, v in G.edges]
    Path(path).write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# diameter


def _bfs_dist(G: Graph, src: int) -> np.ndarray:
    d = shortest_path(G.adjacency, method="D", unweighted=True, indices=[src])[0]
    return d


def diameter(G: Graph, exact_all_pairs_limit: int = 10_000) -> int:
    """Exact unweighted diameter.

    Small graphs use BFS from every vertex; larger ones use the iFUB scheme
    (double-sweep start, BFS levels from a central vertex), which is still exact.
    """
    if G.n == 1:
        return 0
    if not G.is_connected():
        raise GraphError("diameter of a disconnected graph")
    if G.n <= exact_all_pairs_limit:
        best = 0
        chunk = max(1, 2_000_000 // max(G.n, 1))
        for start in range(0, G.n, chunk):
            idx = np.arange(start, min(G.n, start + chunk))
            d = shortest_path(G.adjacency, method="D", unweighted=True, indices=idx)
            best = max(best, int(d.max()))
        return best
    return _ifub(G)


def _ifub(G: Graph) -> int:
    d0 = _bfs_dist(G, 0)
    a = int(np.argmax(d0))
    da = _bfs_dist(G, a)
    b = int(np.argmax(da))
    db = _bfs_dist(G, b)
    # midpoint of the a-b path as the central vertex
    half = int(da[b]) // 2
    cand = np.flatnonzero((da == half) & (da + db == da[b]))
    u = int(cand[0])
    du = _bfs_dist(G, u)
    i = int(du.max())
    lb, ub = max(int(da[b]), i), 2 * i
    while ub > lb:
        level = np.flatnonzero(du == i)
        bi = max(int(_bfs_dist(G, int(x)).max()) for x in level)
        lb = max(lb, bi)
        if lb > 2 * (i - 1):
            return lb
        ub = 2 * (i - 1)
        i -= 1
    return lb


# ---------------------------------------------------------------------------
# generators

FAMILIES = (
    "path",
    "star",
    "cycle",
    "complete",
    "grid",
    "lollipop",
    "bowtie",
    "random_regular",
    "watts_strogatz",
    "margulis_gabber_galil",
    "chordal_cycle",
    "random_tree",
    "gnp",
)


def path_graph(n: int) -> Graph:
    if n < 2:
        raise GraphError("path needs n >= 2")
    return Graph(n, [(i, i + 1) for i in range(n - 1)], name=f"path({n})")


def star_graph(n: int) -> Graph:
    """Star on n vertices, center 0."""
    if n < 2:
        raise GraphError("star needs n >= 2")
    return Graph(n, [(0, i) for i in range(1, n)], name=f"star({n})")


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return Graph(n, _canonical_edges([(i, (i + 1) % n) for i in range(n)]), name=f"cycle({n})")


def complete_graph(n: int) -> Graph:
    if n < 2:
        raise GraphError("complete graph needs n >= 2")
    iu = np.triu_indices(n, 1)
    return Graph(n, np.column_stack(iu), name=f"complete({n})")


def grid_graph(w: int, h: int) -> Graph:
    if w < 1 or h < 1 or w * h < 2:
        raise GraphError("grid needs w*h >= 2")
    idx = np.arange(w * h).reshape(h, w)
    horiz = np.column_stack([idx[:, :-1].ravel(), idx[:, 1:].ravel()])
    vert = np.column_stack([idx[:-1, :].ravel(), idx[1:, :].ravel()])
    return Graph(w * h, _canonical_edges(np.vstack([horiz, vert])), name=f"grid({w},{h})")


def lollipop_graph(k: int, p: int) -> Graph:
    """K_k with a pendant path of p edges hanging off vertex k-1."""
    if k < 2 or p < 0:
        raise GraphError("lollipop needs k >= 2, p >= 0")
    edges = list(zip(*np.triu_indices(k, 1)))
    edges += [(k - 1 + i, k + i) for i in range(p)]
    return Graph(k + p, _canonical_edges(edges), name=f"lollipop({k},{p})")


def bowtie_graph(t: int, p: int, s: int) -> Graph:
    """Path of p edges (vertices 0..p), t leaves on vertex 0 and s leaves on vertex p."""
    if min(t, p, s) < 0 or p + t + s < 1:
        raise GraphError("bowtie needs t, p, s >= 0 and at least one edge")
    if p == 0 and s > 0:
        t, s = t + s, 0  # both stars sit on the same vertex
    edges = [(i, i + 1) for i in range(p)]
    nxt = p + 1
    edges += [(0, nxt + i) for i in range(t)]
    nxt += t
    edges += [(p, nxt + i) for i in range(s)]
    return Graph(p + 1 + t + s, _canonical_edges(edges), name=f"bowtie({t},{p},{s})")


def random_regular_graph(d: int, n: int, seed: int | None = None, max_tries: int = 1000) -> Graph:
    """Configuration model with pair-wise rejection of loops and parallel edges.

    Stubs are matched one random pair at a time; a pair that would create a
    loop or a parallel edge is redrawn, and a dead end restarts the pairing.
    """
    if d < 1 or n <= d or (d * n) % 2:
        raise GraphError(f"no simple {d}-regular graph on {n} vertices")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        edges = _pair_stubs(d, n, rng)
        if edges is not None:
            return build_graph(edges, take_lcc=True, name=f"random_regular({d},{n})")
    raise GraphError(f"configuration model failed {max_tries} times for d={d}, n={n}")


def _pair_stubs(d: int, n: int, rng: np.random.Generator):
    stubs = list(np.repeat(np.arange(n), d))
    seen: set[tuple[int, int]] = set()
    edges = []
    while stubs:
        for _ in range(100):
            i, j = rng.choice(len(stubs), size=2, replace=False)
            a, b = int(stubs[i]), int(stubs[j])
            e = (min(a, b), max(a, b))
            if a != b and e not in seen:
                break
        else:
            return None
        seen.add(e)
        edges.append(e)
        for k in sorted((i, j), reverse=True):
            stubs[k] = stubs[-1]
            stubs.pop()
    return edges


def watts_strogatz_graph(n: int, k: int, p: float, seed: int | None = None) -> Graph:
    """Ring lattice with k nearest neighbours, each edge rewired with probability p."""
    if k % 2 or k >= n or not 0 <= p <= 1:
        raise GraphError("watts_strogatz needs even k < n and p in [0, 1]")
    rng = np.random.default_rng(seed)
    adj = [set() for _ in range(n)]
    for j in range(1, k // 2 + 1):
        for u in range(n):
            v = (u + j) % n
            adj[u].add(v)
            adj[v].add(u)
    for j in range(1, k // 2 + 1):
        for u in range(n):
            v = (u + j) % n
            if rng.random() < p and v in adj[u]:
                w = int(rng.integers(n))
                while w == u or w in adj[u]:
                    if len(adj[u]) >= n - 1:
                        break
                    w = int(rng.integers(n))
                else:
                    adj[u].discard(v)
                    adj[v].discard(u)
                    adj[u].add(w)
                    adj[w].add(u)
    edges = [(u, v) for u in range(n) for v in adj[u] if u < v]
    return build_graph(edges, take_lcc=True, name=f"watts_strogatz({n},{k},{p:g})")


def margulis_gabber_galil_graph(n: int) -> Graph:
    """Margulis-Gabber-Galil expander on the n x n torus, simplified."""
    if n < 2:
        raise GraphError("margulis_gabber_galil needs n >= 2")
    edges = []
    for x in range(n):
        for y in range(n):
            a = x * n + y
            for u, v in (
                ((x + 2 * y) % n, y),
                ((x + 2 * y + 1) % n, y),
                (x, (y + 2 * x) % n),
                (x, (y + 2 * x + 1) % n),
            ):
                edges.append((a, u * n + v))
    edges = [(a, b) for a, b in edges if a != b]
    return Graph(n * n, _canonical_edges(edges), name=f"margulis_gabber_galil({n})")


def chordal_cycle_graph(n: int, chord: str = "double") -> Graph:
    """Cycle on n vertices plus chords, simplified.

    ``chord="double"`` joins i to 2i mod n; ``chord="inverse"`` joins i to
    i^(n-2) mod n (the modular inverse when n is prime).
    """
    if n < 3:
        raise GraphError("chordal_cycle needs n >= 3")
    if chord == "double":
        target = [(2 * i) % n for i in range(n)]
    elif chord == "inverse":
        target = [pow(i, n - 2, n) if i else 0 for i in range(n)]
    else:
        raise GraphError(f"unknown chord rule {chord!r}")
    edges = [(i, (i + 1) % n) for i in range(n)] + [(i, target[i]) for i in range(n)]
    edges = [(a, b) for a, b in edges if a != b]
    return Graph(n, _canonical_edges(edges), name=f"chordal_cycle({n})")


def random_tree(n: int, seed: int | None = None) -> Graph:
    """Uniform labelled tree from a random Pruefer sequence."""
    if n < 2:
        raise GraphError("tree needs n >= 2")
    if n == 2:
        return Graph(2, [(0, 1)], name="random_tree(2)")
    rng = np.random.default_rng(seed)
    seq = rng.integers(0, n, size=n - 2)
    degree = np.ones(n, dtype=np.int64)
    np.add.at(degree, seq, 1)
    import heapq

    leaves = [i for i in range(n) if degree[i] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, int(x)))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, int(x))
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return Graph(n, _canonical_edges(edges), name=f"random_tree({n})")


def gnp_graph(n: int, p: float, seed: int | None = None) -> Graph:
    """Erdos-Renyi G(n, p), largest connected component."""
    rng = np.random.default_rng(seed)
    iu = np.column_stack(np.triu_indices(n, 1))
    keep = rng.random(len(iu)) < p
    if not keep.any():
        raise GraphError("G(n,p) sample has no edges")
    return build_graph(iu[keep], take_lcc=True, name=f"gnp({n},{p:g})")


def generate(family: str, params: dict | None = None, seed: int | None = 0) -> Graph:
    """Build a graph from a named family. Random families are deterministic in ``seed``."""
    params = dict(params or {})
    try:
        if family == "path":
            return path_graph(int(params["n"]))
        if family == "star":
            return star_graph(int(params["n"]))
        if family == "cycle":
            return cycle_graph(int(params["n"]))
        if family == "complete":
            return complete_graph(int(params["n"]))
        if family == "grid":
            return grid_graph(int(params["w"]), int(params["h"]))
        if family == "lollipop":
            return lollipop_graph(int(params["k"]), int(params["p"]))
        if family == "bowtie":
            return bowtie_graph(int(params["t"]), int(params["p"]), int(params["s"]))
        if family == "random_regular":
            return random_regular_graph(int(params["d"]), int(params["n"]), seed)
        if family == "watts_strogatz":
            return watts_strogatz_graph(
                int(params["n"]), int(params["k"]), _as_float(params["p"]), seed
            )
        if family == "margulis_gabber_galil":
            return margulis_gabber_galil_graph(int(params["n"]))
        if family == "chordal_cycle":
            return chordal_cycle_graph(int(params["n"]), params.get("chord", "double"))
        if family == "random_tree":
            return random_tree(int(params["n"]), seed)
        if family == "gnp":
            return gnp_graph(int(params["n"]), _as_float(params["p"]), seed)
    except KeyError as exc:
        raise GraphError(f"family {family!r} is missing parameter {exc.args[0]!r}") from None
    raise GraphError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


def _as_float(x) -> float:
    if isinstance(x, str) and "/" in x:
        a, b = x.split("/", 1)
        return float(a) / float(b)
    return float(x)


def has_cycle(G: Graph) -> bool:
    """Union-find cycle check."""
    parent = list(range(G.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in G.edges:
        ru, rv = find(int(u)), find(int(v))
        if ru == rv:
            return True
        parent[ru] = rv
    return False


def bfs_order(G: Graph, root: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """BFS order and predecessor array (-9999 for the root, scipy convention)."""
    return breadth_first_order(G.adjacency, root, directed=False, return_predecessors=True)
