"""Exact Kirchhoff-index optimisation on trees and the polarization process.

On a tree the Kirchhoff index is ``sum_l c_l / g_l`` where the congestion
``c_l = n_l (n - n_l)`` counts vertex pairs routed through edge ``l``. The
optimum, the Lewis-weight ratio and the ``E_< / E_>`` edge partition all have
closed forms in the congestions.

Local transformations (LTs) re-hang subtrees so that exactly one congestion
changes. Edges keep their slot index across an LT even when an endpoint moves,
so per-edge quantities stay comparable along a trajectory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .graph import Graph

TIE_RTOL = 1e-12


class TreeError(ValueError):
    pass


def _adjacency(n: int, edges) -> list[list[tuple[int, int]]]:
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for slot, (a, b) in enumerate(edges):
        adj[a].append((b, slot))
        adj[b].append((a, slot))
    return adj


def _rooted(n: int, edges, root: int):
    """Parent, BFS order, child endpoint per slot and subtree sizes."""
    adj = _adjacency(n, edges)
    parent = np.full(n, -1)
    parent_slot = np.full(n, -1)
    order = [root]
    seen = np.zeros(n, dtype=bool)
    seen[root] = True
    for x in order:
        for y, slot in adj[x]:
            if not seen[y]:
                seen[y] = True
                parent[y] = x
                parent_slot[y] = slot
                order.append(y)
    if len(order) != n:
        raise TreeError("edge set is not a spanning tree")
    size = np.ones(n, dtype=np.int64)
    for x in reversed(order[1:]):
        size[parent[x]] += size[x]
    child = np.empty(len(edges), dtype=np.int64)
    for x in order[1:]:
        child[parent_slot[x]] = x
    return parent, order, child, size


def _centroid(n: int, edges) -> int:
    parent, order, _, size = _rooted(n, edges, 0)
    best, best_val = 0, n
    adj = _adjacency(n, edges)
    for x in range(n):
        worst = n - size[x]
        for y, _ in adj[x]:
            if y != parent[x]:
                worst = max(worst, size[y])
        if worst < best_val:
            best, best_val = x, worst
    return best


@dataclass(frozen=True, eq=False)
class TreeInstance:
    """A tree with its congestions, optimal weights and edge partition.

    ``edges`` is in slot order (not necessarily the canonical :class:`Graph` order).
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    root: int = -1

    def __post_init__(self):
        edges = tuple((int(a), int(b)) for a, b in self.edges)
        if len(edges) != self.n - 1:
            raise TreeError(f"a tree on {self.n} vertices has {self.n - 1} edges, got {len(edges)}")
        object.__setattr__(self, "edges", edges)
        if self.root < 0:
            object.__setattr__(self, "root", _centroid(self.n, edges))
        _rooted(self.n, edges, self.root)  # validates

    @classmethod
    def from_graph(cls, G: Graph) -> "TreeInstance":
        if not G.is_tree():
            raise TreeError(f"{G!r} is not a tree")
        return cls(G.n, tuple(G.edge_list()))

    @property
    def m(self) -> int:
        return self.n - 1

    @property
    def tree(self) -> Graph:
        e = np.sort(np.asarray(self.edges, dtype=np.int64).reshape(-1, 2), axis=1)
        return Graph(self.n, e[np.lexsort((e[:, 1], e[:, 0]))])

    @cached_property
    def _rooting(self):
        return _rooted(self.n, self.edges, self.root)

    @cached_property
    def congestions(self) -> np.ndarray:
        _, _, child, size = self._rooting
        s = size[child]
        c = s * (self.n - s)
        c.setflags(write=False)
        return c

    @cached_property
    def k_star(self) -> float:
        return float(np.sqrt(self.congestions).sum() ** 2)

    @cached_property
    def g_star(self) -> np.ndarray:
        r = np.sqrt(self.congestions.astype(float))
        return r / r.sum()

    @cached_property
    def alpha(self) -> float:
        c = self.congestions.astype(float)
        return float(self.m * c.sum() / np.sqrt(c).sum() ** 2)

    @cached_property
    def partition(self) -> tuple[frozenset, frozenset]:
        g = self.g_star
        thr = float(g @ g)
        low = g <= thr * (1 + TIE_RTOL)  # ties go to E_<
        return frozenset(np.flatnonzero(low).tolist()), frozenset(np.flatnonzero(~low).tolist())

    @cached_property
    def degrees(self) -> np.ndarray:
        d = np.zeros(self.n, dtype=np.int64)
        for a, b in self.edges:
            d[a] += 1
            d[b] += 1
        return d

    def is_leaf_edge(self, k: int) -> bool:
        a, b = self.edges[k]
        return self.degrees[a] == 1 or self.degrees[b] == 1

    def side_size(self, k: int, x: int) -> int:
        """Vertices on the side of edge ``k`` that contains endpoint ``x``."""
        _, _, child, size = self._rooting
        c = int(child[k])
        return int(size[c]) if x == c else self.n - int(size[c])

    def with_edges(self, edges) -> "TreeInstance":
        return TreeInstance(self.n, tuple(edges))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "edges": [list(e) for e in self.edges],
            "congestions": self.congestions.tolist(),
            "k_star": self.k_star,
            "alpha": self.alpha,
            "E_lt": sorted(self.partition[0]),
            "E_gt": sorted(self.partition[1]),
        }


def _instance(T) -> TreeInstance:
    if isinstance(T, TreeInstance):
        return T
    if isinstance(T, Graph):
        return TreeInstance.from_graph(T)
    raise TypeError(f"expected a Graph or TreeInstance, got {type(T).__name__}")


def congestions(T) -> np.ndarray:
    return np.array(_instance(T).congestions)


def tree_optimal(T) -> tuple[np.ndarray, float]:
    """Optimal normalized weights ``sqrt(c_l) / sum sqrt(c)`` and ``K* = (sum sqrt(c))^2``."""
    t = _instance(T)
    return np.array(t.g_star), t.k_star


def tree_alpha(T) -> float:
    """``K(g_uni) / K* = m sum(c) / (sum sqrt(c))^2``."""
    return _instance(T).alpha


def partition_edges(T) -> tuple[frozenset, frozenset]:
    return _instance(T).partition


# ---------------------------------------------------------------------------
# local transformations


@dataclass
class LTResult:
    tree: TreeInstance
    kind: str  # "lower", "upper-1", "upper-2.1", "upper-2.2", "push"
    k: int
    changed_edge: int


def lower_lt(T, k: int) -> LTResult:
    """Lift the children of the lower endpoint of ``k`` onto its upper endpoint.

    Afterwards ``k`` is a leaf edge with congestion ``m``; no other congestion moves.
    """
    t = _instance(T)
    if k not in t.partition[0]:
        raise TreeError(f"lower LT needs an edge of E_<, edge {k} is in E_>")
    if t.is_leaf_edge(k):
        raise TreeError(f"edge {k} is already a leaf edge")
    parent, _, child, _ = t._rooting
    v = int(child[k])
    u = int(parent[v])
    edges = list(t.edges)
    for slot, (a, b) in enumerate(edges):
        if slot == k:
            continue
        if a == v:
            edges[slot] = (u, b)
        elif b == v:
            edges[slot] = (a, u)
    return LTResult(t.with_edges(edges), "lower", k, k)


def _gt_degree(t: TreeInstance) -> np.ndarray:
    d = np.zeros(t.n, dtype=np.int64)
    for slot in t.partition[1]:
        a, b = t.edges[slot]
        d[a] += 1
        d[b] += 1
    return d


def _gt_neighbors(t: TreeInstance, v: int, exclude: int) -> list[tuple[int, int]]:
    """``(x, slot)`` for E_> edges at ``v`` other than ``exclude``."""
    out = []
    for slot in sorted(t.partition[1]):
        if slot == exclude:
            continue
        a, b = t.edges[slot]
        if a == v:
            out.append((b, slot))
        elif b == v:
            out.append((a, slot))
    return out


def upper_lt(T, k: int) -> LTResult:
    """Re-hang a branch near ``k`` so that one E_> congestion strictly grows.

    Degrees are taken in the subtree spanned by E_>. Case 1 (both endpoints of
    degree > 2) and case 2.1 move the second-smallest branch at the high-degree
    endpoint ``v`` onto the smallest one; case 2.2 moves the smallest branch
    across ``k``.
    """
    t = _instance(T)
    if k not in t.partition[1]:
        raise TreeError(f"upper LT needs an edge of E_>, edge {k} is in E_<")
    a, b = t.edges[k]
    d = _gt_degree(t)
    if d[a] <= 2 and d[b] <= 2:
        raise TreeError(f"edge {k}: both endpoints have E_>-degree <= 2")
    if d[a] > 2 and d[b] > 2:
        case = "1"
        v, u = (a, b) if t.side_size(k, a) <= t.side_size(k, b) else (b, a)
    else:
        case = "2"
        v, u = (a, b) if d[a] > 2 else (b, a)

    branches = []
    for x, slot in _gt_neighbors(t, v, exclude=k):
        branches.append((t.side_size(slot, x), slot, x))
    branches.sort()
    (n1, s1, x1), (n2, s2, x2) = branches[0], branches[1]
    n_prime = t.side_size(k, u)

    edges = list(t.edges)
    if case == "1" or n1 <= n_prime:
        edges[s2] = (x1, x2)
        kind, changed = ("upper-1" if case == "1" else "upper-2.1"), s1
    else:
        edges[s1] = (u, x1)
        kind, changed = "upper-2.2", k
    return LTResult(t.with_edges(edges), kind, k, changed)


def _gt_path(t: TreeInstance) -> list[int] | None:
    """Vertices of the E_> subtree in path order, or None if it is not a path."""
    gt = t.partition[1]
    if not gt:
        return None
    d = _gt_degree(t)
    if d.max() > 2:
        return None
    ends = [x for x in range(t.n) if d[x] == 1]
    start = min(ends)
    path = [start]
    prev_slot = -1
    while True:
        nxt = [(x, s) for x, s in _gt_neighbors(t, path[-1], exclude=prev_slot)]
        if not nxt:
            return path
        x, prev_slot = nxt[0]
        path.append(x)


def _push_step(t: TreeInstance, path: list[int]) -> LTResult | None:
    """Move one leaf from an inner path vertex one step toward the nearer end."""
    pos = {x: i for i, x in enumerate(path)}
    L = len(path) - 1
    slots = sorted(t.partition[0])
    for slot in slots:
        a, b = t.edges[slot]
        hub, leaf = (a, b) if t.degrees[b] == 1 else (b, a)
        if hub not in pos or not 0 < pos[hub] < L:
            continue
        i = pos[hub]
        left_edge = _edge_between(t, path[i - 1], hub)
        right_edge = _edge_between(t, hub, path[i + 1])
        left = t.side_size(left_edge, path[i - 1])
        right = t.side_size(right_edge, path[i + 1])
        if left == right:
            star_l = t.degrees[path[0]] - 1
            star_r = t.degrees[path[L]] - 1
            go_left = star_l >= star_r
        else:
            go_left = left < right
        target, changed = (path[i - 1], left_edge) if go_left else (path[i + 1], right_edge)
        edges = list(t.edges)
        edges[slot] = (target, leaf)
        return LTResult(t.with_edges(edges), "push", slot, changed)
    return None


def _edge_between(t: TreeInstance, x: int, y: int) -> int:
    for slot, (a, b) in enumerate(t.edges):
        if (a, b) in ((x, y), (y, x)):
            return slot
    raise TreeError(f"no edge between {x} and {y}")


# ---------------------------------------------------------------------------
# polarization


@dataclass
class Polarization:
    initial: TreeInstance
    final: TreeInstance
    steps: list[dict] = field(default_factory=list)
    trajectory: list[TreeInstance] = field(default_factory=list)

    def jsonl(self) -> str:
        return "".join(json.dumps(s, sort_keys=True) + "\n" for s in self.steps)


def polarize(T, keep_trajectory: bool = True) -> Polarization:
    """Drive a tree to a bowtie by LTs that never decrease the Lewis-weight ratio.

    Priority: lower LTs on non-leaf E_< edges, then upper LTs until E_> spans a
    path, then leaves are pushed from inner path vertices to the ends.
    ``partition_invariant`` records whether the recomputed partition is
    unchanged by a step; ``changed_edge_kept`` whether the edge whose congestion
    moved stayed on its side.
    """
    t = _instance(T)
    start = t
    steps: list[dict] = []
    traj = [t] if keep_trajectory else []
    cap = 10 * t.n * t.n

    def record(res: LTResult, before: TreeInstance):
        after = res.tree
        steps.append(
            {
                "step": len(steps),
                "type": res.kind,
                "k": int(res.k),
                "changed_edge": int(res.changed_edge),
                "alpha_before": before.alpha,
                "alpha_after": after.alpha,
                "partition_invariant": after.partition == before.partition,
                "changed_edge_kept": (res.changed_edge in after.partition[0])
                == (res.changed_edge in before.partition[0]),
            }
        )
        if keep_trajectory:
            traj.append(after)
        if len(steps) > cap:
            raise RuntimeError(f"polarization exceeded {cap} steps")
        return after

    # One step at a time with the partition recomputed after every step, so a
    # partition shift at an untouched edge sends the process back to an earlier phase.
    while True:
        todo = [k for k in sorted(t.partition[0]) if not t.is_leaf_edge(k)]
        if todo:
            t = record(lower_lt(t, todo[0]), t)
            continue
        d = _gt_degree(t)
        todo = [k for k in sorted(t.partition[1]) if max(d[t.edges[k][0]], d[t.edges[k][1]]) > 2]
        if todo:
            t = record(upper_lt(t, todo[0]), t)
            continue
        path = _gt_path(t)
        res = _push_step(t, path) if path is not None else None
        if res is None:
            break
        t = record(res, t)

    return Polarization(start, t, steps, traj)


def is_bowtie(T) -> tuple[bool, tuple[int, int, int] | None]:
    """Whether ``T`` is a path of non-leaf vertices with leaves only at its two ends.

    The decomposition ``(t, p, s)`` has ``p`` spine edges and ``t``/``s`` leaves at
    the spine end with the smaller/larger vertex id.
    """
    t = _instance(T)
    n = t.n
    if n == 2:
        return True, (0, 1, 0)
    deg = t.degrees
    spine = [x for x in range(n) if deg[x] > 1]
    spine_set = set(spine)
    adj = _adjacency(n, t.edges)
    sdeg = {x: sum(1 for y, _ in adj[x] if y in spine_set) for x in spine}
    if len(spine) == 1:
        return True, (n - 1, 0, 0)
    if any(v > 2 for v in sdeg.values()):
        return False, None
    ends = sorted(x for x in spine if sdeg[x] == 1)
    if len(ends) != 2:
        return False, None
    for x in spine:
        if x not in ends and deg[x] != sdeg[x]:
            return False, None  # a leaf hangs off an inner spine vertex
    first, last = ends
    return True, (int(deg[first] - 1), len(spine) - 1, int(deg[last] - 1))
