"""Spectral thinness of spanning trees and a Lewis-weight tree heuristic."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from scipy.sparse.csgraph import minimum_spanning_tree

from .graph import Graph, GraphError
from .laplacian import DENSE_THRESHOLD, LaplacianSystem, laplacian_matrix
from .lewis import lewis_weights

DENSE_STT_LIMIT = 1500


@dataclass
class ThinTreeReport:
    tree_edges: list
    tree_weights: list
    gamma: float
    bound: float
    ratio: float
    n: int
    m: int
    lewis_iterations: int = 0
    lewis_converged: bool = True

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)


def _tree_indices(G: Graph, T) -> np.ndarray:
    T = np.asarray(T)
    if T.ndim == 1:
        idx = T.astype(np.int64)
    else:
        lookup = G.edge_index()
        idx = []
        for a, b in T.reshape(-1, 2):
            key = (int(min(a, b)), int(max(a, b)))
            if key not in lookup:
                raise GraphError(f"tree edge {key} is not an edge of the graph")
            idx.append(lookup[key])
        idx = np.asarray(idx, dtype=np.int64)
    if len(idx) != G.n - 1 or len(np.unique(idx)) != len(idx):
        raise GraphError(f"a spanning tree needs {G.n - 1} distinct edges, got {len(idx)}")
    sub = Graph(G.n, G.edges[np.sort(idx)])
    if not sub.is_connected():
        raise GraphError("edge subset does not span the graph")
    return idx


def thinness(G: Graph, T, tree_weights=None, tol: float = 1e-8, maxiter: int = 10_000, seed=0) -> float:
    """Smallest ``gamma`` with ``L_{T,w} <= gamma L_G`` (``L_G`` unweighted).

    ``T`` is either edge indices into ``G`` or an array of vertex pairs.
    """
    idx = _tree_indices(G, T)
    w = np.ones(len(idx)) if tree_weights is None else np.broadcast_to(np.asarray(tree_weights, float), idx.shape)
    gt = np.zeros(G.m)
    gt[idx] = w
    LT = laplacian_matrix(G, gt)
    n = G.n
    if n <= DENSE_STT_LIMIT:
        LG = laplacian_matrix(G, np.ones(G.m)).toarray() + 1.0 / n
        return float(sla.eigh(LT.toarray(), LG, eigvals_only=True)[-1])
    S = LaplacianSystem(G, np.ones(G.m), dense_threshold=DENSE_THRESHOLD)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n)
    x -= x.mean()
    lam = 0.0
    for _ in range(maxiter):
        y = S.pinv_apply(LT @ x)
        lam_new = float(x @ (LT @ x)) / float(x @ (laplacian_matrix(G, np.ones(G.m)) @ x))
        x = y / np.linalg.norm(y)
        if abs(lam_new - lam) <= tol * abs(lam_new):
            return lam_new
        lam = lam_new
    return lam


def max_weight_spanning_tree(G: Graph, w) -> np.ndarray:
    """Edge indices of a maximum-weight spanning tree."""
    w = np.asarray(w, dtype=float)
    # shift to strictly positive costs so no edge is dropped as a structural zero
    cost = (w.max() - w) + 1.0
    A = sp.coo_matrix((cost, (G.edges[:, 0], G.edges[:, 1])), shape=(G.n, G.n)).tocsr()
    mst = minimum_spanning_tree(A).tocoo()
    lookup = G.edge_index()
    return np.sort([lookup[(int(min(a, b)), int(max(a, b)))] for a, b in zip(mst.row, mst.col)])


def lw_thin_tree(G: Graph, eps: float = 0.01, strict: bool = False) -> ThinTreeReport:
    """Maximum spanning tree under the Lewis weights, weighted uniformly by ``(n-1)/m``."""
    lw = lewis_weights(G, eps=eps, strict=strict)
    idx = max_weight_spanning_tree(G, lw.w_inf)
    scale = (G.n - 1) / G.m
    gamma = thinness(G, idx, np.full(len(idx), scale))
    return ThinTreeReport(
        tree_edges=[list(map(int, G.edges[l])) for l in idx],
        tree_weights=[scale] * len(idx),
        gamma=gamma,
        bound=scale,
        ratio=gamma / scale,
        n=G.n,
        m=G.m,
        lewis_iterations=lw.iterations,
        lewis_converged=lw.converged,
    )
