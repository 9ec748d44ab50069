"""Effective resistances, the Kirchhoff index and their gradient identities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .laplacian import LaplacianSystem


@dataclass
class ResistanceProfile:
    edge_resistances: np.ndarray
    kirchhoff: float

    @classmethod
    def from_system(cls, S: LaplacianSystem) -> "ResistanceProfile":
        return cls(np.array(S.edge_resistances), kirchhoff(S))


def effective_resistance(S: LaplacianSystem, i: int, j: int) -> float:
    """``b_ij^T L_g^+ b_ij`` with one solve."""
    if i == j:
        raise ValueError("effective resistance needs two distinct vertices")
    z = np.zeros(S.n)
    z[i], z[j] = 1.0, -1.0
    x = S.solve_shifted(z)
    return float(x[i] - x[j])


def pair_resistances(S: LaplacianSystem, pairs) -> np.ndarray:
    """Resistances for many ``(i, j)`` pairs, solved as one block."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if np.any(pairs[:, 0] == pairs[:, 1]):
        raise ValueError("effective resistance needs two distinct vertices")
    if S.backend == "dense":
        P = S.shifted_inverse
        i, j = pairs[:, 0], pairs[:, 1]
        return P[i, i] + P[j, j] - 2 * P[i, j]
    Z = np.zeros((S.n, len(pairs)))
    cols = np.arange(len(pairs))
    Z[pairs[:, 0], cols] = 1.0
    Z[pairs[:, 1], cols] = -1.0
    X = S.solve_shifted(Z)
    return X[pairs[:, 0], cols] - X[pairs[:, 1], cols]


def resistance_matrix(S: LaplacianSystem) -> np.ndarray:
    """Dense matrix of all pairwise resistances (small graphs)."""
    P = S.pinv
    d = np.diag(P)
    return d[:, None] + d[None, :] - 2 * P


def kirchhoff(S: LaplacianSystem, cross_check: bool = False) -> float:
    """``K_G(g) = n Tr L_g^+``; ``cross_check`` also sums all pairs and compares."""
    k = S.n * S.trace_pinv
    if cross_check:
        R = resistance_matrix(S)
        pairwise = float(np.triu(R, 1).sum())
        if abs(pairwise - k) > 1e-8 * abs(k):
            raise AssertionError(f"trace Kirchhoff {k} disagrees with pair sum {pairwise}")
    return float(k)


def logdet_gradient(S: LaplacianSystem) -> np.ndarray:
    """``-d/dg_l log det(L_g^+ + 11^T/n)``, which equals the edge resistances."""
    return np.array(S.edge_resistances)


def kirchhoff_gradient(S: LaplacianSystem) -> np.ndarray:
    """``dK/dg_l = -n ||L_g^+ b_l||^2``."""
    return -S.n * np.array(S.pinv_b_norms_sq)


def metric_check(S: LaplacianSystem, samples: int = 100, seed: int | None = 0, slack: float = 1e-9) -> dict:
    """Sample vertex triples and test ``R_ij <= R_ik + R_kj``."""
    rng = np.random.default_rng(seed)
    if S.n < 3:
        return {"samples": 0, "max_violation": 0.0, "failures": 0}
    trip = np.array([rng.choice(S.n, size=3, replace=False) for _ in range(samples)])
    i, j, k = trip.T
    rij = pair_resistances(S, np.column_stack([i, j]))
    rik = pair_resistances(S, np.column_stack([i, k]))
    rkj = pair_resistances(S, np.column_stack([k, j]))
    viol = rij - (rik + rkj)
    worst = float(max(viol.max(), 0.0))
    return {
        "samples": int(samples),
        "max_violation": worst,
        "failures": int(np.sum(viol > slack * np.maximum(rij, 1.0))),
    }
