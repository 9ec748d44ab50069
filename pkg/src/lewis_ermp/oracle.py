"""Reference ERMP solutions for small graphs, plus two small design-theory constructions.

The Kirchhoff index ``K(g) = n Tr L_g^+`` is convex on the simplex. The solver
runs entropic mirror descent from uniform weights and stops on the relative
duality gap, which certifies the returned value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .graph import Graph

MAX_ORACLE_N = 200


@dataclass
class ErmpSolution:
    g_star: np.ndarray
    k_star: float
    duality_gap: float
    iterations: int
    converged: bool = True

    def to_dict(self) -> dict:
        return {
            "g_star": self.g_star.tolist(),
            "k_star": self.k_star,
            "duality_gap": self.duality_gap,
            "iterations": self.iterations,
            "converged": self.converged,
        }


def _dense_incidence(G: Graph) -> np.ndarray:
    return G.incidence.toarray()


def _state(B: np.ndarray, g: np.ndarray):
    """``(K, n ||L^+ b_l||^2)`` at ``g``; ``inf`` if the weighted Laplacian is singular."""
    n = B.shape[0]
    M = (B * g) @ B.T + 1.0 / n
    try:
        c = sla.cho_factor(M)
    except sla.LinAlgError:
        return math.inf, None
    Minv = sla.cho_solve(c, np.eye(n))
    tr = float(np.trace(Minv)) - 1.0
    PB = Minv @ B  # columns of B are orthogonal to 1, so M^{-1} b_l = L^+ b_l
    return n * tr, n * np.einsum("ij,ij->j", PB, PB)


def _gap(K: float, q: np.ndarray) -> float:
    qmax = float(q.max())
    return K - K * K / qmax


def duality_gap(G: Graph, g) -> float:
    """``K - n (Tr L^+)^2 / max_l ||L^+ b_l||^2``; zero exactly at the optimum."""
    g = np.asarray(g, dtype=float)
    K, q = _state(_dense_incidence(G), g)
    if q is None:
        raise ValueError("weights leave the graph disconnected")
    return _gap(K, q)


def ermp_solve(
    G: Graph, tol: float = 1e-6, max_iters: int = 50_000, g0=None, armijo: float = 1e-4
) -> ErmpSolution:
    """Minimise the Kirchhoff index over normalized edge weights.

    Iterates ``g <- g * exp(s q / K)`` (renormalized), where ``q = -grad K``,
    with the step ``s`` found by Armijo backtracking and enlarged after each
    accepted step. Stops once ``gap / K <= tol``.
    """
    if G.n > MAX_ORACLE_N:
        raise ValueError(f"the dense oracle handles n <= {MAX_ORACLE_N}, got {G.n}")
    B = _dense_incidence(G)
    g = np.full(G.m, 1.0 / G.m) if g0 is None else np.asarray(g0, dtype=float) / np.sum(g0)
    K, q = _state(B, g)
    step = 1.0
    it = 0
    gap = _gap(K, q)
    while gap > tol * K and it < max_iters:
        it += 1
        grad = -q
        z = q / K
        while True:
            logits = np.log(g) + step * (z - z.max())
            gn = np.exp(logits - logits.max())
            gn /= gn.sum()
            Kn, qn = _state(B, gn)
            if Kn <= K + armijo * float(grad @ (gn - g)):
                break
            step *= 0.5
            if step < 1e-12:
                break
        if step < 1e-12:
            break
        g, K, q = gn, Kn, qn
        gap = _gap(K, q)
        step = min(step * 2.0, 1e6)
    return ErmpSolution(g, float(K), float(gap), it, bool(gap <= tol * K))


# ---------------------------------------------------------------------------
# experiment-design separation example


def design_gap_demo(n: int) -> dict:
    """Lewis weights versus the ``1/i`` law for the design matrix ``diag(1..n)``.

    Every row has leverage 1 under any positive weighting, so the Lewis weights
    are all ones and the normalized design is uniform.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    i = np.arange(1, n + 1, dtype=float)
    w = np.ones(n)
    lev = w * i * i / (w * i * i)  # diagonal design: a_i^T (A^T W A)^{-1} a_i
    fixed_point_residual = float(np.max(np.abs(lev / w - 1)))
    g_lw = w / n
    trace_lw = float(np.sum(1.0 / (g_lw * i * i)))
    H = float(np.sum(1.0 / i))
    g0 = (1.0 / i) / H
    trace_inv = float(np.sum(1.0 / (g0 * i * i)))
    return {
        "n": n,
        "trace_at_lw": trace_lw,
        "trace_at_inverse_law": trace_inv,
        "ratio": trace_lw / trace_inv,
        "harmonic": H,
        "lw_fixed_point_residual": fixed_point_residual,
    }


def hm_gm_construct(x, t: float) -> np.ndarray:
    """Rescale the first two entries so the geometric mean stays put and the harmonic mean scales by ``t``."""
    if not 0 < t < 1:
        raise ValueError(f"t must lie in (0, 1), got {t}")
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or len(x) < 2 or np.any(x <= 0):
        raise ValueError("x must be a positive vector of length >= 2")
    y = 1.0 / x
    S = float(y.sum())
    tp = (1.0 / t - 1.0) * S
    y1, y2 = y[0], y[1]
    p = ((tp + y1 + y2) + math.sqrt(tp * tp + 2 * tp * (y1 + y2) + (y1 - y2) ** 2)) / (2 * y2)
    out = x.copy()
    out[0] *= p
    out[1] /= p
    return out
