"""l_inf-Lewis weights of an edge-incidence matrix by averaged fixed-point iteration.

Starting from ``w = (n-1)/m``, each step replaces ``w`` by the leverage scores of
``W^{1/2} B^T``; the output is the running average of the iterates. The exact
weights satisfy ``tau_l(W^{1/2} B^T) = w_l`` for every edge, so the relative
violation of that equation serves as the convergence certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .laplacian import DENSE_THRESHOLD, LaplacianSystem

WEIGHT_FLOOR = 1e-15


class LewisNonConvergence(RuntimeError):
    def __init__(self, result: "LewisResult"):
        self.result = result
        super().__init__(
            f"Lewis iteration stopped after {result.iterations} iterations with "
            f"residual {result.residual:.3g} > eps={result.eps:g}"
        )


@dataclass
class LewisResult:
    w_inf: np.ndarray
    g_lw: np.ndarray
    iterations: int
    residual: float
    eps: float
    converged: bool
    floor_hits: int = 0

    def to_dict(self) -> dict:
        return {
            "w_inf": self.w_inf.tolist(),
            "g_lw": self.g_lw.tolist(),
            "iterations": self.iterations,
            "residual": self.residual,
            "eps": self.eps,
            "converged": self.converged,
            "floor_hits": self.floor_hits,
        }


def iteration_budget(G: Graph, eps: float, C: float = 4.0) -> int:
    """``ceil(C / eps * log(max(m/n, 2)))``."""
    return max(1, math.ceil(C / eps * math.log(max(G.m / G.n, 2.0))))


def fixed_point_residual(G: Graph, w, dense_threshold: int = DENSE_THRESHOLD) -> float:
    """``max_l |tau_l(W^{1/2} B^T) / w_l - 1|`` for positive ``w``."""
    w = np.asarray(w, dtype=float)
    if np.any(w <= 0):
        raise ValueError("fixed-point residual needs strictly positive weights")
    tau = LaplacianSystem(G, w, dense_threshold=dense_threshold).leverage_scores()
    return float(np.max(np.abs(tau / w - 1.0)))


def lewis_weights(
    G: Graph,
    eps: float = 0.01,
    C: float = 4.0,
    max_iters: int | None = None,
    dense_threshold: int = DENSE_THRESHOLD,
    strict: bool = False,
) -> LewisResult:
    """Approximate l_inf-Lewis weights of ``B^T`` to fixed-point accuracy ``eps``.

    The residual of the running average is checked on a geometric schedule and
    the iteration stops as soon as it is at most ``eps``. With ``strict`` a
    non-converged run raises :class:`LewisNonConvergence`; otherwise the partial
    result is returned with ``converged=False``.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    n, m = G.n, G.m
    T = max_iters if max_iters is not None else iteration_budget(G, eps, C)

    w = np.full(m, (n - 1) / m)
    total = np.zeros(m)
    floor_hits = 0
    residual = math.inf
    next_check = 1
    t = 0
    while t < T:
        t += 1
        total += w
        avg = total / t
        tau = None
        if t >= next_check or t == T:
            S = LaplacianSystem(G, avg, dense_threshold=dense_threshold)
            residual = float(np.max(np.abs(S.leverage_scores() / avg - 1.0)))
            if residual <= eps:
                break
            next_check = max(t + 1, math.ceil(1.25 * t))
            if t == T:
                break
        # next iterate: leverage scores at the current iterate
        S = LaplacianSystem(G, w, dense_threshold=dense_threshold)
        tau = S.leverage_scores()
        low = tau < WEIGHT_FLOOR
        floor_hits += int(low.sum())
        w = np.where(low, WEIGHT_FLOOR, tau)

    w_inf = total / t
    result = LewisResult(
        w_inf=w_inf,
        g_lw=w_inf / (n - 1),
        iterations=t,
        residual=residual,
        eps=eps,
        converged=residual <= eps,
        floor_hits=floor_hits,
    )
    if strict and not result.converged:
        raise LewisNonConvergence(result)
    return result
