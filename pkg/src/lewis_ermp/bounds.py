"""Approximation-ratio certificates at Lewis weights and related spectral diagnostics.

Given weights ``g`` on the simplex, two upper bounds on ``K(g) / K*`` are
computable without knowing the optimum:

* ``alpha1 = 2 / (n-1)^2 * Tr L_g^+`` (AM-GM over the Laplacian spectrum), and
* ``alpha2 = max_l ||L_g^+ b_l||^2 / Tr L_g^+`` (from a scaled dual-feasible point).

At Lewis weights ``alpha1 <= diameter`` and ``alpha2 <= kappa(L_g)``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .graph import Graph, diameter
from .laplacian import DENSE_THRESHOLD, LaplacianSystem
from .lewis import LewisNonConvergence, lewis_weights
from .resistance import pair_resistances, resistance_matrix

SCHEMA_VERSION = 1


class BoundsInvariantError(AssertionError):
    pass


def alpha1(S: LaplacianSystem) -> float:
    return 2.0 / (S.n - 1) ** 2 * S.trace_pinv


def alpha2(S: LaplacianSystem) -> float:
    return float(np.max(S.pinv_b_norms_sq) / S.trace_pinv)


def alpha2_gradient_identity(
    S: LaplacianSystem, h: float = 1e-5, rtol: float = 1e-3, check: bool = True
) -> dict:
    """Compare ``alpha2`` with ``||-grad log alpha1||_inf`` by central differences.

    Coordinates with ``g_l < 10 h`` are skipped and listed in the report.
    """
    G, g = S.graph, S.g
    fd = np.full(G.m, np.nan)
    skipped = []
    for l in range(G.m):
        if g[l] < 10 * h:
            skipped.append(l)
            continue
        gp, gm = g.copy(), g.copy()
        gp[l] += h
        gm[l] -= h
        fp = np.log(alpha1(LaplacianSystem(G, gp)))
        fm = np.log(alpha1(LaplacianSystem(G, gm)))
        fd[l] = -(fp - fm) / (2 * h)
    fd_norm = float(np.nanmax(np.abs(fd)))
    analytic = alpha2(S)
    rel = abs(fd_norm - analytic) / analytic
    report = {
        "alpha2": analytic,
        "fd_norm": fd_norm,
        "rel_err": rel,
        "skipped": skipped,
        "ok": rel <= rtol,
    }
    if check and not report["ok"]:
        raise BoundsInvariantError(f"alpha2={analytic} but ||-grad log alpha1||_inf={fd_norm}")
    return report


def max_pairwise_resistance(S: LaplacianSystem, exact_limit: int = 500, samples: int = 2000, seed=0):
    """Largest pairwise resistance; returns ``(value, exact)``.

    Above ``exact_limit`` vertices the value is a lower estimate from random
    pairs plus the end points of BFS double sweeps.
    """
    if S.n <= exact_limit:
        return float(resistance_matrix(S).max()), True
    from .graph import _bfs_dist

    G = S.graph
    rng = np.random.default_rng(seed)
    pairs = [tuple(rng.choice(G.n, size=2, replace=False)) for _ in range(samples)]
    for start in rng.choice(G.n, size=min(8, G.n), replace=False):
        a = int(np.argmax(_bfs_dist(G, int(start))))
        b = int(np.argmax(_bfs_dist(G, a)))
        if a != b:
            pairs.append((a, b))
    return float(pair_resistances(S, pairs).max()), False


def mohar_bounds(S: LaplacianSystem, exact_limit: int = 500, seed=0, D: int | None = None) -> dict:
    """Weighted lower bounds on the algebraic connectivity ``lambda_2(L_g)``."""
    n = S.n
    rmax_pair, exact = max_pairwise_resistance(S, exact_limit=exact_limit, seed=seed)
    R = S.edge_resistances
    D = diameter(S.graph) if D is None else D
    lam2, _ = S.eig_extremes()
    return {
        "bound_pairwise": 2.0 / (n * rmax_pair),
        "bound_diam": 2.0 / (n * D * float(R.max())),
        "bound_sum": 4.0 / (n * float(R.sum())),
        "lambda2": lam2,
        "r_max_pairwise": rmax_pair,
        "r_max_edge": float(R.max()),
        "pairwise_exact": exact,
    }


def sev_diagnostics(S: LaplacianSystem, max_n: int = 400) -> dict:
    """Value, gradient and optimality residuals of ``f(g) = Tr exp(L_g^+)``.

    ``lw_vs_uniform`` is ``Tr[e^{L^+} L^+ (I - L_uni L^+)]`` for the system's
    weights; it is nonnegative iff the first-order condition certifies
    ``f(g) <= f(g_uni)``.
    """
    if S.n > max_n:
        raise ValueError(f"SEV diagnostics need a dense eigendecomposition; n={S.n} > {max_n}")
    mu, V = np.linalg.eigh(S.pinv)
    e = np.exp(mu)
    # b^T L^+ e^{L^+} L^+ b as a squared norm, which avoids cancellation when e^mu is huge
    Y = (V.T @ S.graph.incidence.toarray()) * (mu * np.exp(mu / 2))[:, None]
    quad = np.einsum("ij,ij->j", Y, Y)
    tr_e_pinv = float(np.sum(mu * e))
    return {
        "value": float(e.sum()),
        "gradient": -quad,
        "optimality_residuals": tr_e_pinv - quad,
        "lw_vs_uniform": tr_e_pinv - float(quad.mean()),
        "trace_exp_pinv_times_pinv": tr_e_pinv,
    }


@dataclass
class BoundsReport:
    alpha1: float
    alpha2: float
    alpha_min: float
    diameter: int
    kappa: float
    mohar: dict
    n: int
    m: int
    graph: str = ""
    eps: float = 0.01
    lewis_iterations: int = 0
    lewis_residual: float = 0.0
    lewis_converged: bool = True
    lambda2: float = 0.0
    lambda_n: float = 0.0
    checks: dict = field(default_factory=dict)
    schema: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "BoundsReport":
        return cls(**d)


def bounds_report(
    G: Graph,
    eps: float = 0.01,
    C: float = 4.0,
    dense_threshold: int = DENSE_THRESHOLD,
    strict: bool = True,
    mohar_exact_limit: int = 500,
) -> BoundsReport:
    """Lewis weights, both ratio bounds and the comparison quantities for one graph.

    With ``strict`` a Lewis run that misses ``eps`` raises
    :class:`LewisNonConvergence`, and a violated invariant raises
    :class:`BoundsInvariantError`; otherwise both are recorded in ``checks``.
    """
    lw = lewis_weights(G, eps=eps, C=C, dense_threshold=dense_threshold)
    if strict and not lw.converged:
        raise LewisNonConvergence(lw)
    S = LaplacianSystem(G, lw.g_lw, dense_threshold=dense_threshold)
    a1, a2 = alpha1(S), alpha2(S)
    D = diameter(G)
    lam2, lamn = S.eig_extremes()
    kappa = lamn / lam2
    mohar = mohar_bounds(S, exact_limit=mohar_exact_limit, D=D)
    mohar.pop("lambda2")
    checks = {
        "alpha1_ge_1": a1 >= 1 - 1e-9,
        "alpha1_le_diameter": a1 <= D * (1 + 5 * eps),
        "alpha2_le_kappa": a2 <= kappa * (1 + 1e-6),
        "mohar_le_lambda2": all(
            mohar[k] <= lam2 + 1e-8 for k in ("bound_pairwise", "bound_diam", "bound_sum")
        )
        or not mohar["pairwise_exact"],
    }
    report = BoundsReport(
        alpha1=a1,
        alpha2=a2,
        alpha_min=min(a1, a2),
        diameter=D,
        kappa=kappa,
        mohar=mohar,
        n=G.n,
        m=G.m,
        graph=G.name,
        eps=eps,
        lewis_iterations=lw.iterations,
        lewis_residual=lw.residual,
        lewis_converged=lw.converged,
        lambda2=lam2,
        lambda_n=lamn,
        checks=checks,
    )
    if strict and not all(checks.values()):
        bad = [k for k, ok in checks.items() if not ok]
        raise BoundsInvariantError(f"violated: {', '.join(bad)}")
    return report
