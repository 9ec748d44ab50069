"""Weighted Laplacians and their pseudo-inverse.

Every solve goes through the shifted matrix ``M = L_g + (1/n) 11^T``, which is
positive definite on a connected support and satisfies ``M^{-1} z = L_g^+ z``
for ``z`` orthogonal to the all-ones vector. Two back ends share one interface:
a dense Cholesky factorization (``n <= dense_threshold``) and Jacobi-
preconditioned conjugate gradients above it.
"""

from __future__ import annotations

import warnings
from functools import cached_property

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.sparse.csgraph import connected_components

from .graph import Graph

DENSE_THRESHOLD = 2000


class SolverError(RuntimeError):
    """A Laplacian solve failed (singular system or non-convergence)."""


class DisconnectedSupportError(SolverError):
    def __init__(self, components: list[np.ndarray]):
        self.components = components
        sizes = ", ".join(str(len(c)) for c in components[:8])
        super().__init__(
            f"support of the weights is disconnected: {len(components)} components (sizes {sizes})"
        )


def _as_weights(G: Graph, g) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if g.shape != (G.m,):
        raise ValueError(f"expected {G.m} weights, got shape {g.shape}")
    if np.any(g < 0) or not np.all(np.isfinite(g)):
        raise ValueError("weights must be finite and nonnegative")
    return g


def laplacian_matrix(G: Graph, g) -> sp.csr_matrix:
    """Sparse ``B diag(g) B^T``."""
    B = G.incidence
    return (B @ sp.diags(np.asarray(g, dtype=float)) @ B.T).tocsr()


class LaplacianSystem:
    """Factorized ``L_g + (1/n) 11^T`` for one graph and weight vector.

    Treat as immutable after construction; lazily computed quantities are cached.
    """

    def __init__(
        self,
        G: Graph,
        g,
        dense_threshold: int = DENSE_THRESHOLD,
        rtol: float = 1e-12,
        maxiter: int | None = None,
    ):
        self.graph = G
        self.g = _as_weights(G, g)
        self.g.setflags(write=False)
        self.n = G.n
        self.backend = "dense" if G.n <= dense_threshold else "iterative"
        self.rtol = rtol
        self.maxiter = maxiter if maxiter is not None else 20 * G.n + 100
        self._check_support()
        self.L = laplacian_matrix(G, self.g)
        if self.backend == "dense":
            M = self.L.toarray() + 1.0 / self.n
            try:
                self._chol = sla.cho_factor(M, lower=True, check_finite=False)
            except sla.LinAlgError as exc:
                raise SolverError(f"Cholesky failed: {exc}") from exc
        else:
            self._diag = self.L.diagonal() + 1.0 / self.n

    def _check_support(self):
        G = self.graph
        if G.n == 1:
            return
        support = self.g > 0
        e = G.edges[support]
        a = sp.csr_matrix(
            (np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(G.n, G.n)
        )
        k, comp = connected_components(a, directed=False)
        if k > 1:
            raise DisconnectedSupportError([np.flatnonzero(comp == c) for c in range(k)])

    # -- solves ---------------------------------------------------------------

    def _matvec(self, x):
        return self.L @ x + x.sum(axis=0) / self.n

    def _cg(self, z: np.ndarray) -> np.ndarray:
        op = spla.LinearOperator((self.n, self.n), matvec=self._matvec, dtype=float)
        pre = spla.LinearOperator((self.n, self.n), matvec=lambda x: x / self._diag, dtype=float)
        x, info = spla.cg(op, z, rtol=self.rtol, atol=0.0, maxiter=self.maxiter, M=pre)
        if info != 0:
            raise SolverError(f"conjugate gradients did not converge in {self.maxiter} iterations")
        return x

    def solve_shifted(self, Z: np.ndarray) -> np.ndarray:
        """``M^{-1} Z`` for a vector or a column block."""
        Z = np.asarray(Z, dtype=float)
        if self.backend == "dense":
            return sla.cho_solve(self._chol, Z, check_finite=False)
        if Z.ndim == 1:
            return self._cg(Z)
        return np.column_stack([self._cg(Z[:, j]) for j in range(Z.shape[1])])

    def pinv_apply(self, z) -> np.ndarray:
        """``L_g^+ z``; the mean of ``z`` is projected out first."""
        z = np.asarray(z, dtype=float)
        mean = z.mean(axis=0)
        scale = np.linalg.norm(z, axis=0)
        if np.any(np.abs(mean) > 1e-9 * np.maximum(scale, 1e-300)):
            warnings.warn("right-hand side not orthogonal to 1; projecting out its mean", stacklevel=2)
        z = z - mean
        x = self.solve_shifted(z)
        return x - x.mean(axis=0)

    # -- dense inverse and derived quantities -----------------------------------

    @cached_property
    def shifted_inverse(self) -> np.ndarray:
        """Dense ``M^{-1} = L^+ + (1/n) 11^T`` (dense back end, or small iterative systems)."""
        if self.backend == "dense":
            I = np.eye(self.n)
            Minv = sla.cho_solve(self._chol, I, check_finite=False)
            return (Minv + Minv.T) / 2
        return self.solve_shifted(np.eye(self.n))

    @cached_property
    def pinv(self) -> np.ndarray:
        """Dense ``L_g^+``."""
        return self.shifted_inverse - 1.0 / self.n

    @cached_property
    def edge_resistances(self) -> np.ndarray:
        """``R_l = b_l^T L_g^+ b_l`` for every edge."""
        u, v = self.graph.edges[:, 0], self.graph.edges[:, 1]
        if self.backend == "dense":
            P = self.shifted_inverse
            r = P[u, u] + P[v, v] - 2 * P[u, v]
        else:
            r = np.empty(self.graph.m)
            for l in range(self.graph.m):
                z = np.zeros(self.n)
                z[u[l]], z[v[l]] = 1.0, -1.0
                x = self.solve_shifted(z)
                r[l] = x[u[l]] - x[v[l]]
        r.setflags(write=False)
        return r

    @cached_property
    def pinv_b_norms_sq(self) -> np.ndarray:
        """``||L_g^+ b_l||^2`` for every edge."""
        u, v = self.graph.edges[:, 0], self.graph.edges[:, 1]
        if self.backend == "dense":
            P = self.pinv
            Q = P @ P
            out = Q[u, u] + Q[v, v] - 2 * Q[u, v]
        else:
            out = np.empty(self.graph.m)
            for l in range(self.graph.m):
                z = np.zeros(self.n)
                z[u[l]], z[v[l]] = 1.0, -1.0
                x = self.pinv_apply(z)
                out[l] = x @ x
        out.setflags(write=False)
        return out

    def leverage_scores(self) -> np.ndarray:
        return self.g * self.edge_resistances

    @cached_property
    def trace_pinv(self) -> float:
        """``Tr L_g^+ = Tr M^{-1} - 1``."""
        if self.backend == "dense":
            # Tr M^{-1} = ||C^{-1}||_F^2 with M = C C^T
            Cinv = sla.solve_triangular(self._chol[0], np.eye(self.n), lower=True, check_finite=False)
            return float(np.sum(Cinv * Cinv) - 1.0)
        total = 0.0
        for i in range(self.n):
            e = np.zeros(self.n)
            e[i] = 1.0
            total += self.solve_shifted(e)[i]
        return float(total - 1.0)

    @cached_property
    def logdet_pinv(self) -> float:
        """``log det(L_g^+ + (1/n) 11^T) = -log det M``."""
        if self.backend == "dense":
            return float(-2.0 * np.sum(np.log(np.diag(self._chol[0]))))
        # det M = n * det(L with row/column 0 removed) by the matrix-tree theorem
        red = self.L[1:, 1:].tocsc()
        lu = spla.splu(red)
        logdet_red = np.sum(np.log(np.abs(lu.U.diagonal())))
        return float(-(np.log(self.n) + logdet_red))

    def eig_extremes(self) -> tuple[float, float]:
        """``(lambda_2, lambda_n)`` of ``L_g``."""
        if self.n == 2:
            lam = 2.0 * float(self.g.sum())
            return lam, lam
        if self.backend == "dense" or self.n < 50:
            lam = np.linalg.eigvalsh(self.L.toarray())
            return float(lam[1]), float(lam[-1])
        n = self.n
        Lop = spla.LinearOperator((n, n), matvec=lambda x: self.L @ x, dtype=float)
        lam_n = spla.eigsh(Lop, k=1, which="LA", tol=1e-12, return_eigenvectors=False)[0]

        def inv_deflated(x):
            return self.pinv_apply(x - x.mean())

        Pop = spla.LinearOperator((n, n), matvec=inv_deflated, dtype=float)
        mu = spla.eigsh(Pop, k=1, which="LA", tol=1e-12, return_eigenvectors=False)[0]
        return float(1.0 / mu), float(lam_n)


def assemble(G: Graph, g, dense_threshold: int = DENSE_THRESHOLD) -> LaplacianSystem:
    return LaplacianSystem(G, g, dense_threshold=dense_threshold)


def pinv_apply(S: LaplacianSystem, z) -> np.ndarray:
    return S.pinv_apply(z)


def leverage_scores(G: Graph, g, dense_threshold: int = DENSE_THRESHOLD) -> np.ndarray:
    """``tau_l = g_l b_l^T L_g^+ b_l``; these sum to n - 1."""
    return LaplacianSystem(G, g, dense_threshold=dense_threshold).leverage_scores()


def trace_pinv(S: LaplacianSystem) -> float:
    return S.trace_pinv


def logdet_pinv(S: LaplacianSystem) -> float:
    return S.logdet_pinv


def eig_extremes(S: LaplacianSystem) -> tuple[float, float]:
    return S.eig_extremes()


def uniform_weights(G: Graph) -> np.ndarray:
    return np.full(G.m, 1.0 / G.m)
