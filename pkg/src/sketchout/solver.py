"""Convex separation of a matrix into low-rank plus column-sparse parts.

``outlier_pursuit`` solves

    min ||L||_* + lambda ||C||_{1,2}   s.t.  Y = L + C

by an augmented-Lagrangian alternating scheme: L-update by singular value
thresholding, C-update by columnwise group shrinkage, dual ascent on the
constraint.  The penalty starts at 1.25 / ||Y|| (operator norm) and is
multiplied by 1.6 whenever the primal residual stalls.  ``rmc_solve`` is
the masked variant with the equality enforced only on observed entries,
leaving the unobserved entries of L + C free.

``subspace_basis`` extracts an orthonormal basis of the recovered column
space, optionally truncated to the smallest leading set of singular values
holding a given fraction of the nuclear energy.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .prox import group_shrink, svt


class SolverDivergenceError(RuntimeError):
    """Raised when the primal residual grows for too many iterations."""


@dataclass
class SolverOptions:
    tol_residual: float = 1e-7
    tol_change: float = 1e-6
    max_iters: int = 500
    rho_scale: float = 1.25
    rho_growth: float = 1.6
    stall_gate: float = 0.99
    diverge_patience: int = 10


@dataclass
class OpSolution:
    """Recovered pair (L, C) with convergence diagnostics.

    ``residual`` is the relative constraint violation ||Y - L - C||_F /
    ||Y||_F (restricted to observed entries for the masked variant).
    """

    low_rank: np.ndarray = field(repr=False)
    column_sparse: np.ndarray = field(repr=False)
    residual: float
    iterations: int
    converged: bool
    degenerate: bool = False


def default_lambda(k_ub: int) -> float:
    """Column-sparsity weight 3 / (7 sqrt(k_ub)) for an outlier-count upper
    bound k_ub."""
    if k_ub < 1:
        raise ValueError("outlier upper bound must be at least 1")
    return 3.0 / (7.0 * math.sqrt(k_ub))


def _split_iterations(Y, lam, opts, mask=None):
    """Shared splitting loop; with a mask, unobserved entries are free."""
    normY = np.linalg.norm(Y, "fro")
    rho = opts.rho_scale / np.linalg.norm(Y, 2)
    L = np.zeros_like(Y)
    C = np.zeros_like(Y)
    E = np.zeros_like(Y)
    Lam = np.zeros_like(Y)
    res_prev = np.inf
    bad = 0
    for it in range(1, opts.max_iters + 1):
        L_new = svt(Y - C - E + Lam / rho, 1.0 / rho)
        C_new = group_shrink(Y - L_new - E + Lam / rho, lam / rho)
        if mask is not None:
            E = np.where(mask, 0.0, Y - L_new - C_new + Lam / rho)
        R = Y - L_new - C_new - E
        res = np.linalg.norm(R, "fro") / normY
        change = (
            np.linalg.norm(L_new - L, "fro") + np.linalg.norm(C_new - C, "fro")
        ) / max(1.0, normY)
        L, C = L_new, C_new
        Lam = Lam + rho * R
        bad = bad + 1 if res > res_prev else 0
        if bad >= opts.diverge_patience:
            raise SolverDivergenceError(
                "residual increased for %d consecutive iterations" % bad
            )
        if res > opts.stall_gate * res_prev:
            rho *= opts.rho_growth
        res_prev = res
        if res <= opts.tol_residual and change <= opts.tol_change:
            return L, C, res, it, True
    return L, C, res, opts.max_iters, False


def outlier_pursuit(Y: np.ndarray, lam: float, opts: SolverOptions | None = None) -> OpSolution:
    """Separate Y into low-rank and column-sparse parts under an exact
    decomposition constraint."""
    Y = np.asarray(Y, dtype=float)
    if not np.all(np.isfinite(Y)):
        raise ValueError("input matrix must be finite")
    if lam <= 0:
        raise ValueError("lambda must be positive")
    opts = opts or SolverOptions()
    if not Y.any():
        return OpSolution(np.zeros_like(Y), np.zeros_like(Y), 0.0, 0, True)
    L, C, res, it, conv = _split_iterations(Y, lam, opts)
    return OpSolution(L, C, res, it, conv)


def rmc_solve(
    Y_obs: np.ndarray,
    mask: np.ndarray,
    lam: float,
    opts: SolverOptions | None = None,
) -> OpSolution:
    """Masked variant: enforce Y = L + C only on entries where mask is
    true.  With fewer observed entries than n1 + n2 - 1 the solution is
    not unique and the result is flagged degenerate (converged stays
    false; the residual certificate is still reported)."""
    mask = np.asarray(mask, dtype=bool)
    Y_obs = np.asarray(Y_obs, dtype=float)
    if mask.shape != Y_obs.shape:
        raise ValueError("mask shape must match the data")
    if not mask.any():
        raise ValueError("mask must observe at least one entry")
    if not np.all(np.isfinite(Y_obs[mask])):
        raise ValueError("observed entries must be finite")
    opts = opts or SolverOptions()
    Y = np.where(mask, Y_obs, 0.0)
    degenerate = int(mask.sum()) < sum(Y.shape) - 1
    if not Y.any():
        return OpSolution(np.zeros_like(Y), np.zeros_like(Y), 0.0, 0, not degenerate, degenerate)
    if mask.all():
        # fully observed: identical iteration to the unmasked solver
        L, C, res, it, conv = _split_iterations(Y, lam, opts)
        return OpSolution(L, C, res, it, conv)
    L, C, res, it, conv = _split_iterations(Y, lam, opts, mask=mask)
    if degenerate:
        conv = False
    return OpSolution(L, C, res, it, conv, degenerate)


@dataclass
class SubspaceBasis:
    """Orthonormal basis of a recovered column space."""

    basis: np.ndarray = field(repr=False)
    dim: int
    energy_kept: float

    def project_out(self, X: np.ndarray) -> np.ndarray:
        """Residual after removing the component inside the subspace."""
        if self.dim == 0:
            return np.array(X, copy=True)
        return X - self.basis @ (self.basis.T @ X)


def subspace_basis(sol, energy: float = 1.0) -> SubspaceBasis:
    """Basis of the span of the low-rank estimate.

    With energy = 1 every singular value above the numerical-rank cutoff
    max(m, n) * eps * sigma_1 is kept; otherwise the smallest number d of
    leading singular values with sigma_1 + ... + sigma_d >= energy * total
    is kept.
    """
    if not 0.0 < energy <= 1.0:
        raise ValueError("energy must lie in (0, 1]")
    X = sol.low_rank if hasattr(sol, "low_rank") else np.asarray(sol, dtype=float)
    U, s, _ = np.linalg.svd(X, full_matrices=False)
    total = float(s.sum())
    if total == 0.0:
        warnings.warn("zero matrix has an empty column space", RuntimeWarning)
        return SubspaceBasis(U[:, :0], 0, 1.0)
    if energy >= 1.0:
        cutoff = max(X.shape) * np.finfo(float).eps * s[0]
        d = int(np.sum(s > cutoff))
    else:
        cum = np.cumsum(s)
        d = int(np.searchsorted(cum, energy * total - 1e-15 * total) + 1)
    d = max(d, 1)
    kept = float(np.sum(s[:d])) / total
    return SubspaceBasis(U[:, :d], d, kept)


def residual_operator(basis: SubspaceBasis):
    """Linear map v -> v - B (B^T v), applied columnwise to matrices."""
    return basis.project_out
