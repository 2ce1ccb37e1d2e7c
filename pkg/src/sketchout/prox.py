"""Proximal operators and the accelerated LASSO solver.

The three proximal maps (elementwise soft threshold for the l1 norm,
singular value thresholding for the nuclear norm, columnwise group
shrinkage for the sum of column l2 norms) are the building blocks of the
splitting solvers.  ``lasso_solve`` is a FISTA iteration with
function-value restart and step size 1/L, L estimated by power iteration;
``lasso_path_solve`` runs the same iteration simultaneously for a whole
path of regularization weights sharing one design matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def soft_threshold(v: np.ndarray, tau: float) -> np.ndarray:
    """sign(v) * max(|v| - tau, 0), elementwise."""
    if tau < 0:
        raise ValueError("threshold must be nonnegative")
    return np.sign(v) * np.maximum(np.abs(v) - tau, 0.0)


def svt(X: np.ndarray, tau: float) -> np.ndarray:
    """Shrink the singular values of X by tau (prox of tau * nuclear norm)."""
    if tau < 0:
        raise ValueError("threshold must be nonnegative")
    U, s, Vt = np.linalg.svd(X, full_matrices=False)
    s = np.maximum(s - tau, 0.0)
    keep = s > 0
    return (U[:, keep] * s[keep]) @ Vt[keep]


def group_shrink(X: np.ndarray, tau: float) -> np.ndarray:
    """Shrink each column toward zero by tau in l2 norm (prox of tau * sum
    of column norms).  Columns with norm at most tau map to exactly zero."""
    if tau < 0:
        raise ValueError("threshold must be nonnegative")
    norms = np.linalg.norm(X, axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        factor = np.where(norms > 0, np.maximum(1.0 - tau / norms, 0.0), 0.0)
    return X * factor


@dataclass
class LassoProblem:
    """min_c  1/2 ||y - D c||^2 + reg ||c||_1 with design D (p x n)."""

    design: np.ndarray
    observation: np.ndarray
    reg: float
    max_iters: int = 2000
    tol: float = 1e-8

    def __post_init__(self) -> None:
        self.design = np.asarray(self.design, dtype=float)
        self.observation = np.asarray(self.observation, dtype=float).ravel()
        if self.design.ndim != 2:
            raise ValueError("design must be a matrix")
        if self.observation.size != self.design.shape[0]:
            raise ValueError("observation length must match design rows")
        if self.reg <= 0:
            raise ValueError("regularization weight must be positive")


@dataclass
class LassoDiagnostics:
    iterations: int
    objective: float
    converged: bool


def _largest_sq_singular_value(D: np.ndarray, iters: int = 50, tol: float = 1e-8) -> float:
    """Largest squared singular value of D by power iteration on D^T D."""
    n = D.shape[1]
    v = np.ones(n) / np.sqrt(n)
    lam = 0.0
    for _ in range(iters):
        w = D.T @ (D @ v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            raise ValueError("step-size estimation failed: zero design")
        v_new = w / nw
        lam_new = float(v_new @ (D.T @ (D @ v_new)))
        if abs(lam_new - lam) <= tol * max(1.0, lam_new):
            return lam_new
        v, lam = v_new, lam_new
    return lam


def _fista(D: np.ndarray, y: np.ndarray, regs: np.ndarray, max_iters: int, tol: float):
    """Shared FISTA loop; one coefficient column per regularization weight."""
    p, n = D.shape
    nreg = regs.size
    L = _largest_sq_singular_value(D) * (1.0 + 1e-6)  # power iteration converges from below
    step = 1.0 / L
    tau = regs * step
    C = np.zeros((n, nreg))
    Z = C.copy()
    t = np.ones(nreg)
    Dty = D.T @ y
    obj_prev = np.full(nreg, 0.5 * float(y @ y))
    for it in range(1, max_iters + 1):
        G = D.T @ (D @ Z) - Dty[:, None]
        C_new = Z - step * G
        C_new = np.sign(C_new) * np.maximum(np.abs(C_new) - tau, 0.0)
        R = D @ C_new - y[:, None]
        obj = 0.5 * np.sum(R * R, axis=0) + regs * np.sum(np.abs(C_new), axis=0)
        if not np.all(np.isfinite(obj)):
            raise FloatingPointError("non-finite objective in LASSO iteration")
        restart = obj > obj_prev
        t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        mom = (t - 1.0) / t_new
        mom[restart] = 0.0
        t_new[restart] = 1.0
        Z = C_new + mom * (C_new - C)
        done = np.abs(obj - obj_prev) <= tol * np.maximum(1.0, np.abs(obj_prev))
        C, t, obj_prev = C_new, t_new, obj
        if it > 1 and np.all(done):
            return C, obj, it, True
    return C, obj_prev, max_iters, False


def lasso_solve(prob: LassoProblem) -> tuple[np.ndarray, LassoDiagnostics]:
    """Approximate minimizer of the LASSO objective.

    Terminates when the relative objective change falls below ``tol`` or
    after ``max_iters`` iterations.
    """
    C, obj, it, conv = _fista(
        prob.design, prob.observation, np.array([prob.reg]), prob.max_iters, prob.tol
    )
    return C[:, 0], LassoDiagnostics(it, float(obj[0]), conv)


def lasso_path_solve(
    design: np.ndarray,
    observation: np.ndarray,
    regs,
    max_iters: int = 2000,
    tol: float = 1e-8,
) -> tuple[np.ndarray, int]:
    """Solve the LASSO for every weight in ``regs`` over a shared design.

    Returns the (n x len(regs)) coefficient matrix and the iteration count.
    Equivalent to len(regs) calls of lasso_solve but batched into matrix
    products; the iteration stops once every column has converged.
    """
    regs = np.asarray(regs, dtype=float)
    if np.any(regs <= 0):
        raise ValueError("regularization weights must be positive")
    y = np.asarray(observation, dtype=float).ravel()
    C, _, it, _ = _fista(np.asarray(design, dtype=float), y, regs, max_iters, tol)
    return C, it
