"""End-to-end outlier-column identification pipelines.

``acos`` is the two-step adaptive procedure: learn the sketched low-rank
column space from a random column subsample, then recover outlier
locations by l1 decoding of a doubly compressed residual (one probe row
against the subspace complement, one dense compression across columns).
``sacos`` skips the second compression and scores every sketched column by
its residual norm orthogonal to the learned subspace.  ``sacos_missing``
is the missing-data variant: the sketch becomes a row subsample, the
separation step a masked solve, and each column is scored on its observed
entries only.

All access to the data matrix goes through :class:`MatrixSource`, which
exposes only operator applications and counts every scalar measurement
taken, so the adaptivity boundary is auditable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .rng import derive_seed
from .sketching import (
    make_column_sampler,
    make_gaussian_sketch,
    make_probe_vector,
    make_row_subsampler,
)
from .prox import lasso_path_solve
from .solver import SolverOptions, default_lambda, outlier_pursuit, rmc_solve, subspace_basis

GAP_RULE = "nonzero-with-gap"
THRESHOLD_RULE = "fixed-threshold"

#: Minimum multiplicative separation for the gap rule to declare anything.
GAP_RATIO = 10.0

#: Lower end of the regularization path, as a fraction of the null
#: threshold ||D^T y||_inf.  Wide enough to cover the dynamic range the
#: random probe induces on the outlier coefficients.
MU_PATH_LO = 1e-5


class PipelineError(RuntimeError):
    """Degenerate sampling or other unrecoverable pipeline failure."""


@dataclass(frozen=True)
class AcosConfig:
    """Sampling and decoding parameters for one pipeline run.

    ``m`` is the number of sketch rows, ``p`` the compression size of the
    decoding step (ignored by sacos), ``gamma`` the column-sampling rate.
    ``lam`` overrides the separation weight; if None it defaults to
    3/(7 sqrt(k_ub)), with k_ub falling back to a tenth of the columns.
    ``energy`` in (0, 1] optionally truncates the learned basis to that
    fraction of nuclear energy.
    """

    gamma: float
    m: int
    p: int = 0
    lam: float | None = None
    k_ub: int | None = None
    lasso_path: int = 10
    energy: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError("gamma must lie in (0, 1]")
        if self.m < 1:
            raise ValueError("m must be at least 1")
        if self.lam is not None and self.lam <= 0:
            raise ValueError("lambda must be positive")
        if self.lasso_path < 1:
            raise ValueError("need at least one regularization value")
        if not 0.0 < self.energy <= 1.0:
            raise ValueError("energy must lie in (0, 1]")


@dataclass
class SupportEstimate:
    """Per-column outlier scores and the declared index set.

    ``score_path`` holds the full per-regularization score vectors when the
    decoding step ran a path (acos); ``column_flags`` marks columns whose
    score is a placeholder (missing-data variant).
    """

    scores: np.ndarray = field(repr=False)
    declared: np.ndarray
    rule: str
    mu_used: float | None = None
    score_path: np.ndarray | None = field(default=None, repr=False)
    column_flags: dict[str, np.ndarray] | None = None


class MatrixSource:
    """Column-access provider around the data matrix.

    The pipelines read the data only through these methods; ``measurements``
    counts every scalar collected.
    """

    def __init__(self, M: np.ndarray):
        self._M = np.asarray(M, dtype=float)
        if self._M.ndim != 2 or self._M.shape[1] < 1:
            raise ValueError("data must be a matrix with at least one column")
        self.measurements = 0

    @property
    def shape(self) -> tuple[int, int]:
        return self._M.shape

    def sketch_columns(self, op: np.ndarray, idx: np.ndarray) -> np.ndarray:
        """Phi M[:, idx]; counts rows(Phi) * |idx| scalars."""
        out = op @ self._M[:, idx]
        self.measurements += out.size
        return out

    def sketch(self, op: np.ndarray) -> np.ndarray:
        """Phi M; counts rows(Phi) * n2 scalars."""
        out = op @ self._M
        self.measurements += out.size
        return out

    def row_sketch(self, w: np.ndarray, right: np.ndarray) -> np.ndarray:
        """(w M) right^T for a single row vector w; counts rows(right)."""
        out = (w @ self._M) @ right.T
        self.measurements += out.size
        return out


def _as_source(M) -> MatrixSource:
    return M if isinstance(M, MatrixSource) else MatrixSource(M)


def _resolve_lambda(cfg: AcosConfig, n2: int) -> float:
    if cfg.lam is not None:
        return cfg.lam
    k_ub = cfg.k_ub if cfg.k_ub is not None else max(1, math.ceil(0.1 * n2))
    return default_lambda(k_ub)


def _sample_columns(n2: int, cfg: AcosConfig):
    """Bernoulli column sample; one retry with a fresh seed before failing."""
    sampler = make_column_sampler(n2, cfg.gamma, derive_seed(cfg.seed, 1))
    if sampler.indices.size == 0:
        sampler = make_column_sampler(n2, cfg.gamma, derive_seed(cfg.seed, 1, 1))
    if sampler.indices.size == 0:
        raise PipelineError("column sample empty after retry")
    return sampler


def _gap_cut(scores: np.ndarray) -> tuple[float, int]:
    """Separation quality of a score vector: (gap ratio, declared count).

    The cut is placed at the largest multiplicative gap between consecutive
    positive scores in sorted order.  When exact zeros are present and no
    positive-internal gap exceeds GAP_RATIO, the positive/zero boundary is
    the cut and the ratio is infinite (a cleanly thresholded solution).
    """
    s = np.sort(scores)[::-1]
    pos = s[s > 0]
    if pos.size == 0:
        return 0.0, 0
    best, count = 0.0, 1
    if pos.size >= 2:
        ratios = pos[:-1] / pos[1:]
        cut = int(np.argmax(ratios))
        best, count = float(ratios[cut]), cut + 1
    if pos.size < s.size and best <= GAP_RATIO:
        return np.inf, int(pos.size)
    return best, count


def extract_support(scores: np.ndarray, rule: str = GAP_RULE, tau: float | None = None) -> SupportEstimate:
    """Turn a score vector into a declared outlier set.

    The gap rule declares the scores above the largest multiplicative gap
    in the sorted sequence, provided that gap exceeds GAP_RATIO (exactly
    zero scores below any positive ones always qualify); otherwise it
    declares nothing.  The fixed-threshold rule declares scores strictly
    above tau.
    """
    scores = np.asarray(scores, dtype=float)
    if not np.all(np.isfinite(scores)):
        raise ValueError("scores must be finite")
    if rule == GAP_RULE:
        ratio, count = _gap_cut(scores)
        declared = np.array([], dtype=int)
        if ratio > GAP_RATIO and count < scores.size:
            order = np.argsort(scores)[::-1]
            declared = np.sort(order[:count])
        return SupportEstimate(scores, declared, GAP_RULE)
    if rule == THRESHOLD_RULE:
        if tau is None:
            raise ValueError("fixed-threshold rule needs tau")
        declared = np.nonzero(scores > tau)[0]
        return SupportEstimate(scores, declared, "%s(%g)" % (THRESHOLD_RULE, tau))
    raise ValueError("unknown support rule %r" % rule)


def acos(M, cfg: AcosConfig) -> tuple[SupportEstimate, int]:
    """Two-step adaptive identification of outlier columns.

    Step 1 sketches a Bernoulli column subsample, separates it into
    low-rank plus column-sparse parts, and learns the sketched subspace.
    Step 2 collects one probe row of the residual, compresses it across
    columns, and decodes the outlier locations along a geometric path of
    LASSO weights; the returned scores belong to the path point with the
    best multiplicative separation.  Also returns the exact number of
    scalar measurements collected (|S| m + p).
    """
    if cfg.p < 1:
        raise ValueError("decoding step needs p >= 1")
    src = _as_source(M)
    n1, n2 = src.shape
    sampler = _sample_columns(n2, cfg)
    sketch = make_gaussian_sketch(cfg.m, n1, derive_seed(cfg.seed, 2))
    Y1 = src.sketch_columns(sketch.matrix, sampler.indices)

    lam = _resolve_lambda(cfg, n2)
    sol = outlier_pursuit(Y1, lam, SolverOptions())
    basis = subspace_basis(sol, cfg.energy)

    right = make_gaussian_sketch(cfg.p, n2, derive_seed(cfg.seed, 3))
    probe = make_probe_vector(cfg.m, derive_seed(cfg.seed, 4))
    phi = probe.matrix.ravel()
    w = basis.project_out(phi) @ sketch.matrix  # phi P Phi, 1 x n1
    y2 = src.row_sketch(w, right.matrix)

    null_thresh = float(np.max(np.abs(right.matrix.T @ y2)))
    if null_thresh == 0.0:
        scores = np.zeros(n2)
        path = np.zeros((cfg.lasso_path, n2))
        mus = np.zeros(cfg.lasso_path)
        best = 0
    else:
        mus = np.geomspace(MU_PATH_LO, 1.0, cfg.lasso_path) * null_thresh
        coeffs, _ = lasso_path_solve(right.matrix, y2, mus)
        path = np.abs(coeffs.T)
        quality = [_gap_cut(s) for s in path]
        # favor the cleanest separation; among equals the one declaring more
        best = max(range(len(path)), key=lambda i: (quality[i][0], quality[i][1], -i))
        scores = path[best]
    # declaration guard: with no outliers the decoded coefficients are pure
    # solver leakage, whose scale is measurable from the already-collected
    # sketch; genuine outlier responses sit orders of magnitude above.
    leak = np.median(np.linalg.norm(basis.project_out(Y1), axis=0))
    if np.max(scores) <= 10.0 * np.linalg.norm(phi) * leak:
        est = extract_support(np.zeros(n2), GAP_RULE)
        est.scores = scores
    else:
        est = extract_support(scores, GAP_RULE)
    est.mu_used = float(mus[best])
    est.score_path = path
    return est, src.measurements


def sacos(M, cfg: AcosConfig) -> tuple[SupportEstimate, int]:
    """Single-compression variant: sketch every column once (m n2
    measurements), learn the subspace from a column subsample, and score
    each sketched column by its residual norm outside the subspace."""
    src = _as_source(M)
    n1, n2 = src.shape
    sampler = _sample_columns(n2, cfg)
    sketch = make_gaussian_sketch(cfg.m, n1, derive_seed(cfg.seed, 2))
    Y = src.sketch(sketch.matrix)

    lam = _resolve_lambda(cfg, n2)
    sol = outlier_pursuit(Y[:, sampler.indices], lam, SolverOptions())
    basis = subspace_basis(sol, cfg.energy)
    scores = np.linalg.norm(basis.project_out(Y), axis=0)
    return extract_support(scores, GAP_RULE), src.measurements


def sacos_missing(M_obs: np.ndarray, mask: np.ndarray, cfg: AcosConfig) -> tuple[SupportEstimate, float]:
    """Missing-data variant over entry-sampled data.

    The sketch is a row subsample, so only observed entries in the selected
    rows are ever read; the separation step solves the masked program, and
    each column's score is the residual of its observed subvector against
    the row-restricted basis (re-orthonormalized per column).  Columns with
    no observations, or with no more observations than the basis dimension,
    score zero and are flagged.  Returns the fraction of matrix entries
    used.
    """
    M_obs = np.asarray(M_obs, dtype=float)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != M_obs.shape:
        raise ValueError("mask shape must match the data")
    n1, n2 = M_obs.shape
    rows = make_row_subsampler(n1, cfg.m, derive_seed(cfg.seed, 2)).indices
    sampler = _sample_columns(n2, cfg)
    mask_r = mask[rows]
    data_r = np.where(mask_r, M_obs[rows], 0.0)
    sample_fraction = float(mask_r.sum()) / (n1 * n2)

    lam = _resolve_lambda(cfg, n2)
    sol = rmc_solve(
        data_r[:, sampler.indices], mask_r[:, sampler.indices], lam, SolverOptions()
    )
    basis = subspace_basis(sol, cfg.energy)

    scores = np.zeros(n2)
    unobserved = np.zeros(n2, dtype=bool)
    rank_deficient = np.zeros(n2, dtype=bool)
    for j in range(n2):
        obs = np.nonzero(mask_r[:, j])[0]
        if obs.size == 0:
            unobserved[j] = True
            continue
        if obs.size <= basis.dim:
            rank_deficient[j] = True
            continue
        Q, _ = np.linalg.qr(basis.basis[obs])
        v = data_r[obs, j]
        scores[j] = np.linalg.norm(v - Q @ (Q.T @ v))
    est = extract_support(scores, GAP_RULE)
    est.column_flags = {"unobserved": unobserved, "rank_deficient": rank_deficient}
    return est, sample_fraction


def measurement_count(
    cfg: AcosConfig, realized_s: int, mode: str, n1: int, n2: int
) -> tuple[int, float]:
    """Closed-form measurement total and sampling rate for a pipeline run.

    acos collects realized_s * m + p scalars; sacos collects m * n2.
    """
    if mode == "acos":
        count = realized_s * cfg.m + cfg.p
    elif mode == "sacos":
        count = cfg.m * n2
    else:
        raise ValueError("unknown mode %r" % mode)
    return count, count / float(n1 * n2)
