"""Synthetic instances, success scoring, and the phase-transition harness.

Instances follow the equal-energy planted model: L = [U V^T, 0] with
Gaussian factors, C = [0, W] with W entries N(0, r), so every column of
M = L + C has the same expected squared norm n1 * r.  Outliers occupy the
trailing block; the pipelines are permutation-equivariant so the canonical
placement loses nothing.

A trial is deemed successful when, for at least one score vector along the
regularization path, some threshold separates the true outlier scores from
all the rest (the oracle rule).  The phase grid sweeps (rank, outliers)
cells, runs a configured pipeline for each of several separation weights,
and records the pointwise-maximum success frequency per cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .pipeline import AcosConfig, acos, sacos, sacos_missing
from .rng import derive_seed, generator

MODES = ("acos", "sacos", "sacos_missing")


@dataclass
class ProblemInstance:
    """Planted low-rank plus column-outlier matrix with ground truth."""

    M: np.ndarray = field(repr=False)
    L: np.ndarray = field(repr=False)
    C: np.ndarray = field(repr=False)
    true_support: np.ndarray
    r: int
    normalized: bool = False
    noise_sigma: float = 0.0
    mask: np.ndarray | None = field(default=None, repr=False)
    p_omega: float | None = None

    @property
    def shape(self) -> tuple[int, int]:
        return self.M.shape

    @property
    def k(self) -> int:
        return int(self.true_support.size)


def generate_instance(
    n1: int, n2: int, r: int, k: int, seed: int, normalize: bool = False
) -> ProblemInstance:
    """Draw a planted instance; deterministic in (parameters, seed)."""
    if not 0 <= k < n2:
        raise ValueError("need 0 <= k < n2")
    if not 1 <= r <= min(n1, n2 - k):
        raise ValueError("rank must satisfy 1 <= r <= min(n1, n2 - k)")
    rng = generator(seed)
    n_low = n2 - k
    U = rng.standard_normal((n1, r))
    V = rng.standard_normal((n_low, r))
    L = np.concatenate([U @ V.T, np.zeros((n1, k))], axis=1)
    W = rng.standard_normal((n1, k)) * math.sqrt(r)
    C = np.concatenate([np.zeros((n1, n_low)), W], axis=1)
    if normalize:
        norms = np.linalg.norm(L + C, axis=0)
        L = L / norms
        C = C / norms
    return ProblemInstance(
        M=L + C,
        L=L,
        C=C,
        true_support=np.arange(n_low, n2),
        r=r,
        normalized=normalize,
    )


def add_noise(inst: ProblemInstance, sigma: float, seed: int) -> ProblemInstance:
    """Additive i.i.d. N(0, sigma^2) perturbation of M; L and C unchanged."""
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    if sigma == 0:
        return replace(inst, noise_sigma=0.0)
    N = generator(seed).standard_normal(inst.M.shape) * sigma
    return replace(inst, M=inst.L + inst.C + N, noise_sigma=sigma)


def bernoulli_mask(n1: int, n2: int, p_omega: float, seed: int) -> np.ndarray:
    """Entrywise-independent observation mask with density p_omega."""
    if not 0.0 < p_omega <= 1.0:
        raise ValueError("p_omega must lie in (0, 1]")
    return generator(seed).random((n1, n2)) < p_omega


def column_incoherence(L: np.ndarray) -> float:
    """Measured column incoherence of a low-rank matrix.

    max_i ||V^T e_i||^2 * n_L / r for the right singular vectors V of L,
    where n_L counts the nonzero columns.  Lies in [1, n_L / r]; small
    values mean the row space is spread across many columns.
    """
    L = np.asarray(L, dtype=float)
    _, s, Vt = np.linalg.svd(L, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        raise ValueError("zero matrix has no incoherence")
    r = int(np.sum(s > max(L.shape) * np.finfo(float).eps * s[0]))
    n_low = int(np.sum(np.linalg.norm(L, axis=0) > 0))
    leverage = np.sum(Vt[:r] ** 2, axis=0)
    return float(np.max(leverage) * n_low / r)


def oracle_success(scores_per_mu, true_support) -> bool:
    """Threshold-separation success test over a path of score vectors.

    True iff some vector has every true-outlier score strictly above every
    other score.  With an empty support, success means some vector is
    identically zero (no spurious response at all).
    """
    if isinstance(scores_per_mu, np.ndarray) and scores_per_mu.ndim == 1:
        scores_per_mu = [scores_per_mu]
    scores_per_mu = [np.asarray(s, dtype=float) for s in scores_per_mu]
    if len(scores_per_mu) == 0:
        raise ValueError("need at least one score vector")
    support = np.asarray(sorted(true_support), dtype=int)
    for s in scores_per_mu:
        if support.size == 0:
            if not s.any():
                return True
            continue
        lowest = s[support].min()
        inliers = np.delete(s, support)
        # an empty complement still needs a positive threshold to fit under
        if lowest > (inliers.max() if inliers.size else 0.0):
            return True
    return False


def hypergeometric_tail_bound(N: int, M: int, n: int, eps: float) -> float:
    """Upper-tail bound for draws without replacement.

    For H ~ hyp(N, M, n) and p = M/N:
    Pr(H >= (1 + eps) n p) <= exp(-eps^2 n p / (2 (1 + eps/3))).
    """
    if not 0 <= M <= N or not 0 <= n <= N:
        raise ValueError("need 0 <= M <= N and 0 <= n <= N")
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if N == 0:
        return 1.0
    np_mean = n * (M / N)
    return math.exp(-eps * eps * np_mean / (2.0 * (1.0 + eps / 3.0)))


@dataclass
class PhaseGridResult:
    """Success frequencies over a (rank, outlier-count) grid.

    ``grid`` maps (r, k) to the pointwise maximum over the separation
    weights of the per-weight success frequencies; ``cell_lambda_best`` and
    ``cell_rate`` carry the winning weight and the mean realized sampling
    rate per cell.  Infeasible cells (r > min(n1, n2 - k)) are absent.
    """

    grid: dict
    trials_per_cell: int
    lambda_set: list
    config: AcosConfig
    mode: str
    sampling_rate: float
    r_values: list
    k_values: list
    cell_lambda_best: dict
    cell_rate: dict


def _run_trial(mode, inst, mask, cfg):
    """One pipeline run; returns (score vectors for the oracle, rate)."""
    n1, n2 = inst.shape
    if mode == "acos":
        est, count = acos(inst.M, cfg)
        return est.score_path, count / float(n1 * n2)
    if mode == "sacos":
        est, count = sacos(inst.M, cfg)
        return [est.scores], count / float(n1 * n2)
    est, fraction = sacos_missing(inst.M, mask, cfg)
    return [est.scores], fraction


def phase_grid(
    mode: str,
    cfg_template: AcosConfig,
    r_values,
    k_values,
    lambda_set,
    trials: int,
    seed: int,
    *,
    n1: int,
    n2: int,
    noise_sigma: float = 0.0,
    p_omega: float | None = None,
    normalize: bool = False,
) -> PhaseGridResult:
    """Monte-Carlo success frequencies over an (r, k) grid.

    Every (cell, weight, trial) gets a fresh instance and fresh operators
    under a seed derived from (seed, r, k, weight index, trial), so cells
    and trials are order-independent and reproducible.
    """
    if mode not in MODES:
        raise ValueError("mode must be one of %s" % (MODES,))
    if mode == "sacos_missing" and p_omega is None:
        raise ValueError("missing-data mode needs p_omega")
    if trials < 1 or not len(r_values) or not len(k_values):
        raise ValueError("need nonempty grid axes and trials >= 1")
    if not len(lambda_set):
        raise ValueError("need at least one separation weight")

    grid, cell_best, cell_rate = {}, {}, {}
    rate_sum, rate_n = 0.0, 0
    for r in r_values:
        for k in k_values:
            if k >= n2 or r > min(n1, n2 - k):
                continue
            freqs = []
            rates = []
            for li, lam in enumerate(lambda_set):
                wins = 0
                for t in range(trials):
                    cell_seed = derive_seed(seed, r, k, li, t)
                    inst = generate_instance(
                        n1, n2, r, k, derive_seed(cell_seed, 0), normalize
                    )
                    if noise_sigma > 0:
                        inst = add_noise(inst, noise_sigma, derive_seed(cell_seed, 1))
                    mask = None
                    if mode == "sacos_missing":
                        mask = bernoulli_mask(n1, n2, p_omega, derive_seed(cell_seed, 2))
                    cfg = replace(cfg_template, lam=lam, seed=derive_seed(cell_seed, 3))
                    score_path, rate = _run_trial(mode, inst, mask, cfg)
                    rates.append(rate)
                    if oracle_success(score_path, inst.true_support):
                        wins += 1
                freqs.append(wins / trials)
            best = int(np.argmax(freqs))
            grid[(r, k)] = freqs[best]
            cell_best[(r, k)] = lambda_set[best]
            cell_rate[(r, k)] = float(np.mean(rates))
            rate_sum += cell_rate[(r, k)]
            rate_n += 1
    return PhaseGridResult(
        grid=grid,
        trials_per_cell=trials,
        lambda_set=list(lambda_set),
        config=cfg_template,
        mode=mode,
        sampling_rate=rate_sum / max(rate_n, 1),
        r_values=list(r_values),
        k_values=list(k_values),
        cell_lambda_best=cell_best,
        cell_rate=cell_rate,
    )
