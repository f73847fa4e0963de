"""Recalibrated Bayesian-truth-serum scoring.

For a target agent j with reports from its n-1 evaluators, the pairwise
score of evaluator i is

    R(i, j) = ln(xbar_k / ybar_k)                          (information score)
            + sum_k xbar_k * ln(z_ik / xbar_k)             (prediction score)

where k in the first term is the grade i endorsed, xbar is the smoothed
empirical grade frequency over all n-1 evaluators (i's own report
included), ybar the geometric mean of the smoothed predictions, and
z_ik = (1-eps) * y_ik + eps/m the smoothing applied to i's own
prediction.  Natural logarithms throughout.  The smoothing keeps every
log argument in [eps/m, 1 - eps + eps/m], so no special-casing of ln(0)
is needed or permitted.

The information score rewards grades that turn out more common than
collectively predicted; the prediction score is the negative KL
divergence from the smoothed empirical frequencies to the smoothed
reported prediction, hence always <= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .profiles import OpinionProfile


def score_bounds(m: int, epsilon: float) -> tuple[float, float]:
    """Interval guaranteed to contain every pairwise score.

    Returns (-2 ln(m/eps), ln(m/eps)).  The bounds need not be tight;
    with m = 1 every score is exactly zero, strictly inside.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    span = math.log(m / epsilon)
    return (-2.0 * span, span)


@dataclass(frozen=True)
class ConsensusStats:
    """Per-target consensus statistics.

    xbar      -- smoothed evaluation frequencies (length m)
    ybar      -- geometric mean of the smoothed predictions (length m)
    xbar_raw  -- unsmoothed frequencies, exposed so the score-sum
                 residual identity is testable
    """

    target: int
    xbar: np.ndarray
    ybar: np.ndarray
    xbar_raw: np.ndarray


def _smooth(p: np.ndarray | float, m: int, epsilon: float):
    # Algebraically (1-eps)*p + eps/m, written so that p = 1 with m = 1
    # maps to exactly 1.0 in floating point.
    return p - epsilon * (p - 1.0 / m)


def _one_hot(evals: np.ndarray, m: int) -> np.ndarray:
    return (evals[..., None] == np.arange(1, m + 1)).astype(np.float64)


def _target_kernel(evals: np.ndarray, preds: np.ndarray, m: int, epsilon: float):
    """Shared core for one target's n-1 evaluator reports.

    evals: (..., E) integer grades; preds: (..., E, m) prediction rows.
    Returns (info, pred, xbar, ln_ybar, xbar_raw) where info/pred are
    (..., E) score components and the statistics are (..., m).
    """
    xbar_raw = _one_hot(evals, m).mean(axis=-2)
    xbar = _smooth(xbar_raw, m, epsilon)
    ln_z = np.log(_smooth(preds, m, epsilon))
    ln_ybar = ln_z.mean(axis=-2)
    ln_xbar = np.log(xbar)

    idx = (evals - 1)[..., None]
    info = (
        np.take_along_axis(np.broadcast_to(ln_xbar[..., None, :], preds.shape), idx, axis=-1)
        - np.take_along_axis(np.broadcast_to(ln_ybar[..., None, :], preds.shape), idx, axis=-1)
    )[..., 0]
    # Per-component difference keeps the term exactly zero when a smoothed
    # prediction coincides bitwise with xbar.
    pred = (xbar[..., None, :] * (ln_z - ln_xbar[..., None, :])).sum(axis=-1)
    return info, pred, xbar, ln_ybar, xbar_raw


def target_scores(evals: np.ndarray, preds: np.ndarray, m: int, epsilon: float) -> np.ndarray:
    """Scores of every evaluator of one target; batchable over leading axes."""
    info, pred, _, _, _ = _target_kernel(np.asarray(evals), np.asarray(preds), m, epsilon)
    return info + pred


def _received_reports(profile: OpinionProfile):
    """Reports about each target: grades (n, n-1) and predictions (n, n-1, m).

    Row j holds the n-1 evaluator reports about target j, evaluators in
    ascending index order with j itself skipped.
    """
    n = profile.n
    off = ~np.eye(n, dtype=bool)
    evals_t = profile.evaluations.T[off].reshape(n, n - 1)
    preds_t = profile.predictions.transpose(1, 0, 2)[off].reshape(n, n - 1, profile.params.m)
    return evals_t, preds_t


def consensus_stats(profile: OpinionProfile, j: int) -> ConsensusStats:
    """Consensus statistics for target j over its n-1 evaluators.

    Every evaluator's report is included in both averages; there is no
    leave-one-out variant per reporting agent.
    """
    n = profile.n
    if not 0 <= j < n:
        raise IndexError(f"target index out of range: {j}")
    evals_t, preds_t = _received_reports(profile)
    _, _, xbar, ln_ybar, xbar_raw = _target_kernel(
        evals_t[j], preds_t[j], profile.params.m, profile.params.epsilon
    )
    for arr in (xbar, ln_ybar, xbar_raw):
        arr.setflags(write=False)
    ybar = np.exp(ln_ybar)
    ybar.setflags(write=False)
    return ConsensusStats(target=j, xbar=xbar, ybar=ybar, xbar_raw=xbar_raw)


def bts_score(profile: OpinionProfile, i: int, j: int) -> float:
    """Score of evaluator i's report about target j."""
    if i == j:
        raise ValueError(f"no self-score: ({i}, {j})")
    n = profile.n
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"agent index out of range: ({i}, {j})")
    evals_t, preds_t = _received_reports(profile)
    scores = target_scores(evals_t[j], preds_t[j], profile.params.m, profile.params.epsilon)
    pos = i if i < j else i - 1
    return float(scores[pos])


@dataclass(frozen=True, eq=False)
class ScoreMatrix:
    """All pairwise scores; entry (i, j) is evaluator i's score on target j.

    The diagonal carries no value and is stored as zero padding, which
    row/column sums may rely on.
    """

    entries: np.ndarray

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def entry(self, i: int, j: int) -> float:
        if i == j:
            raise IndexError(f"no self-score: ({i}, {j})")
        return float(self.entries[i, j])


def score_matrix(profile: OpinionProfile) -> ScoreMatrix:
    """Pairwise scores for every ordered evaluator/target pair.

    Consensus statistics are computed once per target, not once per pair.
    """
    info, pred = score_components(profile)
    entries = info + pred
    entries.setflags(write=False)
    return ScoreMatrix(entries)


def score_components(profile: OpinionProfile) -> tuple[np.ndarray, np.ndarray]:
    """Information and prediction score matrices, separately.

    Both are (n, n) with zero diagonal padding; their sum is the score
    matrix.  The prediction component is <= 0 everywhere (negative KL
    divergence between exact probability vectors).
    """
    n = profile.n
    evals_t, preds_t = _received_reports(profile)
    info_t, pred_t, _, _, _ = _target_kernel(
        evals_t, preds_t, profile.params.m, profile.params.epsilon
    )
    off = ~np.eye(n, dtype=bool)
    info = np.zeros((n, n))
    pred = np.zeros((n, n))
    info.T[off] = info_t.ravel()
    pred.T[off] = pred_t.ravel()
    return info, pred


def target_score_sum(stats: ConsensusStats, n: int, epsilon: float) -> float:
    """Algebraic value of the summed scores received about one target.

    Summing R(i, j) over the n-1 evaluators i collapses to

        (n-1) * eps * sum_k (xbar_raw_k - 1/m) * (ln xbar_k - ln ybar_k),

    an O(eps) residual: the scoring method is zero-sum only in the
    eps -> 0 limit.
    """
    m = stats.xbar.shape[0]
    return float(
        (n - 1)
        * epsilon
        * np.sum((stats.xbar_raw - 1.0 / m) * (np.log(stats.xbar) - np.log(stats.ybar)))
    )
