"""Empirical check that truthful reporting maximizes the expected score.

The common prior is fixed to a symmetric Dirichlet over each target's
grade distribution: it is conjugate to the categorical signals, gives
closed-form posteriors, and satisfies the model's common-prior,
rationality and stochastic-relevance assumptions by construction.

An agent observing signal t faces n-2 truthful peers.  Conditional on t,
worlds are sampled by drawing omega from the Dirichlet posterior, peer
signals i.i.d. categorical from omega, and peer predictions as their
truthful posteriors; the agent's candidate report is then scored with
the scoring module.  All candidate reports are scored against the same
sampled worlds (common random numbers), so deviation comparisons are
paired and their differences have far smaller standard errors than the
marginal estimates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scoring import target_scores

_BLOCK = 4096


@dataclass(frozen=True)
class PriorModel:
    """Symmetric Dirichlet prior: m grade levels, concentration a > 0."""

    m: int
    a: float

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if not self.a > 0:
            raise ValueError(f"a must be > 0, got {self.a}")


def posterior_prediction(model: PriorModel, t: int) -> np.ndarray:
    """Truthful prediction after observing grade t: (a + [k=t]) / (m a + 1).

    Distinct signals give distinct posteriors for any finite a.  The
    returned vector sums to exactly 1.0 (the observed component absorbs
    the float residual).
    """
    if not 1 <= t <= model.m:
        raise ValueError(f"t must lie in 1..{model.m}, got {t}")
    denom = model.m * model.a + 1.0
    vec = np.full(model.m, model.a / denom)
    vec[t - 1] = (model.a + 1.0) / denom
    vec[t - 1] += 1.0 - vec.sum()
    return vec


def _uniform_vector(m: int) -> np.ndarray:
    vec = np.full(m, 1.0 / m)
    vec[-1] += 1.0 - vec.sum()
    return vec


def candidate_reports(model: PriorModel, t_true: int) -> list[tuple[int, np.ndarray, bool]]:
    """The truthful report followed by the finite deviation set.

    Candidates pair every grade x' with every honest posterior plus a
    uniform sentinel: given a reported grade, the score-maximizing
    prediction deviation is some signal's posterior, so this grid covers
    the interesting space.  The truthful pair appears exactly once,
    first, and is excluded from the deviations.
    """
    posteriors = [posterior_prediction(model, t) for t in range(1, model.m + 1)]
    truthful_y = posteriors[t_true - 1]
    out = [(t_true, truthful_y, True)]
    for x in range(1, model.m + 1):
        for y in [*posteriors, _uniform_vector(model.m)]:
            if x == t_true and np.array_equal(y, truthful_y):
                continue
            out.append((x, y, False))
    return out


def _world_rng(seed: int, n: int, t_true: int, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=(int(seed), int(n), int(t_true)), spawn_key=(block,))
    return np.random.Generator(np.random.Philox(ss))


def _check_inputs(model: PriorModel, n: int, t_true: int, samples: int):
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    if not 1 <= t_true <= model.m:
        raise ValueError(f"t_true must lie in 1..{model.m}, got {t_true}")
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")


def _evaluate_reports(model, n, t_true, reports, samples, seed, epsilon):
    """Score every candidate report over the same sampled worlds.

    Returns (means, stderrs, diff_means, diff_stderrs); the diff columns
    are paired statistics of reports[0] minus each report.  Worlds are
    drawn in fixed-size blocks with per-block derived streams, so the
    draw sequence depends only on (seed, n, t_true, samples).
    """
    m = model.m
    concentration = np.full(m, model.a)
    concentration[t_true - 1] += 1.0
    posterior_table = np.stack([posterior_prediction(model, t) for t in range(1, m + 1)])

    n_reports = len(reports)
    s_sum = np.zeros(n_reports)
    s_sq = np.zeros(n_reports)
    d_sum = np.zeros(n_reports)
    d_sq = np.zeros(n_reports)

    done = 0
    block = 0
    while done < samples:
        bsize = min(_BLOCK, samples - done)
        rng = _world_rng(seed, n, t_true, block)
        omega = rng.dirichlet(concentration, size=bsize)
        u = rng.random((bsize, n - 2))
        cum = np.cumsum(omega, axis=1)
        signals = 1 + (u[:, :, None] > cum[:, None, :]).sum(axis=2)
        np.clip(signals, 1, m, out=signals)
        peer_preds = posterior_table[signals - 1]

        block_scores = np.empty((n_reports, bsize))
        for c, (x, y) in enumerate(reports):
            evals = np.concatenate(
                [np.full((bsize, 1), x, dtype=np.int64), signals], axis=1
            )
            preds = np.concatenate(
                [np.broadcast_to(np.asarray(y, dtype=np.float64), (bsize, 1, m)), peer_preds],
                axis=1,
            )
            block_scores[c] = target_scores(evals, preds, m, epsilon)[:, 0]

        s_sum += block_scores.sum(axis=1)
        s_sq += np.square(block_scores).sum(axis=1)
        diffs = block_scores[0] - block_scores
        d_sum += diffs.sum(axis=1)
        d_sq += np.square(diffs).sum(axis=1)
        done += bsize
        block += 1

    return (
        s_sum / samples,
        _stderr(s_sum, s_sq, samples),
        d_sum / samples,
        _stderr(d_sum, d_sq, samples),
    )


def _stderr(total: np.ndarray, total_sq: np.ndarray, count: int) -> np.ndarray:
    if count < 2:
        return np.zeros_like(total)
    var = np.maximum(total_sq - total * total / count, 0.0) / (count - 1)
    return np.sqrt(var / count)


def expected_score_of_report(
    model: PriorModel,
    n: int,
    t_true: int,
    x_report: int,
    y_report,
    samples: int,
    seed: int,
    epsilon: float = 1e-4,
) -> tuple[float, float]:
    """Monte-Carlo estimate of the report's expected score, with stderr.

    Calls sharing (model, n, t_true, samples, seed) reuse the same
    sampled worlds, so estimates for different reports are paired.
    """
    _check_inputs(model, n, t_true, samples)
    if not 1 <= x_report <= model.m:
        raise ValueError(f"x_report must lie in 1..{model.m}, got {x_report}")
    y = np.asarray(y_report, dtype=np.float64)
    if y.shape != (model.m,) or np.any(y < 0.0) or np.any(y > 1.0) or abs(y.sum() - 1.0) > 1e-9:
        raise ValueError(f"y_report must be a length-{model.m} probability vector")
    means, stderrs, _, _ = _evaluate_reports(
        model, n, t_true, [(x_report, y)], samples, seed, epsilon
    )
    return float(means[0]), float(stderrs[0])


@dataclass(frozen=True)
class DeviationRow:
    """One candidate report and its paired Monte-Carlo estimates."""

    x_report: int
    y_report: tuple[float, ...]
    estimate: float
    stderr: float
    samples: int
    truthful: bool
    loss_vs_truth: float  # E[truthful] - E[this report], paired; 0 for the truthful row
    loss_stderr: float


@dataclass(frozen=True)
class DeviationTable:
    model: PriorModel
    n: int
    t_true: int
    epsilon: float
    seed: int
    rows: tuple[DeviationRow, ...]


def deviation_table(
    model: PriorModel,
    n: int,
    t_true: int,
    samples: int,
    seed: int,
    epsilon: float = 1e-4,
) -> DeviationTable:
    """Expected-score estimates for the truthful report and every deviation."""
    _check_inputs(model, n, t_true, samples)
    cands = candidate_reports(model, t_true)
    means, stderrs, d_means, d_stderrs = _evaluate_reports(
        model, n, t_true, [(x, y) for x, y, _ in cands], samples, seed, epsilon
    )
    rows = tuple(
        DeviationRow(
            x_report=x,
            y_report=tuple(float(v) for v in y),
            estimate=float(means[c]),
            stderr=float(stderrs[c]),
            samples=samples,
            truthful=truthful,
            loss_vs_truth=float(d_means[c]),
            loss_stderr=float(d_stderrs[c]),
        )
        for c, (x, y, truthful) in enumerate(cands)
    )
    return DeviationTable(model=model, n=n, t_true=t_true, epsilon=epsilon, seed=seed, rows=rows)


def best_response_margin(
    model: PriorModel,
    n: int,
    t_true: int,
    samples: int,
    seed: int,
    epsilon: float = 1e-4,
) -> tuple[float, float]:
    """Truthful expected score minus the best deviation's, with paired stderr.

    A nonnegative margin (within noise) means truth-telling is a best
    response in this setting.  The guarantee behind it is asymptotic in
    n; at small n the margin can genuinely be negative and is reported
    as measured, never thresholded.  With m = 1 the deviation set is
    empty and the margin is exactly zero.
    """
    table = deviation_table(model, n, t_true, samples, seed, epsilon)
    devs = [row for row in table.rows if not row.truthful]
    if not devs:
        return 0.0, 0.0
    worst = min(devs, key=lambda row: row.loss_vs_truth)
    return worst.loss_vs_truth, worst.loss_stderr
