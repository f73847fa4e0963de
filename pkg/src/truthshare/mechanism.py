"""The sharing mechanism: scaling, aggregation, truth scores, shares.

Each agent's share combines two components: the scaled evaluations it
received (rows scaled to sum to the reward V, then averaged over n) and
an alpha-weighted truth-telling score (the mean of its pairwise
truth-serum scores).  The module also provides the closed-form alpha
bounds under which the mechanism is provably fair and individually
rational, and the unanimous-dominance analysis those guarantees refer to.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .profiles import MechanismParams, OpinionProfile
from .scoring import ScoreMatrix, score_matrix


class BoundInapplicableError(ValueError):
    """The fairness bound is only established for M <= sqrt(n-2)."""


class DominancePair(NamedTuple):
    """Agent ``dominator`` strictly out-graded ``dominated`` unanimously."""

    dominator: int
    dominated: int


@dataclass(frozen=True, eq=False)
class ShareReport:
    """Per-agent share breakdown plus the budget residual.

    gamma = chi_bar + alpha * zeta per agent; ``budget_residual`` is
    sum(gamma) - V, bounded by 2 * alpha * n * eps * ln(m/eps).
    """

    agents: tuple[str, ...]
    chi_bar: np.ndarray
    zeta: np.ndarray
    gamma: np.ndarray
    budget_residual: float
    params: MechanismParams


def scale_evaluations(profile: OpinionProfile) -> np.ndarray:
    """Scale each agent's outgoing evaluations to sum to V.

    Entry (i, j) is x_ij * V / sum_q x_iq.  The denominator is at least
    n-1 since grades are >= 1.  Diagonal stays zero padding.
    """
    e = profile.evaluations.astype(np.float64)
    row_sums = e.sum(axis=1)  # diagonal padding is zero
    return e * (profile.params.v / row_sums)[:, None]


def aggregate_received(scaled: np.ndarray) -> np.ndarray:
    """First share component: column sums of the scaled grid divided by n."""
    n = scaled.shape[0]
    return scaled.sum(axis=0) / n


def truth_scores(scores: ScoreMatrix) -> np.ndarray:
    """Arithmetic mean of each agent's pairwise scores (over n-1 targets)."""
    n = scores.n
    return scores.entries.sum(axis=1) / (n - 1)


def compute_shares(profile: OpinionProfile, scores: ScoreMatrix | None = None) -> ShareReport:
    """Final shares with all intermediates.

    ``scores`` may be passed to reuse a precomputed score matrix (shares
    for a different alpha, for instance); it must come from this profile.
    """
    params = profile.params
    chi_bar = aggregate_received(scale_evaluations(profile))
    if scores is None:
        scores = score_matrix(profile)
    zeta = truth_scores(scores)
    gamma = chi_bar + params.alpha * zeta
    for arr in (chi_bar, zeta, gamma):
        arr.setflags(write=False)
    return ShareReport(
        agents=profile.agents,
        chi_bar=chi_bar,
        zeta=zeta,
        gamma=gamma,
        budget_residual=float(gamma.sum() - params.v),
        params=params,
    )


def shares_with_alpha(profile: OpinionProfile, alpha: float, scores: ScoreMatrix | None = None) -> ShareReport:
    """Shares for the same opinions under a different truth-score weight."""
    swapped = replace(profile, params=replace(profile.params, alpha=float(alpha)))
    return compute_shares(swapped, scores)


def fairness_alpha_bound(params: MechanismParams) -> float:
    """Largest alpha proven to keep the mechanism fair: V / (3 M n^2 ln(M/eps)).

    Established for small grade scales only (M of order sqrt(n)); outside
    that region this raises :class:`BoundInapplicableError` rather than
    extrapolating.
    """
    # Applicability is m*m <= n.  A dominating agent's share-gap lower
    # bound is V/((n-1) m n) * (n - m^2 + m), which stays >= V/(n(n-1))
    # whenever m^2 <= n, so the formula still guarantees fairness on the
    # borderline m^2 in {n-1, n}.
    if params.m * params.m > params.n:
        raise BoundInapplicableError(
            f"fairness bound requires M <= sqrt(n-2): M={params.m}, n={params.n}"
        )
    span = math.log(params.m / params.epsilon)
    return params.v / (3.0 * params.m * params.n**2 * span)


def ir_alpha_bound(params: MechanismParams) -> float:
    """Largest alpha proven to keep every share nonnegative: V / (2 M n ln(M/eps))."""
    span = math.log(params.m / params.epsilon)
    return params.v / (2.0 * params.m * params.n * span)


def dominance_pairs(evaluations: np.ndarray | OpinionProfile) -> list[DominancePair]:
    """All ordered pairs (i, j) where i unanimously out-grades j.

    A pair qualifies only if every third agent grades i strictly above j
    AND the mutual grades are strictly ordered (x_j^i > x_i^j).  Any tie
    disqualifies the pair.
    """
    if isinstance(evaluations, OpinionProfile):
        e = evaluations.evaluations
    else:
        e = np.array(evaluations, dtype=np.int64)
        np.fill_diagonal(e, 0)
    n = e.shape[0]
    greater = e[:, :, None] > e[:, None, :]  # [z, i, j] = x_z^i > x_z^j
    cnt = greater.sum(axis=0)
    # With zero diagonal padding and grades >= 1, the z = i term is always
    # False (0 > grade) and the z = j term always True (grade > 0), so all
    # n-2 third parties agree exactly when cnt == n - 1.
    mutual = e.T > e
    dom = (cnt == n - 1) & mutual
    np.fill_diagonal(dom, False)
    return [DominancePair(int(i), int(j)) for i, j in zip(*np.nonzero(dom))]


def count_violations(report: ShareReport, pairs: list[DominancePair]) -> tuple[int, int]:
    """(unfair, negative): dominance pairs paid out of order, and shares < 0."""
    gamma = report.gamma
    unfair = sum(1 for i, j in pairs if gamma[i] <= gamma[j])
    negative = int(np.count_nonzero(gamma < 0.0))
    return unfair, negative
