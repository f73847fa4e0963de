"""Randomized property suites backing the ``verify`` command.

Each suite draws seeded random instances and checks one family of
guarantees: score bounds, budget identities, fairness under the proven
alpha bound, individual rationality under its bound, and the
truth-telling margin.  Failures carry the counterexample profile so it
can be serialized for inspection.

Corpus distribution (one instance per trial, stream keyed by the trial
index): n uniform on 3..20, M uniform on 1..8, epsilon drawn from
{1e-4, 1e-2, 0.1}, V = 1000, alpha log-uniform on [1e-3, 1e2].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .equilibrium import PriorModel, best_response_margin
from .mechanism import (
    BoundInapplicableError,
    compute_shares,
    count_violations,
    dominance_pairs,
    fairness_alpha_bound,
    ir_alpha_bound,
    shares_with_alpha,
)
from .profiles import MechanismParams, OpinionProfile
from .scoring import consensus_stats, score_bounds, score_components, score_matrix, target_score_sum
from .simulation import sample_profile, trial_rng

CORPUS_N = (3, 20)
CORPUS_M = (1, 8)
CORPUS_EPSILONS = (1e-4, 1e-2, 0.1)
CORPUS_V = 1000.0
CORPUS_LOG10_ALPHA = (-3.0, 2.0)


@dataclass(frozen=True)
class PropertyCheck:
    name: str
    passed: bool
    detail: str
    counterexample: OpinionProfile | None = None


@dataclass(frozen=True)
class SuiteResult:
    suite: str
    trials: int
    seed: int
    checks: tuple[PropertyCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def corpus(trials: int, seed: int) -> Iterator[OpinionProfile]:
    """Seeded random instances; instance t is independent of all others."""
    lo_a, hi_a = CORPUS_LOG10_ALPHA
    for t in range(trials):
        rng = trial_rng(seed, 0, t)
        n = int(rng.integers(CORPUS_N[0], CORPUS_N[1] + 1))
        m = int(rng.integers(CORPUS_M[0], CORPUS_M[1] + 1))
        epsilon = float(CORPUS_EPSILONS[rng.integers(len(CORPUS_EPSILONS))])
        alpha = float(10.0 ** rng.uniform(lo_a, hi_a))
        params = MechanismParams(n=n, m=m, v=CORPUS_V, alpha=alpha, epsilon=epsilon)
        yield sample_profile(n, params, rng)


def run_bounds_suite(trials: int, seed: int) -> SuiteResult:
    """Lemma-style score bounds, and nonpositive prediction components."""
    out_of_bounds = 0
    positive_pred = 0
    worst_margin = np.inf  # smallest slack to either bound, in units of the span
    first_bad: OpinionProfile | None = None
    for profile in corpus(trials, seed):
        lo, hi = score_bounds(profile.params.m, profile.params.epsilon)
        info, pred = score_components(profile)
        off = ~np.eye(profile.n, dtype=bool)
        entries = (info + pred)[off]
        bad = np.count_nonzero((entries < lo) | (entries > hi))
        badp = np.count_nonzero(pred[off] > 0.0)
        out_of_bounds += int(bad)
        positive_pred += int(badp)
        if (bad or badp) and first_bad is None:
            first_bad = profile
        span = hi - lo
        if span > 0:
            worst_margin = min(worst_margin, (entries.min() - lo) / span, (hi - entries.max()) / span)
    checks = (
        PropertyCheck(
            name="score-bounds",
            passed=out_of_bounds == 0,
            detail=(
                f"{out_of_bounds} scores outside [-2 ln(M/eps), ln(M/eps)] over {trials} instances; "
                f"smallest relative slack {worst_margin:.6f}"
            ),
            counterexample=first_bad,
        ),
        PropertyCheck(
            name="prediction-score-nonpositive",
            passed=positive_pred == 0,
            detail=f"{positive_pred} positive prediction-score components over {trials} instances",
            counterexample=first_bad,
        ),
    )
    return SuiteResult("bounds", trials, seed, checks)


def run_budget_suite(trials: int, seed: int) -> SuiteResult:
    """Aggregate conservation, the per-target score-sum identity, and the
    epsilon-budget envelope."""
    bad_conservation = 0
    bad_identity = 0
    bad_envelope = 0
    worst_conservation = 0.0
    worst_identity = 0.0
    worst_envelope = 0.0  # residual as a fraction of its bound
    first_bad: OpinionProfile | None = None
    for profile in corpus(trials, seed):
        p = profile.params
        scores = score_matrix(profile)
        report = compute_shares(profile, scores)

        dev = abs(float(report.chi_bar.sum()) - p.v)
        worst_conservation = max(worst_conservation, dev)
        ok_conservation = dev <= 1e-9 * p.v

        ok_identity = True
        for j in range(profile.n):
            lhs = float(scores.entries[:, j].sum())
            rhs = target_score_sum(consensus_stats(profile, j), p.n, p.epsilon)
            gap = abs(lhs - rhs)
            worst_identity = max(worst_identity, gap)
            if gap > 1e-9:
                ok_identity = False

        bound = 2.0 * p.alpha * p.n * p.epsilon * np.log(p.m / p.epsilon)
        ratio = abs(report.budget_residual) / bound if bound > 0 else 0.0
        worst_envelope = max(worst_envelope, ratio)
        ok_envelope = abs(report.budget_residual) <= bound

        bad_conservation += not ok_conservation
        bad_identity += not ok_identity
        bad_envelope += not ok_envelope
        if not (ok_conservation and ok_identity and ok_envelope) and first_bad is None:
            first_bad = profile
    checks = (
        PropertyCheck(
            "aggregate-conservation",
            bad_conservation == 0,
            f"{bad_conservation} violations; max |sum(chi_bar) - V| = {worst_conservation:.3e}",
            first_bad,
        ),
        PropertyCheck(
            "score-sum-identity",
            bad_identity == 0,
            f"{bad_identity} violations; max |sum_i R(i,j) - identity| = {worst_identity:.3e}",
            first_bad,
        ),
        PropertyCheck(
            "budget-envelope",
            bad_envelope == 0,
            f"{bad_envelope} violations; max residual = {worst_envelope:.6f} of the bound",
            first_bad,
        ),
    )
    return SuiteResult("budget", trials, seed, checks)


def run_fairness_suite(trials: int, seed: int) -> SuiteResult:
    """With alpha at the fairness bound, dominated agents never earn more.

    Instances with M > sqrt(n-2) are skipped (the bound is not
    established there); the detail line reports coverage.
    """
    applicable = 0
    pairs_checked = 0
    violations = 0
    first_bad: OpinionProfile | None = None
    for profile in corpus(trials, seed):
        scores = score_matrix(profile)
        try:
            alpha = fairness_alpha_bound(profile.params)
        except BoundInapplicableError:
            continue
        applicable += 1
        report = shares_with_alpha(profile, alpha, scores)
        pairs = dominance_pairs(profile)
        pairs_checked += len(pairs)
        unfair, _ = count_violations(report, pairs)
        violations += unfair
        if unfair and first_bad is None:
            first_bad = profile
    checks = (
        PropertyCheck(
            "fairness-at-bound",
            violations == 0,
            f"{violations} ordering violations over {pairs_checked} dominance pairs "
            f"({applicable}/{trials} instances applicable)",
            first_bad,
        ),
    )
    return SuiteResult("fairness", trials, seed, checks)


def run_ir_suite(trials: int, seed: int) -> SuiteResult:
    """With alpha at the individual-rationality bound, no share is negative."""
    negatives = 0
    worst_share = np.inf
    first_bad: OpinionProfile | None = None
    for profile in corpus(trials, seed):
        scores = score_matrix(profile)
        report = shares_with_alpha(profile, ir_alpha_bound(profile.params), scores)
        _, negative = count_violations(report, [])
        negatives += negative
        worst_share = min(worst_share, float(report.gamma.min()))
        if negative and first_bad is None:
            first_bad = profile
    checks = (
        PropertyCheck(
            "nonnegative-at-bound",
            negatives == 0,
            f"{negatives} negative shares over {trials} instances; min share = {worst_share:.6f}",
            first_bad,
        ),
    )
    return SuiteResult("ir", trials, seed, checks)


EQUILIBRIUM_SETTINGS = (
    (PriorModel(m=2, a=1.0), 101),
    (PriorModel(m=3, a=1.0), 101),
)


def run_equilibrium_suite(samples: int, seed: int) -> SuiteResult:
    """Truthful margins at n = 101 for two- and three-grade scales.

    Passes when every margin is >= -stderr: truth-telling is a best
    response within Monte-Carlo noise.
    """
    checks = []
    for model, n in EQUILIBRIUM_SETTINGS:
        for t_true in range(1, model.m + 1):
            margin, stderr = best_response_margin(model, n, t_true, samples, seed)
            checks.append(
                PropertyCheck(
                    name=f"margin-m{model.m}-t{t_true}",
                    passed=margin >= -stderr,
                    detail=(
                        f"M={model.m}, a={model.a}, n={n}, t={t_true}: "
                        f"margin = {margin:.6f} +/- {stderr:.6f}"
                    ),
                )
            )
    return SuiteResult("equilibrium", samples, seed, tuple(checks))


SUITES = {
    "budget": run_budget_suite,
    "bounds": run_bounds_suite,
    "fairness": run_fairness_suite,
    "ir": run_ir_suite,
    "equilibrium": run_equilibrium_suite,
}


def run_suite(name: str, trials: int, seed: int) -> SuiteResult:
    if name not in SUITES:
        raise ValueError(f"unknown suite: {name!r}")
    return SUITES[name](trials, seed)
