"""Reward sharing from subjective peer opinions.

Agents grade each other and predict how their peers will be graded; the
mechanism pays each agent the average of its scaled received grades plus
an alpha-weighted truth-telling score computed with a recalibrated
Bayesian truth serum.  The package provides the scoring and sharing
math, the closed-form fairness and individual-rationality alpha bounds,
seeded simulation sweeps, and a Monte-Carlo check that truthful
reporting is a best response.
"""

from .equilibrium import (
    DeviationRow,
    DeviationTable,
    PriorModel,
    best_response_margin,
    deviation_table,
    expected_score_of_report,
    posterior_prediction,
)
from .example_data import EXAMPLE_PROFILE_MAPPING, example_profile
from .mechanism import (
    BoundInapplicableError,
    DominancePair,
    ShareReport,
    aggregate_received,
    compute_shares,
    count_violations,
    dominance_pairs,
    fairness_alpha_bound,
    ir_alpha_bound,
    scale_evaluations,
    shares_with_alpha,
    truth_scores,
)
from .profiles import (
    SIMPLEX_TOL,
    MechanismParams,
    OpinionProfile,
    ProfileError,
    make_profile,
    validate_profile,
)
from .scoring import (
    ConsensusStats,
    ScoreMatrix,
    bts_score,
    consensus_stats,
    score_bounds,
    score_components,
    score_matrix,
    target_score_sum,
    target_scores,
)
from .simulation import (
    ALPHA_SWEEP_GRID,
    DEFAULT_BASE,
    ExperimentConfig,
    ExperimentReport,
    M_SWEEP_GRID,
    N_SWEEP_GRID,
    generator_id,
    grade_distribution,
    paper_config,
    run_alpha_sweep,
    run_experiment,
    run_m_sweep,
    run_n_sweep,
    run_single,
    sample_evaluation,
    sample_profile,
    trial_rng,
)

__version__ = "0.1.0"

__all__ = [
    "ALPHA_SWEEP_GRID",
    "BoundInapplicableError",
    "ConsensusStats",
    "DEFAULT_BASE",
    "DeviationRow",
    "DeviationTable",
    "DominancePair",
    "EXAMPLE_PROFILE_MAPPING",
    "ExperimentConfig",
    "ExperimentReport",
    "M_SWEEP_GRID",
    "MechanismParams",
    "N_SWEEP_GRID",
    "OpinionProfile",
    "PriorModel",
    "ProfileError",
    "SIMPLEX_TOL",
    "ScoreMatrix",
    "ShareReport",
    "aggregate_received",
    "best_response_margin",
    "bts_score",
    "compute_shares",
    "consensus_stats",
    "count_violations",
    "deviation_table",
    "dominance_pairs",
    "example_profile",
    "expected_score_of_report",
    "fairness_alpha_bound",
    "generator_id",
    "grade_distribution",
    "ir_alpha_bound",
    "make_profile",
    "paper_config",
    "posterior_prediction",
    "run_alpha_sweep",
    "run_experiment",
    "run_m_sweep",
    "run_n_sweep",
    "run_single",
    "sample_evaluation",
    "sample_profile",
    "scale_evaluations",
    "score_bounds",
    "score_components",
    "score_matrix",
    "shares_with_alpha",
    "target_score_sum",
    "target_scores",
    "trial_rng",
    "truth_scores",
    "validate_profile",
]
