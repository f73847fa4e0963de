"""Seeded random-profile generation and the parameter-sweep experiments.

Truthful evaluations are drawn from H = ceil(M * B) with B following the
symmetric, U-shaped Beta(0.5, 0.5) (arcsine) distribution, so most
agents hold extreme opinions.  A predicted distribution is the empirical
frequency vector of n-1 fresh draws from the same law.  Agents always
report truthfully in the sweeps.

Reproducibility contract: every report value is fully determined by
(config, seed).  Trial t at grid point g draws from a counter-based
stream keyed by (seed, g, t), so adding trials or reordering execution
never perturbs earlier trials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .mechanism import compute_shares, count_violations, dominance_pairs
from .profiles import MechanismParams, OpinionProfile, make_profile

GENERATOR_NAME = "numpy.random.Philox"

SWEEP_KINDS = ("m_sweep", "alpha_sweep", "n_sweep", "single")

# Paper-default grids and base parameters for the three experiments.
M_SWEEP_GRID = (2, 5, 7, 10, 25, 50, 75, 100)
ALPHA_SWEEP_GRID = (0.1, 1.0, 5.0, 10.0, 25.0, 50.0, 100.0, 500.0)
N_SWEEP_GRID = (5, 10, 25, 50, 100, 150)
DEFAULT_BASE = MechanismParams(n=100, m=10, v=1000.0, alpha=10.0, epsilon=1e-4)


def generator_id() -> str:
    """Name and version of the pinned bit generator, for output provenance."""
    return f"{GENERATOR_NAME} (numpy {np.__version__})"


def trial_rng(seed: int, grid_index: int, trial: int) -> np.random.Generator:
    """Independent counter-based stream for one (grid point, trial) cell."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(grid_index, trial))
    return np.random.Generator(np.random.Philox(ss))


def sample_evaluation(m: int, rng: np.random.Generator, size=None):
    """Draw grades from H = ceil(m * B), B ~ Beta(0.5, 0.5).

    Uses the exact inverse CDF B = sin^2(pi * U / 2).  U is taken from
    (0, 1] (as 1 minus a [0, 1) uniform), so B is never zero and no
    rejection loop is needed; the final clamp is a belt-and-suspenders
    guard.  Returns a scalar int when ``size`` is None, else an int64
    array of that shape.
    """
    u = 1.0 - rng.random(size)
    b = np.square(np.sin(0.5 * np.pi * u))
    grade = np.clip(np.ceil(m * b), 1, m).astype(np.int64)
    if size is None:
        return int(grade)
    return grade


def grade_distribution(m: int) -> np.ndarray:
    """Closed-form pmf of H: P(H=k) = (2/pi)(asin sqrt(k/m) - asin sqrt((k-1)/m))."""
    edges = (2.0 / np.pi) * np.arcsin(np.sqrt(np.arange(m + 1) / m))
    return np.diff(edges)


def sample_profile(n: int, params: MechanismParams, rng: np.random.Generator) -> OpinionProfile:
    """Random truthful profile: i.i.d. evaluations, fresh-draw predictions.

    Each off-diagonal evaluation is one H draw; each prediction vector is
    the empirical frequency vector of n-1 fresh H draws (independent of
    the realized evaluations).  Stream consumption order is fixed: the
    n*n evaluation block first (diagonal draws discarded), then the
    n*n*(n-1) prediction block row-major.
    """
    if n != params.n:
        raise ValueError(f"n={n} does not match params.n={params.n}")
    m = params.m
    evals = sample_evaluation(m, rng, size=(n, n))
    draws = sample_evaluation(m, rng, size=(n * n, n - 1))
    flat = (np.arange(n * n)[:, None] * m + (draws - 1)).ravel()
    counts = np.bincount(flat, minlength=n * n * m).reshape(n, n, m)
    preds = counts / float(n - 1)
    return make_profile(params, [f"a{i}" for i in range(n)], evals, preds)


@dataclass(frozen=True)
class ExperimentConfig:
    """Sweep specification: what to vary, over what grid, how many trials."""

    kind: str
    grid: tuple[float, ...]
    base: MechanismParams
    trials: int
    seed: int

    def __post_init__(self):
        if self.kind not in SWEEP_KINDS:
            raise ValueError(f"unknown experiment kind: {self.kind!r}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.kind != "single":
            if not self.grid:
                raise ValueError("grid must be non-empty")
            for value in self.grid:
                self._check_grid_value(value)

    def _check_grid_value(self, value):
        if self.kind == "m_sweep":
            if value != int(value) or not 1 <= value <= self.base.v:
                raise ValueError(f"invalid M grid value: {value!r}")
        elif self.kind == "alpha_sweep":
            if value <= 0:
                raise ValueError(f"invalid alpha grid value: {value!r}")
        elif self.kind == "n_sweep":
            if value != int(value) or value < 3:
                raise ValueError(f"invalid n grid value: {value!r}")


@dataclass(frozen=True)
class MSweepRow:
    m: int
    mean_share: float
    std_share: float


@dataclass(frozen=True)
class AlphaSweepRow:
    alpha: float
    unfair_count: int
    negative_count: int


@dataclass(frozen=True)
class NSweepRow:
    n: int
    mean_sum: float
    std_sum: float


@dataclass(frozen=True)
class SingleRow:
    mean_share: float
    std_share: float
    mean_sum: float
    std_sum: float
    unfair_count: int
    negative_count: int


@dataclass(frozen=True)
class ExperimentReport:
    """Aggregated sweep statistics with full seed provenance."""

    kind: str
    rows: tuple
    base: MechanismParams
    trials: int
    seed: int
    generator: str


def _params_for(config: ExperimentConfig, value) -> MechanismParams:
    base = config.base
    if config.kind == "m_sweep":
        return replace(base, m=int(value))
    if config.kind == "alpha_sweep":
        return replace(base, alpha=float(value))
    if config.kind == "n_sweep":
        return replace(base, n=int(value))
    return base


def run_m_sweep(config: ExperimentConfig) -> ExperimentReport:
    """Mean and standard deviation of the pooled shares, per grade scale M.

    Pools the n * trials individual shares at each grid point; the
    standard deviation uses the population formula over the pool.
    """
    if config.kind != "m_sweep":
        raise ValueError(f"expected an m_sweep config, got {config.kind!r}")
    rows = []
    for gi, value in enumerate(config.grid):
        params = _params_for(config, value)
        pool = np.concatenate(
            [
                compute_shares(
                    sample_profile(params.n, params, trial_rng(config.seed, gi, t))
                ).gamma
                for t in range(config.trials)
            ]
        )
        rows.append(MSweepRow(m=int(value), mean_share=float(pool.mean()), std_share=float(pool.std())))
    return _report(config, rows)


def run_alpha_sweep(config: ExperimentConfig) -> ExperimentReport:
    """Cumulative unfair-share and negative-share counts, per alpha.

    For every trial: generate a profile, compute shares, find the
    unanimous-dominance pairs, and count order violations and negative
    shares; counts accumulate over all trials at a grid point.
    """
    if config.kind != "alpha_sweep":
        raise ValueError(f"expected an alpha_sweep config, got {config.kind!r}")
    rows = []
    for gi, value in enumerate(config.grid):
        params = _params_for(config, value)
        unfair_total = 0
        negative_total = 0
        for t in range(config.trials):
            profile = sample_profile(params.n, params, trial_rng(config.seed, gi, t))
            report = compute_shares(profile)
            unfair, negative = count_violations(report, dominance_pairs(profile))
            unfair_total += unfair
            negative_total += negative
        rows.append(
            AlphaSweepRow(alpha=float(value), unfair_count=unfair_total, negative_count=negative_total)
        )
    return _report(config, rows)


def run_n_sweep(config: ExperimentConfig) -> ExperimentReport:
    """Mean and standard deviation of the summed shares, per population size."""
    if config.kind != "n_sweep":
        raise ValueError(f"expected an n_sweep config, got {config.kind!r}")
    rows = []
    for gi, value in enumerate(config.grid):
        params = _params_for(config, value)
        sums = np.array(
            [
                compute_shares(
                    sample_profile(params.n, params, trial_rng(config.seed, gi, t))
                ).gamma.sum()
                for t in range(config.trials)
            ]
        )
        rows.append(NSweepRow(n=int(value), mean_sum=float(sums.mean()), std_sum=float(sums.std())))
    return _report(config, rows)


def run_single(config: ExperimentConfig) -> ExperimentReport:
    """All statistics for repeated runs at the base parameters alone."""
    if config.kind != "single":
        raise ValueError(f"expected a single config, got {config.kind!r}")
    params = config.base
    shares = []
    sums = []
    unfair_total = 0
    negative_total = 0
    for t in range(config.trials):
        profile = sample_profile(params.n, params, trial_rng(config.seed, 0, t))
        report = compute_shares(profile)
        unfair, negative = count_violations(report, dominance_pairs(profile))
        unfair_total += unfair
        negative_total += negative
        shares.append(report.gamma)
        sums.append(report.gamma.sum())
    pool = np.concatenate(shares)
    sums = np.array(sums)
    row = SingleRow(
        mean_share=float(pool.mean()),
        std_share=float(pool.std()),
        mean_sum=float(sums.mean()),
        std_sum=float(sums.std()),
        unfair_count=unfair_total,
        negative_count=negative_total,
    )
    return _report(config, [row])


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    runner = {
        "m_sweep": run_m_sweep,
        "alpha_sweep": run_alpha_sweep,
        "n_sweep": run_n_sweep,
        "single": run_single,
    }[config.kind]
    return runner(config)


def _report(config: ExperimentConfig, rows) -> ExperimentReport:
    return ExperimentReport(
        kind=config.kind,
        rows=tuple(rows),
        base=config.base,
        trials=config.trials,
        seed=config.seed,
        generator=generator_id(),
    )


def paper_config(kind: str, trials: int = 100, seed: int = 0, base: MechanismParams | None = None,
                 grid: tuple[float, ...] | None = None) -> ExperimentConfig:
    """Config preloaded with the published grid and defaults for one sweep."""
    defaults = {
        "m_sweep": M_SWEEP_GRID,
        "alpha_sweep": ALPHA_SWEEP_GRID,
        "n_sweep": N_SWEEP_GRID,
        "single": (),
    }
    if kind not in defaults:
        raise ValueError(f"unknown experiment kind: {kind!r}")
    return ExperimentConfig(
        kind=kind,
        grid=tuple(grid) if grid is not None else defaults[kind],
        base=base if base is not None else DEFAULT_BASE,
        trials=trials,
        seed=seed,
    )
