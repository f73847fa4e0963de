"""Domain types and validation for opinion profiles.

A profile bundles the mechanism parameters, the agent labels, an
evaluation matrix (integer grades agents give each other) and a
prediction tensor (each agent's forecast of the grade distribution its
peers will receive).  Validated profiles are immutable and safe to share
across threads; all math downstream assumes the invariants enforced here.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

# Predictions further off the simplex than this are rejected, never
# renormalized (silent renormalization would mask caller bugs and
# perturb scores).
SIMPLEX_TOL = 1e-9


class ProfileError(ValueError):
    """Raised when profile data violates an invariant.

    Validation is total: ``problems`` lists every violation found, each
    naming the offending index, not just the first one.
    """

    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("invalid profile:\n  " + "\n  ".join(self.problems))


def _param_problems(n, m, v, alpha, epsilon) -> list[str]:
    problems = []
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        problems.append(f"n must be an integer, got {n!r}")
    elif n < 3:
        problems.append(f"n must be >= 3, got {n}")
    if not isinstance(m, (int, np.integer)) or isinstance(m, bool):
        problems.append(f"M must be an integer, got {m!r}")
    else:
        if m < 1:
            problems.append(f"M must be >= 1, got {m}")
        if isinstance(v, (int, float)) and not isinstance(v, bool) and m > v:
            problems.append(f"M must be <= V, got M={m}, V={v}")
    if not isinstance(v, (int, float)) or isinstance(v, bool) or v <= 0:
        problems.append(f"V must be a positive real, got {v!r}")
    if not isinstance(alpha, (int, float)) or isinstance(alpha, bool) or alpha <= 0:
        problems.append(f"alpha must be > 0, got {alpha!r}")
    if (
        not isinstance(epsilon, (int, float))
        or isinstance(epsilon, bool)
        or not 0.0 < epsilon < 1.0
    ):
        problems.append(f"epsilon must lie in (0, 1), got {epsilon!r}")
    return problems


@dataclass(frozen=True)
class MechanismParams:
    """The tuple (n, M, V, alpha, epsilon) governing one sharing instance.

    n        -- number of agents (>= 3)
    m        -- top evaluation grade; grades live in {1..m} (1 <= m <= v)
    v        -- joint reward to be shared (> 0)
    alpha    -- weight of the truth-telling score in the final share (> 0)
    epsilon  -- recalibration coefficient keeping log arguments positive
                (0 < epsilon < 1)
    """

    n: int
    m: int
    v: float
    alpha: float
    epsilon: float

    def __post_init__(self):
        problems = _param_problems(self.n, self.m, self.v, self.alpha, self.epsilon)
        if problems:
            raise ProfileError(problems)


@dataclass(frozen=True, eq=False)
class OpinionProfile:
    """A complete, validated strategy profile.

    ``evaluations`` is an (n, n) int64 array; entry (i, j) is agent i's
    grade for agent j.  ``predictions`` is an (n, n, m) float64 array;
    row (i, j) is agent i's forecast of the grade distribution agent j
    receives.  The diagonal carries no opinion: it is zero padding that
    no public accessor or downstream formula ever reads.  Both arrays
    are read-only; treat a profile as an immutable value.
    """

    params: MechanismParams
    agents: tuple[str, ...]
    evaluations: np.ndarray
    predictions: np.ndarray

    @property
    def n(self) -> int:
        return len(self.agents)

    def evaluation(self, i: int, j: int) -> int:
        """Grade agent i gave agent j.  The diagonal is unaddressable."""
        if i == j:
            raise IndexError(f"no self-evaluation: ({i}, {j})")
        return int(self.evaluations[i, j])

    def prediction(self, i: int, j: int) -> np.ndarray:
        """Agent i's predicted grade distribution for agent j (a copy)."""
        if i == j:
            raise IndexError(f"no self-prediction: ({i}, {j})")
        return self.predictions[i, j].copy()

    def index_of(self, label: str) -> int:
        return self.agents.index(label)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OpinionProfile):
            return NotImplemented
        return (
            self.params == other.params
            and self.agents == other.agents
            and np.array_equal(self.evaluations, other.evaluations)
            and np.array_equal(self.predictions, other.predictions)
        )

    def __hash__(self):
        return hash((self.params, self.agents))


def make_profile(
    params: MechanismParams,
    agents: Sequence[str],
    evaluations: Any,
    predictions: Any,
) -> OpinionProfile:
    """Build and validate a profile from in-memory arrays.

    Diagonal entries of both containers are ignored (they carry no
    opinion) and stored as zero padding.  Everything else is checked
    against the full invariant set; all violations are reported at once.
    """
    n, m = params.n, params.m
    problems = _agent_problems(agents, n)

    evals = np.asarray(evaluations)
    preds = np.asarray(predictions, dtype=np.float64)
    if evals.shape != (n, n):
        problems.append(f"evaluations must be shaped ({n}, {n}), got {evals.shape}")
    if preds.shape != (n, n, m):
        problems.append(f"predictions must be shaped ({n}, {n}, {m}), got {preds.shape}")
    if problems and (evals.shape != (n, n) or preds.shape != (n, n, m)):
        raise ProfileError(problems)

    if not np.issubdtype(evals.dtype, np.integer):
        if np.issubdtype(evals.dtype, np.floating) and np.all(evals == np.floor(evals)):
            evals = evals.astype(np.int64)
        else:
            problems.append("evaluations must be integers")
            raise ProfileError(problems)
    evals = evals.astype(np.int64, copy=True)
    preds = preds.copy()
    off = ~np.eye(n, dtype=bool)
    np.fill_diagonal(evals, 0)
    preds[np.eye(n, dtype=bool)] = 0.0

    bad = off & ((evals < 1) | (evals > m))
    for i, j in zip(*np.nonzero(bad)):
        problems.append(f"evaluation ({i}, {j}): grade {evals[i, j]} outside 1..{m}")

    comp_bad = off & (np.any(preds < 0.0, axis=2) | np.any(preds > 1.0, axis=2))
    for i, j in zip(*np.nonzero(comp_bad)):
        problems.append(
            f"prediction ({i}, {j}): component outside [0, 1]: {preds[i, j].tolist()}"
        )
    sums = preds.sum(axis=2)
    sum_bad = off & (np.abs(sums - 1.0) > SIMPLEX_TOL)
    for i, j in zip(*np.nonzero(sum_bad)):
        problems.append(
            f"prediction ({i}, {j}): sums to {sums[i, j]!r}, off the simplex by "
            f"more than {SIMPLEX_TOL}"
        )

    if problems:
        raise ProfileError(problems)

    evals.setflags(write=False)
    preds.setflags(write=False)
    return OpinionProfile(params, tuple(str(a) for a in agents), evals, preds)


def _agent_problems(agents: Sequence[str], n: int) -> list[str]:
    problems = []
    if len(agents) != n:
        problems.append(f"expected {n} agent labels, got {len(agents)}")
    seen: set[str] = set()
    for idx, label in enumerate(agents):
        if label in seen:
            problems.append(f"duplicate agent label at index {idx}: {label!r}")
        seen.add(label)
    return problems


def validate_profile(raw: Mapping[str, Any] | OpinionProfile) -> OpinionProfile:
    """Validate external profile data and return the immutable profile.

    Accepts either the external mapping form (top-level V, M, alpha,
    epsilon, agents, evaluations, predictions, with ``null`` diagonals)
    or an already-built ``OpinionProfile`` (re-validated; the identical
    object is returned, so validation is idempotent).  Raises
    :class:`ProfileError` listing every violation.
    """
    if isinstance(raw, OpinionProfile):
        rebuilt = make_profile(raw.params, raw.agents, raw.evaluations, raw.predictions)
        if rebuilt != raw:
            raise ProfileError(["diagonal padding is not zero; rebuild via make_profile"])
        return raw
    if not isinstance(raw, Mapping):
        raise TypeError(f"expected a mapping or OpinionProfile, got {type(raw).__name__}")
    return _from_mapping(raw)


def _from_mapping(raw: Mapping[str, Any]) -> OpinionProfile:
    required = ("V", "M", "alpha", "epsilon", "agents", "evaluations", "predictions")
    missing = [k for k in required if k not in raw]
    if missing:
        raise ProfileError([f"missing field: {k}" for k in missing])

    agents = list(raw["agents"])
    n = len(agents)
    problems = _param_problems(n, raw["M"], raw["V"], raw["alpha"], raw["epsilon"])
    if problems:
        # Parameter errors make the grid shapes unreliable; report them alone.
        raise ProfileError(problems)
    params = MechanismParams(
        n=n, m=int(raw["M"]), v=float(raw["V"]), alpha=float(raw["alpha"]), epsilon=float(raw["epsilon"])
    )
    m = params.m

    evaluations = raw["evaluations"]
    predictions = raw["predictions"]
    if len(evaluations) != n or any(len(row) != n for row in evaluations):
        problems.append(f"evaluations must be an {n}x{n} grid")
    if len(predictions) != n or any(len(row) != n for row in predictions):
        problems.append(f"predictions must be an {n}x{n} grid")
    if problems:
        raise ProfileError(problems)

    evals = np.ones((n, n), dtype=np.int64)  # placeholder 1s keep range checks quiet on bad cells
    preds = np.zeros((n, n, m), dtype=np.float64)
    preds[:, :, 0] = 1.0
    for i in range(n):
        for j in range(n):
            cell = evaluations[i][j]
            if i == j:
                if cell is not None:
                    problems.append(f"evaluation ({i}, {j}): self-evaluation must be null")
                continue
            if cell is None:
                problems.append(f"evaluation ({i}, {j}): missing (null off the diagonal)")
            elif not isinstance(cell, (int, np.integer)) or isinstance(cell, bool):
                problems.append(f"evaluation ({i}, {j}): not an integer: {cell!r}")
            else:
                evals[i, j] = cell
    for i in range(n):
        for j in range(n):
            cell = predictions[i][j]
            if i == j:
                if cell is not None:
                    problems.append(f"prediction ({i}, {j}): self-prediction must be null")
                continue
            if cell is None:
                problems.append(f"prediction ({i}, {j}): missing (null off the diagonal)")
                continue
            vec = np.asarray(cell, dtype=np.float64)
            if vec.shape != (m,):
                problems.append(
                    f"prediction ({i}, {j}): expected {m} components, got {list(np.atleast_1d(vec).shape)}"
                )
                continue
            preds[i, j] = vec

    try:
        profile = make_profile(params, agents, evals, preds)
    except ProfileError as err:
        raise ProfileError(problems + err.problems) from None
    if problems:
        raise ProfileError(problems)
    return profile
