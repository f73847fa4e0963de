"""File formats: profile JSON, report JSON/CSV, experiment CSV/JSON.

JSON carries full double precision and is the authoritative artifact;
CSV rounds real-valued cells to 6 decimal places for hand-off to
plotting tools.  All writers are deterministic: identical inputs yield
byte-identical files.
"""

from __future__ import annotations

import csv
import io as _io
import json
from pathlib import Path
from typing import Any

import numpy as np

from .mechanism import ShareReport
from .profiles import OpinionProfile, validate_profile
from .scoring import ScoreMatrix
from .simulation import ExperimentReport


def profile_to_mapping(profile: OpinionProfile) -> dict[str, Any]:
    """External form of a profile, with explicit null diagonals."""
    n = profile.n
    evaluations = [
        [None if i == j else int(profile.evaluations[i, j]) for j in range(n)]
        for i in range(n)
    ]
    predictions = [
        [None if i == j else [float(v) for v in profile.predictions[i, j]] for j in range(n)]
        for i in range(n)
    ]
    p = profile.params
    return {
        "V": p.v,
        "M": p.m,
        "alpha": p.alpha,
        "epsilon": p.epsilon,
        "agents": list(profile.agents),
        "evaluations": evaluations,
        "predictions": predictions,
    }


def read_profile(path: str | Path) -> OpinionProfile:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return validate_profile(raw)


def write_profile(profile: OpinionProfile, path: str | Path) -> None:
    Path(path).write_text(dumps(profile_to_mapping(profile)), encoding="utf-8")


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _params_mapping(params) -> dict[str, Any]:
    return {"n": params.n, "M": params.m, "V": params.v, "alpha": params.alpha, "epsilon": params.epsilon}


def share_report_to_mapping(report: ShareReport) -> dict[str, Any]:
    return {
        "agents": list(report.agents),
        "chi_bar": [float(v) for v in report.chi_bar],
        "zeta": [float(v) for v in report.zeta],
        "gamma": [float(v) for v in report.gamma],
        "budget_residual": report.budget_residual,
        "params": _params_mapping(report.params),
    }


def share_report_to_csv(report: ShareReport) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["agent", "chi_bar", "zeta", "gamma"])
    for idx, agent in enumerate(report.agents):
        writer.writerow(
            [agent, f"{report.chi_bar[idx]:.6f}", f"{report.zeta[idx]:.6f}", f"{report.gamma[idx]:.6f}"]
        )
    return buf.getvalue()


def score_matrix_to_mapping(scores: ScoreMatrix, agents: tuple[str, ...]) -> dict[str, Any]:
    n = scores.n
    grid = [
        [None if i == j else float(scores.entries[i, j]) for j in range(n)]
        for i in range(n)
    ]
    return {"agents": list(agents), "scores": grid}


def score_matrix_to_csv(scores: ScoreMatrix, agents: tuple[str, ...]) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["evaluator", "target", "score"])
    n = scores.n
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            writer.writerow([agents[i], agents[j], f"{scores.entries[i, j]:.6f}"])
    return buf.getvalue()


# Pinned experiment CSV headers, one layout per sweep kind.
_CSV_COLUMNS = {
    "m_sweep": ("M", "mean_share", "std_share", "trials", "seed"),
    "alpha_sweep": ("alpha", "unfair_count", "negative_count", "trials", "seed"),
    "n_sweep": ("n", "mean_sum", "std_sum", "trials", "seed"),
    "single": ("mean_share", "std_share", "mean_sum", "std_sum", "unfair_count", "negative_count", "trials", "seed"),
}
_ATTR_FOR_COLUMN = {"M": "m"}


def _cell(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.6f}"


def experiment_report_to_csv(report: ExperimentReport) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_COLUMNS[report.kind])
    for row in report.rows:
        record = {**row.__dict__, "trials": report.trials, "seed": report.seed}
        writer.writerow(
            [_cell(record[_ATTR_FOR_COLUMN.get(col, col)]) for col in _CSV_COLUMNS[report.kind]]
        )
    return buf.getvalue()


def experiment_report_to_mapping(report: ExperimentReport) -> dict[str, Any]:
    return {
        "kind": report.kind,
        "rows": [dict(row.__dict__) for row in report.rows],
        "base_params": _params_mapping(report.base),
        "trials": report.trials,
        "seed": report.seed,
        "generator": report.generator,
    }
