"""Command-line surface.

Exit-code contract: 0 on success, 1 on any domain / validation /
property failure (including bad flags), 2 on I/O failure.  Diagnostics
go to stderr; data goes to files or stdout, never mixed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import io as tio
from .example_data import example_profile
from .mechanism import BoundInapplicableError, compute_shares, fairness_alpha_bound, ir_alpha_bound
from .profiles import MechanismParams, ProfileError
from .scoring import score_matrix
from .simulation import DEFAULT_BASE, SWEEP_KINDS, paper_config, run_experiment
from .verify import SUITES, run_suite


class _Parser(argparse.ArgumentParser):
    # Flag problems are validation failures: exit 1, not argparse's default 2.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="truthshare", description="Share a joint reward from subjective peer opinions.")
    sub = parser.add_subparsers(dest="command", required=True)

    share = sub.add_parser("share", help="compute shares for a profile file")
    share.add_argument("--input", required=True, help="profile JSON path")
    share.add_argument("--output", default=None, help="report path (stdout if omitted)")
    share.add_argument("--format", choices=("json", "csv"), default="json")
    share.set_defaults(func=_cmd_share)

    score = sub.add_parser("score", help="compute the pairwise score matrix for a profile file")
    score.add_argument("--input", required=True, help="profile JSON path")
    score.add_argument("--output", default=None, help="score matrix path (stdout if omitted)")
    score.add_argument("--format", choices=("json", "csv"), default="json")
    score.set_defaults(func=_cmd_score)

    bounds = sub.add_parser("bounds", help="print the fairness and IR alpha bounds")
    bounds.add_argument("--n", type=int, required=True, help="number of agents")
    bounds.add_argument("--m", type=int, required=True, help="top evaluation grade")
    bounds.add_argument("--v", type=float, required=True, help="reward")
    bounds.add_argument("--epsilon", type=float, required=True, help="recalibration coefficient")
    bounds.set_defaults(func=_cmd_bounds)

    simulate = sub.add_parser("simulate", help="run a parameter-sweep experiment")
    simulate.add_argument("--experiment", choices=("m", "alpha", "n"), required=True)
    simulate.add_argument("--trials", type=int, default=100)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--out-dir", default=".", help="directory for the CSV and JSON reports")
    simulate.add_argument("--grid", default=None, help="comma-separated grid overriding the default")
    simulate.add_argument("--v", type=float, default=None)
    simulate.add_argument("--m", type=int, default=None)
    simulate.add_argument("--alpha", type=float, default=None)
    simulate.add_argument("--epsilon", type=float, default=None)
    simulate.add_argument("--agents", type=int, default=None, help="population size n")
    simulate.set_defaults(func=_cmd_simulate)

    verify = sub.add_parser("verify", help="run a randomized property suite")
    verify.add_argument("--suite", choices=tuple(SUITES), required=True)
    verify.add_argument("--trials", type=int, default=1000, help="instances (or samples, for equilibrium)")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--out-dir", default=".", help="where counterexamples are written on failure")
    verify.set_defaults(func=_cmd_verify)

    example = sub.add_parser("example", help="write the bundled six-agent example profile")
    example.add_argument("--output", default=None, help="profile path (stdout if omitted)")
    example.set_defaults(func=_cmd_example)

    return parser


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _cmd_share(args) -> int:
    profile = tio.read_profile(args.input)
    report = compute_shares(profile)
    if args.format == "json":
        _emit(tio.dumps(tio.share_report_to_mapping(report)), args.output)
    else:
        _emit(tio.share_report_to_csv(report), args.output)
    return 0


def _cmd_score(args) -> int:
    profile = tio.read_profile(args.input)
    scores = score_matrix(profile)
    if args.format == "json":
        _emit(tio.dumps(tio.score_matrix_to_mapping(scores, profile.agents)), args.output)
    else:
        _emit(tio.score_matrix_to_csv(scores, profile.agents), args.output)
    return 0


def _cmd_bounds(args) -> int:
    params = MechanismParams(n=args.n, m=args.m, v=args.v, alpha=1.0, epsilon=args.epsilon)
    try:
        fairness = f"{fairness_alpha_bound(params):.5e}"
    except BoundInapplicableError:
        fairness = "inapplicable: M > sqrt(n-2)"
    print(f"fairness_alpha_bound: {fairness}")
    print(f"ir_alpha_bound: {ir_alpha_bound(params):.5e}")
    return 0


_EXPERIMENT_KINDS = {"m": "m_sweep", "alpha": "alpha_sweep", "n": "n_sweep"}
_SWEPT_FLAG = {"m": "m", "alpha": "alpha", "n": "agents"}


def _cmd_simulate(args) -> int:
    kind = _EXPERIMENT_KINDS[args.experiment]
    swept = _SWEPT_FLAG[args.experiment]
    if getattr(args, swept) is not None:
        raise ValueError(
            f"--{swept} conflicts with --experiment {args.experiment}: that parameter is swept"
        )
    base = DEFAULT_BASE
    overrides = {"v": args.v, "m": args.m, "alpha": args.alpha, "epsilon": args.epsilon, "n": args.agents}
    base_kwargs = {k: v for k, v in overrides.items() if v is not None}
    if base_kwargs:
        base = MechanismParams(**{**base.__dict__, **base_kwargs})
    grid = None
    if args.grid is not None:
        grid = tuple(float(v) for v in args.grid.split(","))
    config = paper_config(kind, trials=args.trials, seed=args.seed, base=base, grid=grid)
    report = run_experiment(config)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{kind}.csv"
    json_path = out_dir / f"{kind}.json"
    csv_path.write_text(tio.experiment_report_to_csv(report), encoding="utf-8")
    json_path.write_text(tio.dumps(tio.experiment_report_to_mapping(report)), encoding="utf-8")
    print(f"wrote {csv_path} and {json_path}", file=sys.stderr)
    return 0


def _cmd_verify(args) -> int:
    result = run_suite(args.suite, args.trials, args.seed)
    for check in result.checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"{status} {result.suite}/{check.name}: {check.detail}")
    failed = [c for c in result.checks if not c.passed]
    if not failed:
        return 0
    for check in failed:
        if check.counterexample is not None:
            out_dir = Path(args.out_dir)
            out_dir.mkdir(parents=True, exist_ok=True)
            path = out_dir / f"counterexample_{result.suite}.json"
            tio.write_profile(check.counterexample, path)
            print(f"counterexample written to {path}", file=sys.stderr)
            break
    return 1


def _cmd_example(args) -> int:
    profile = example_profile()
    _emit(tio.dumps(tio.profile_to_mapping(profile)), args.output)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # our error() exits 1; --help exits 0
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ProfileError as err:
        print(err, file=sys.stderr)
        return 1
    except OSError as err:
        print(f"I/O error: {err}", file=sys.stderr)
        return 2
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
