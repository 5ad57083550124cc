"""Experiment runner CLI.

Every experiment is a named, seeded, configuration-driven run that writes a
raw CSV, a JSON summary of its pass/fail checks, and a rendered figure next
to them. Exit status 0 means every check of the selected experiment passed.

    nilspec run convergence --p 2 --seed 7 --out results/
    nilspec list --json

A JSON config file may supply any of the flags; explicit flags win. The
NILSPEC_THREADS environment variable caps worker threads.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .experiments import (
    BUDGET_MEANING,
    DEFAULT_BUDGETS,
    EXPERIMENT_THEOREMS,
    run_experiment,
)


@dataclass
class ExperimentConfig:
    experiment: str
    p: int = 2
    seed: int = 0
    budget: int | None = None
    output_dir: str | None = None

    def validate(self):
        if self.experiment not in EXPERIMENT_THEOREMS:
            known = ", ".join(sorted(EXPERIMENT_THEOREMS))
            raise ValueError(f"unknown experiment {self.experiment!r} (known: {known})")
        if self.p < 2:
            raise ValueError("p must be >= 2")
        if self.budget is not None and self.budget <= 0:
            raise ValueError("budget must be positive")
        if not self.output_dir:
            raise ValueError("output_dir is required (flag --out or config output_dir)")


def _config_from_args(args) -> ExperimentConfig:
    file_values = {}
    if args.config:
        with open(args.config) as fh:
            file_values = json.load(fh)
    budgets = file_values.get("budgets") or {}
    merged = ExperimentConfig(
        experiment=args.experiment or file_values.get("experiment", ""),
        p=args.p if args.p is not None else int(file_values.get("p", 2)),
        seed=args.seed if args.seed is not None else int(file_values.get("seed", 0)),
        budget=(
            args.budget
            if args.budget is not None
            else file_values.get("budget", budgets.get(args.experiment))
        ),
        output_dir=args.out or file_values.get("output_dir"),
    )
    return merged


def cmd_run(args) -> int:
    try:
        config = _config_from_args(args)
        config.validate()
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    started = time.time()
    result = run_experiment(config.experiment, config.p, config.seed, config.budget)
    elapsed = time.time() - started

    csv_path = out / f"{config.experiment}.csv"
    summary_path = out / f"{config.experiment}.summary.json"
    fig_path = out / f"{config.experiment}.png"
    result.meta.update(
        {
            "budget": config.budget if config.budget is not None else DEFAULT_BUDGETS[config.experiment],
            "elapsed_seconds": round(elapsed, 3),
            "theorem": EXPERIMENT_THEOREMS[config.experiment],
        }
    )
    result.write_csv(csv_path)
    result.write_summary(summary_path)
    wrote_figure = result.write_figure(fig_path)

    for check in result.checks:
        state = "pass" if check.passed else "FAIL"
        print(
            f"[{state}] {check.name}: {check.measured:.6g} {check.comparator} {check.tolerance:.6g}"
        )
    outputs = [csv_path.name, summary_path.name] + ([fig_path.name] if wrote_figure else [])
    print(f"wrote {', '.join(outputs)} in {out} ({elapsed:.1f}s)")
    return 0 if result.passed else 1


def cmd_list(args) -> int:
    rows = [
        {
            "experiment": name,
            "theorem": EXPERIMENT_THEOREMS[name],
            "default_budget": DEFAULT_BUDGETS[name],
            "budget_meaning": BUDGET_MEANING[name],
        }
        for name in EXPERIMENT_THEOREMS
    ]
    if args.json:
        print(json.dumps(rows, indent=2))
        return 0
    widths = (18, 52, 30)
    print(f"{'experiment':<{widths[0]}} {'exercises':<{widths[1]}} budget (default)")
    for row in rows:
        budget = f"{row['default_budget']} {row['budget_meaning']}"
        print(f"{row['experiment']:<{widths[0]}} {row['theorem']:<{widths[1]}} {budget}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nilspec",
        description="numerical experiments for spherical analysis on the free two-step nilpotent group",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    runp = sub.add_parser("run", help="run one named experiment")
    runp.add_argument("experiment", nargs="?", default=None, help="experiment name (see `nilspec list`)")
    runp.add_argument("--p", type=int, default=None, help="rank of the group (default 2)")
    runp.add_argument("--seed", type=int, default=None, help="root seed (default 0)")
    runp.add_argument("--budget", type=int, default=None, help="experiment budget (see `nilspec list`)")
    runp.add_argument("--out", type=str, default=None, help="output directory")
    runp.add_argument("--config", type=str, default=None, help="JSON config file; flags override it")
    runp.set_defaults(func=cmd_run)

    listp = sub.add_parser("list", help="list experiments, the statements they exercise, and budgets")
    listp.add_argument("--json", action="store_true", help="emit the table as JSON")
    listp.set_defaults(func=cmd_list)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
