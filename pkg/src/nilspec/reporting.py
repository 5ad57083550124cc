"""CSV/JSON/figure emission for the experiment runner.

CSV cells print floats with 17 significant digits so reruns with the same
config and seed diff byte-identically.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, complex):
        return f"{format(value.real, '.17g')}{'+' if value.imag >= 0 else '-'}{format(abs(value.imag), '.17g')}j"
    return str(value)


@dataclass
class Check:
    """One pass/fail line: a measured quantity against its tolerance."""

    name: str
    measured: float
    tolerance: float
    comparator: str = "<="

    def __post_init__(self):
        self.measured = float(self.measured)
        self.tolerance = float(self.tolerance)

    @property
    def passed(self) -> bool:
        if self.comparator == "<=":
            return self.measured <= self.tolerance
        if self.comparator == ">=":
            return self.measured >= self.tolerance
        raise ValueError(f"unknown comparator {self.comparator!r}")

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "measured": self.measured,
            "tolerance": self.tolerance,
            "comparator": self.comparator,
            "passed": self.passed,
        }


@dataclass
class ExperimentResult:
    name: str
    rows: list
    checks: list
    meta: dict = field(default_factory=dict)
    figure_builder: object = None  # callable(path) -> None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def write_csv(self, path):
        if not self.rows:
            with open(path, "w", newline="") as fh:
                fh.write("")
            return
        columns = list(self.rows[0].keys())
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(columns)
            for row in self.rows:
                writer.writerow([fmt(row[c]) for c in columns])

    def write_summary(self, path):
        doc = {
            "experiment": self.name,
            "passed": self.passed,
            "checks": [c.as_dict() for c in self.checks],
            **self.meta,
        }
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)

    def write_figure(self, path):
        if self.figure_builder is None:
            return False
        self.figure_builder(path)
        return True


def residual_bar_figure(path, names, residuals, tolerances, title):
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    idx = range(len(names))
    floor = 1e-18
    ax.bar(idx, [max(r, floor) for r in residuals], color="#40709c", label="measured")
    ax.plot(idx, tolerances, "r_", markersize=18, label="tolerance")
    ax.set_yscale("log")
    ax.set_xticks(list(idx))
    ax.set_xticklabels(names, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("residual")
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def sequence_figure(path, curves, title, xlabel="N", ylabel="distance"):
    """curves: list of (label, x, y) triples, drawn on a log y-axis."""
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    for label, x, y in curves:
        yy = [max(v, 1e-18) for v in y]
        ax.plot(x, yy, marker="o", markersize=3, linewidth=1.0, label=label)
    ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def scatter_err_figure(path, residuals, errors, title):
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    ax.scatter(errors, residuals, s=12, alpha=0.7)
    lo = min(min(errors), min(residuals)) * 0.5 + 1e-18
    hi = max(max(errors), max(residuals)) * 2 + 1e-18
    xs = [lo, hi]
    ax.plot(xs, [3 * x for x in xs], "r--", linewidth=1, label="3 x error bar")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("propagated error")
    ax.set_ylabel("residual")
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
