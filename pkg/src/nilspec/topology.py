"""Topology experiments on the spectrum: uniform-on-compacta convergence
against eigenvalue convergence, completeness of limits, and the approach of
the type-2 family by shrunk type-1 labels.

"Uniformly on compact sets" is realized as the sup over a fixed finite grid
in a coordinate ball. Verdicts use a trend test (last-half monotonicity plus
final value against the quadrature error floor) rather than asymptotics: a
finite sequence cannot certify a limit, but trends plus closed-form
eigenvalue distances make violations detectable.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import numpy as np

from .haar import QuadratureSpec
from .nilgroup import spectral_params
from .runtime import parallel_map
from .spectrum import (
    CompactGrid,
    SphericalLabel,
    grid_eval_with_err,
    spherical_residual_with_err,
)

__all__ = [
    "LabelSequence",
    "ConvergenceReport",
    "sup_distance",
    "eig_distance",
    "convergence_experiment",
    "completeness_check",
    "density_experiment",
]

# Relative shrink factor below which an exact eigenvalue sequence counts as
# converged in the trend test.
EIG_TREND_RATIO = 0.05


@dataclass(frozen=True)
class LabelSequence:
    labels: tuple
    limit: SphericalLabel

    def __post_init__(self):
        if len(self.labels) == 0:
            raise ValueError("label sequence must be non-empty")
        if any(lab.kind != self.limit.kind for lab in self.labels):
            raise ValueError("all labels must have the kind of the limit")
        object.__setattr__(self, "labels", tuple(self.labels))


@dataclass(frozen=True)
class ConvergenceReport:
    sup_distances: np.ndarray
    eig_distances: np.ndarray
    err_bars: np.ndarray
    verdict: str
    sup_converges: bool
    eig_converges: bool
    error_floor: float

    def __post_init__(self):
        n = len(self.sup_distances)
        if len(self.eig_distances) != n or len(self.err_bars) != n:
            raise ValueError("report vectors must have equal length")

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["N", "sup_distance", "eig_distance", "err_bar"])
            for i in range(len(self.sup_distances)):
                writer.writerow(
                    [
                        i + 1,
                        format(self.sup_distances[i], ".17g"),
                        format(self.eig_distances[i], ".17g"),
                        format(self.err_bars[i], ".17g"),
                    ]
                )

    def to_json_summary(self) -> dict:
        return {
            "verdict": self.verdict,
            "sup_converges": self.sup_converges,
            "eig_converges": self.eig_converges,
            "error_floor": self.error_floor,
            "final_sup_distance": float(self.sup_distances[-1]),
            "final_eig_distance": float(self.eig_distances[-1]),
        }

    def save_json_summary(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json_summary(), fh, indent=2)


def sup_distance(a, b) -> float:
    """max_i |a_i - b_i| for two vectors of values on the same grid."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError("length mismatch in sup_distance")
    return float(np.abs(a - b).max())


def eig_distance(a: SphericalLabel, b: SphericalLabel) -> float:
    """Max difference over the tracked eigenvalue set.

    Type 1 tracks the central derivative magnitude |Lambda|, the block
    sublaplacian values -|Lambda| (2 l_j + m_j), and r; type 2 tracks r only.
    """
    if a.kind != b.kind:
        raise ValueError("labels must have the same kind")
    ea, eb = a.eigenvalues(), b.eigenvalues()
    if ea.shape != eb.shape:
        raise ValueError("labels have different block structure")
    return float(np.abs(ea - eb).max())


def _last_half_nonincreasing(x: np.ndarray, slack: float) -> bool:
    tail = x[len(x) // 2 :]
    return bool(np.all(np.diff(tail) <= slack))


def convergence_experiment(
    seq: LabelSequence, grid: CompactGrid, spec: QuadratureSpec
) -> ConvergenceReport:
    """Sup and eigenvalue distances of a label sequence against its limit.

    The verdict is consistent_with_iff when the two notions of convergence
    agree along the sequence: sup distances shrink to the error floor exactly
    when the tracked eigenvalue distances shrink to zero.
    """
    limit_vals, limit_errs = grid_eval_with_err(seq.limit, grid, spec)

    def one(label):
        vals, errs = grid_eval_with_err(label, grid, spec)
        return (
            sup_distance(vals, limit_vals),
            float(np.max(errs + limit_errs)),
            eig_distance(label, seq.limit),
        )

    rows = parallel_map(one, seq.labels)
    sup = np.array([r[0] for r in rows])
    errs = np.array([r[1] for r in rows])
    eig = np.array([r[2] for r in rows])

    floor = float(errs.max())
    sup_conv = bool(sup[-1] <= 5.0 * floor) and _last_half_nonincreasing(sup, floor)
    eig_scale = float(eig.max(initial=0.0))
    eig_conv = eig[-1] <= max(1e-12, EIG_TREND_RATIO * eig_scale)
    verdict = "consistent_with_iff" if sup_conv == eig_conv else "violation"
    return ConvergenceReport(sup, eig, errs, verdict, sup_conv, eig_conv, floor)


def completeness_check(
    seq: LabelSequence,
    grid: CompactGrid,
    spec: QuadratureSpec,
    pairs: int,
    seed: int = 0,
    corruption: float = 1.0,
) -> float:
    """Certify the limit of a converged sequence by the functional equation.

    The last label stands in for the pointwise limit; the result is the max
    residual of the spherical functional equation over random (g, h) pairs
    drawn inside the grid's coordinate range. corruption != 1 scales the
    candidate function, which breaks the equation and must inflate the
    residual.
    """
    residuals, _ = completeness_residuals(seq, grid, spec, pairs, seed, corruption)
    return float(residuals.max())


def completeness_residuals(
    seq: LabelSequence,
    grid: CompactGrid,
    spec: QuadratureSpec,
    pairs: int,
    seed: int = 0,
    corruption: float = 1.0,
):
    """Residual/error pairs behind completeness_check, for reporting."""
    proxy = seq.labels[-1]
    rng = np.random.default_rng(seed)
    pts = list(grid.points)
    idx = rng.integers(0, len(pts), size=(pairs, 2))

    def one(i):
        return spherical_residual_with_err(
            proxy, pts[idx[i][0]], pts[idx[i][1]], spec, scale=corruption
        )

    rows = parallel_map(one, range(pairs))
    return np.array([r[0] for r in rows]), np.array([r[1] for r in rows])


def density_experiment(
    target_r: float,
    lam_scale_sequence,
    l,
    grid: CompactGrid,
    spec: QuadratureSpec,
    lam0=None,
) -> np.ndarray:
    """Sup distance between shrunk type-1 labels and the type-2 label.

    For each scale s the type-1 label carries Lambda = s * Lambda0 (default
    Lambda0 = (1, 0, ..)) and the fixed r; as s -> 0 the Heisenberg factor
    tends to 1 and the distances decay toward the quadrature floor. Labels
    are built in the extended family (no r = 0 restriction), which is what
    the approximation statement is about.
    """
    scales = np.asarray(lam_scale_sequence, dtype=float)
    if np.any(scales <= 0):
        raise ValueError("scales must be positive (type1 requires |Lambda| > 0)")
    p = grid.p
    if lam0 is None:
        lam0 = np.zeros(p // 2)
        lam0[0] = 1.0
    lam0 = np.asarray(lam0, dtype=float)
    type2 = SphericalLabel.type2(p, target_r)
    base_vals, _ = grid_eval_with_err(type2, grid, spec)

    def one(s):
        label = SphericalLabel.type1(p, target_r, spectral_params(s * lam0), tuple(l), strict=False)
        vals, _ = grid_eval_with_err(label, grid, spec)
        return sup_distance(vals, base_vals)

    return np.array(parallel_map(one, scales))


def grid_error_floor(label: SphericalLabel, grid: CompactGrid, spec: QuadratureSpec) -> float:
    """Max quadrature error estimate over the grid for one label."""
    _, errs = grid_eval_with_err(label, grid, spec)
    return float(errs.max())
