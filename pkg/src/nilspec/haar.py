"""Integration over O(p) with normalized Haar measure.

Exact product rules are provided for p = 2 (angle quadrature plus the
reflection coset) and p = 3 (Euler angles with the sin weight plus the -I
coset); larger p falls back to seeded Monte Carlo over QR-sampled
orthogonal matrices. Every estimate carries an error estimate: a nested
rule difference for the exact modes, the standard error for Monte Carlo.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .runtime import derived_rng

__all__ = [
    "QuadratureSpec",
    "haar_sample",
    "haar_integrate",
    "haar_rule",
    "default_spec",
]

DEFAULT_MC_SAMPLES = 20_000
# Error estimates never drop below a few ulps of the result scale: nested
# differences of converged rules would otherwise report implausible zeros.
ERR_FLOOR = 1e-14


@dataclass(frozen=True)
class QuadratureSpec:
    """How to integrate over O(p): mode, per-dimension nodes or MC samples, seed."""

    mode: str
    nodes: int
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("exact2", "exact3", "montecarlo"):
            raise ValueError(f"unknown quadrature mode {self.mode!r}")
        if self.nodes < 1:
            raise ValueError("nodes must be >= 1")

    def validate_for(self, p: int):
        if self.mode == "exact2" and p != 2:
            raise ValueError("exact2 quadrature requires p = 2")
        if self.mode == "exact3" and p != 3:
            raise ValueError("exact3 quadrature requires p = 3")

    def with_seed(self, seed: int) -> "QuadratureSpec":
        return QuadratureSpec(self.mode, self.nodes, seed)


def default_spec(p: int, nodes: int | None = None, seed: int = 0) -> QuadratureSpec:
    """Deterministic rules where cheap, Monte Carlo for general p."""
    if p == 2:
        return QuadratureSpec("exact2", nodes or 64, seed)
    if p == 3:
        return QuadratureSpec("exact3", nodes or 10, seed)
    return QuadratureSpec("montecarlo", nodes or DEFAULT_MC_SAMPLES, seed)


def haar_sample(p: int, seed: int, count: int) -> np.ndarray:
    """i.i.d. Haar samples on O(p), deterministic in the seed.

    QR of a standard Gaussian matrix with the R-diagonal sign correction,
    then a fair coin assigns each sample to the det = +1 or -1 coset.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = derived_rng(seed)
    g = rng.standard_normal((count, p, p))
    q, r = np.linalg.qr(g)
    d = np.sign(np.einsum("nii->ni", r))
    d[d == 0] = 1.0
    q = q * d[:, None, :]
    coin = rng.integers(0, 2, size=count) * 2 - 1
    dets = np.sign(np.linalg.det(q))
    flip = dets != coin
    q[flip, :, 0] *= -1.0  # reflect into the requested coset
    return q


@lru_cache(maxsize=128)
def cached_haar_sample(p: int, seed: int, count: int) -> np.ndarray:
    """haar_sample with a read-only cache, for kernels that revisit the same
    per-point sample stream across many labels."""
    ks = haar_sample(p, seed, count)
    ks.flags.writeable = False
    return ks


def _rotations_2d(theta: np.ndarray) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    ks = np.zeros((theta.size, 2, 2))
    ks[:, 0, 0] = c
    ks[:, 0, 1] = -s
    ks[:, 1, 0] = s
    ks[:, 1, 1] = c
    return ks


def _rule_exact2(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(max(nodes, 1))
    theta = np.pi * (x + 1.0)  # map [-1,1] to [0, 2*pi)
    w = w * np.pi / (2.0 * np.pi)  # normalize the rotation coset to mass 1
    rot = _rotations_2d(theta)
    refl = rot.copy()
    refl[:, 1, :] *= -1.0  # diag(1,-1) @ R(theta)
    ks = np.concatenate([rot, refl])
    weights = 0.5 * np.concatenate([w, w])
    return ks, weights


def _rule_exact3(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    n = max(nodes, 1)
    xa, wa = np.polynomial.legendre.leggauss(n)
    alpha = np.pi * (xa + 1.0)
    wa = wa * np.pi / (2.0 * np.pi)
    u, wu = np.polynomial.legendre.leggauss(n)  # u = cos(beta), exact sin weight
    wu = wu / 2.0
    ca, sa = np.cos(alpha), np.sin(alpha)
    cb = u
    sb = np.sqrt(np.maximum(0.0, 1.0 - u * u))

    # k = Rz(alpha) Ry(beta) Rz(gamma), assembled over the tensor grid
    na = alpha.size
    rz_a = np.zeros((na, 3, 3))
    rz_a[:, 0, 0] = ca
    rz_a[:, 0, 1] = -sa
    rz_a[:, 1, 0] = sa
    rz_a[:, 1, 1] = ca
    rz_a[:, 2, 2] = 1.0
    ry_b = np.zeros((u.size, 3, 3))
    ry_b[:, 0, 0] = cb
    ry_b[:, 0, 2] = sb
    ry_b[:, 1, 1] = 1.0
    ry_b[:, 2, 0] = -sb
    ry_b[:, 2, 2] = cb

    ab = np.einsum("aij,bjk->abik", rz_a, ry_b).reshape(-1, 3, 3)
    abg = np.einsum("mij,cjk->mcik", ab, rz_a).reshape(-1, 3, 3)
    w = (wa[:, None, None] * wu[None, :, None] * wa[None, None, :]).reshape(-1)
    ks = np.concatenate([abg, -abg])  # -I has det -1 for p = 3
    weights = 0.5 * np.concatenate([w, w])
    return ks, weights


@lru_cache(maxsize=64)
def _exact_rule_cached(mode: str, nodes: int):
    ks, w = (_rule_exact2 if mode == "exact2" else _rule_exact3)(nodes)
    for arr in (ks, w):
        arr.flags.writeable = False
    return ks, w


def haar_rule(p: int, spec: QuadratureSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Node/weight pairs for the fine rule and a coarse companion rule.

    The coarse rule halves the node count (exact modes) or uses the first
    half of the sample stream (Monte Carlo); the difference between the two
    estimates drives the error estimate for exact modes.
    """
    spec.validate_for(p)
    if spec.mode in ("exact2", "exact3"):
        ks, w = _exact_rule_cached(spec.mode, spec.nodes)
        ks_c, w_c = _exact_rule_cached(spec.mode, max(1, spec.nodes // 2))
        return ks, w, ks_c, w_c
    ks = cached_haar_sample(p, spec.seed, spec.nodes)
    w = np.full(spec.nodes, 1.0 / spec.nodes)
    half = max(1, spec.nodes // 2)
    return ks, w, ks[:half], np.full(half, 1.0 / half)


def estimate_from_samples(values: np.ndarray, weights: np.ndarray, mc: bool):
    """Weighted mean plus an error estimate (standard error when mc)."""
    mean = complex(np.dot(weights, values))
    if mc:
        n = values.size
        resid = values - mean
        var = float(np.dot(weights, np.abs(resid) ** 2))
        err = float(np.sqrt(var / max(n - 1, 1)))
    else:
        err = 0.0
    return mean, err


def haar_integrate(f, p: int, spec: QuadratureSpec, vectorized: bool = False):
    """Estimate of the Haar integral of f over O(p), with an error estimate.

    O(p) is handled as two SO(p) cosets weighted 1/2 each. `f` maps a p x p
    orthogonal matrix to a scalar; with vectorized=True it must accept a
    stacked (n, p, p) array and return n values.
    """
    ks, w, ks_c, w_c = haar_rule(p, spec)

    def evaluate(mats):
        if vectorized:
            return np.asarray(f(mats), dtype=complex)
        return np.array([f(k) for k in mats], dtype=complex)

    vals = evaluate(ks)
    if spec.mode == "montecarlo":
        mean, err = estimate_from_samples(vals, w, mc=True)
        return mean, err
    mean = complex(np.dot(w, vals))
    coarse = complex(np.dot(w_c, evaluate(ks_c)))
    err = max(abs(mean - coarse), ERR_FLOOR * (1.0 + abs(mean)))
    return mean, err
