"""Reduction from the free two-step group to the Heisenberg group, and the
two families of bounded O(p)-spherical functions.

A central parameter with canonical data Lambda induces a projection of
exp(X + A) onto a Heisenberg group of dimension p0: the complex coordinates
are the sqrt(lambda_j / |Lambda|)-weighted pairs of X in the D2-aligned
basis, the central coordinate is the component of A along D2(Lambda)/|Lambda|.
Type-1 spherical functions average a character times a projected Heisenberg
spherical function over O(p); type-2 functions average the character alone.

Sign conventions: the central coordinate is measured with z_inner against
D2(Lambda) built from +J blocks, and the Heisenberg parameter is +|Lambda|.
Flipping either sign permutes the type-1 family without changing any of the
convergence or transform experiments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import heisenberg as hz
from .haar import QuadratureSpec, cached_haar_sample, haar_rule
from .nilgroup import (
    GroupElem,
    LambdaParams,
    SkewZ,
    act,
    bracket,
    canonical_form,
    d2_matrix,
    group_mul,
    skew_dim,
    spectral_params,
)
from .runtime import derived_seed, max_workers, parallel_map

__all__ = [
    "SphericalLabel",
    "QuotientMap",
    "CompactGrid",
    "project_to_heisenberg",
    "type1_spherical",
    "type2_spherical",
    "spherical_values",
    "spherical_residual",
    "spherical_residual_with_err",
    "grid_eval",
    "grid_eval_with_err",
    "make_ball_grid",
    "sample_stabilizer",
]

# Budget split for the nested quadrature inside the functional-equation
# residual when running in Monte Carlo mode.
MC_RESIDUAL_SIDE = 1500
# Nested rule differences understate the fine-rule error when both rules err
# on the same side; error estimates carry this safety factor.
NESTED_SAFETY = 2.5


@dataclass(frozen=True)
class SphericalLabel:
    """A point of the Gelfand spectrum: type1 = (r, Lambda, l), type2 = (r)."""

    kind: str
    p: int
    r: float
    lam: LambdaParams | None = None
    l: tuple | None = None

    def __post_init__(self):
        if self.kind not in ("type1", "type2"):
            raise ValueError(f"unknown label kind {self.kind!r}")
        if self.r < 0:
            raise ValueError("r must be nonnegative")
        if self.kind == "type1":
            if self.lam is None or self.lam.norm <= 0:
                raise ValueError("type1 label requires |Lambda| > 0")
            if self.lam.p_prime != self.p // 2:
                raise ValueError("Lambda length must be floor(p/2)")
            if self.l is None or len(self.l) != self.lam.p1:
                raise ValueError("l must have length p1")
            object.__setattr__(self, "l", tuple(int(v) for v in self.l))

    @classmethod
    def type1(cls, p: int, r: float, lam, l, strict: bool = True) -> "SphericalLabel":
        if not isinstance(lam, LambdaParams):
            lam = spectral_params(lam)
        label = cls("type1", p, float(r), lam, tuple(l))
        # The parameter set requires r = 0 when the vector part is fully
        # paired (2 p0 = p). strict=False admits the extended family used by
        # the density experiment, where these labels appear as limits.
        if strict and 2 * lam.p0 == p and r != 0.0:
            raise ValueError("r must be 0 when 2*p0 = p")
        return label

    @classmethod
    def type2(cls, p: int, r: float) -> "SphericalLabel":
        return cls("type2", p, float(r))

    def h_label(self) -> hz.HSphericalLabel:
        """The projected Heisenberg label: parameter |Lambda|, blocks from the
        multiplicities of Lambda."""
        if self.kind != "type1":
            raise ValueError("only type1 labels project to a Heisenberg label")
        return hz.HSphericalLabel.type1(self.lam.norm, self.l, self.lam.mult)

    def eigenvalues(self) -> np.ndarray:
        """Tracked eigenvalue set: |t_hat|, block sublaplacian values, r."""
        if self.kind == "type1":
            lam_abs = self.lam.norm
            blocks = [
                -lam_abs * (2 * l_j + m_j)
                for l_j, m_j in zip(self.l, self.lam.mult)
            ]
            return np.array([lam_abs, *blocks, self.r])
        return np.array([self.r])


@dataclass(frozen=True)
class QuotientMap:
    """Projection data: canonical Lambda plus the rotation aligning the
    central direction with D2(Lambda)."""

    lam: LambdaParams
    basis_rotation: np.ndarray

    def __post_init__(self):
        k = np.asarray(self.basis_rotation, dtype=float)
        if np.abs(k.T @ k - np.eye(k.shape[0])).max() > 1e-10:
            raise ValueError("basis_rotation must be orthogonal")
        k.flags.writeable = False
        object.__setattr__(self, "basis_rotation", k)

    @classmethod
    def from_central(cls, a: SkewZ) -> "QuotientMap":
        lam, k = canonical_form(a)
        return cls(lam, k)

    @classmethod
    def aligned(cls, lam: LambdaParams, p: int) -> "QuotientMap":
        return cls(lam, np.eye(p))


def project_to_heisenberg(q: QuotientMap, g: GroupElem) -> hz.HeisenbergPoint:
    """Image of exp(X + A) in the Heisenberg quotient.

    z_j = sqrt(lambda_j/|Lambda|) (X_{2j-1} + i X_{2j}) in the aligned basis,
    t = <A_aligned, D2(Lambda)> / |Lambda|. This is a group homomorphism:
    the bracket [X_{2j-1}, X_{2j}] contributes lambda_j/|Lambda| to t, which
    matches the Heisenberg central correction for the weighted coordinates.
    """
    lam = q.lam
    if lam.norm <= 0:
        raise ValueError("projection requires |Lambda| > 0")
    rot = q.basis_rotation
    x = rot.T @ g.x
    a = rot.T @ g.a.matrix @ rot
    lams = lam.nonzero()
    scale = np.sqrt(lams / lam.norm)
    z = scale * (x[0 : 2 * lam.p0 : 2] + 1j * x[1 : 2 * lam.p0 : 2])
    pair_entries = np.array([a[2 * j, 2 * j + 1] for j in range(lam.p0)])
    t = float(np.dot(lams, pair_entries) / lam.norm)
    return hz.HeisenbergPoint(z, t, lam.mult)


# ---------------------------------------------------------------------------
# Batched evaluation kernel


def _elems_to_arrays(elems) -> tuple[np.ndarray, np.ndarray, int]:
    elems = list(elems)
    p = elems[0].p
    x = np.stack([g.x for g in elems])
    amat = np.stack([g.a.matrix for g in elems])
    return x, amat, p


def _integrand_on_nodes(label: SphericalLabel, x, amat, ks, shared_nodes: bool):
    """Integrand values over points x (n,p) and nodes ks ((m,p,p) shared, or
    (n,m,p,p) per point); returns an (n, m) complex array."""
    p = label.p
    if shared_nodes:
        x_rot = np.einsum("mij,nj->nmi", ks, x)
    else:
        x_rot = np.einsum("nmij,nj->nmi", ks, x)
    vals = np.exp(1j * label.r * x_rot[..., p - 1])
    if label.kind == "type2":
        return vals

    lam = label.lam
    lams = lam.nonzero()
    lam_abs = lam.norm
    p0 = lam.p0
    rows_a = ks[..., 0 : 2 * p0 : 2, :]
    rows_b = ks[..., 1 : 2 * p0 : 2, :]
    if shared_nodes:
        pair = np.einsum("mja,nab,mjb->nmj", rows_a, amat, rows_b)
    else:
        pair = np.einsum("nmja,nab,nmjb->nmj", rows_a, amat, rows_b)
    t = pair @ (lams / lam_abs)

    xr = x_rot[..., 0 : 2 * p0 : 2]
    xi = x_rot[..., 1 : 2 * p0 : 2]
    abs2 = (lams / lam_abs) * (xr**2 + xi**2)

    omega = np.exp(1j * lam_abs * t)
    start = 0
    for l_j, m_j in zip(label.l, lam.mult):
        block = abs2[..., start : start + m_j].sum(axis=-1)
        omega = omega * hz.laguerre_q(l_j, m_j, lam_abs * block)
        start += m_j
    return vals * omega


def _values_exact(label, x, amat, spec):
    ks, w, ks_c, w_c = haar_rule(label.p, spec)
    fine = _integrand_on_nodes(label, x, amat, ks, True) @ w
    coarse = _integrand_on_nodes(label, x, amat, ks_c, True) @ w_c
    errs = NESTED_SAFETY * np.abs(fine - coarse) + 1e-14 * (1.0 + np.abs(fine))
    return fine, errs


def _values_mc(label, x, amat, spec, point_offset: int):
    n = x.shape[0]
    vals = np.empty(n, dtype=complex)
    errs = np.empty(n)
    for i in range(n):
        seed_i = derived_seed(spec.seed, point_offset + i)
        ks = cached_haar_sample(label.p, seed_i, spec.nodes)
        raw = _integrand_on_nodes(label, x[i : i + 1], amat[i : i + 1], ks, True)[0]
        mean = raw.mean()
        vals[i] = mean
        errs[i] = math.sqrt(float(np.mean(np.abs(raw - mean) ** 2)) / max(spec.nodes - 1, 1))
    return vals, errs


def spherical_values(label: SphericalLabel, elems, spec: QuadratureSpec, point_offset: int = 0):
    """Spherical function values and error estimates at a batch of points.

    Monte Carlo mode derives an independent seed per point from
    (spec.seed, point_offset + index), so results do not depend on how the
    batch is chunked across workers.
    """
    spec.validate_for(label.p)
    x, amat, p = _elems_to_arrays(elems)
    if p != label.p:
        raise ValueError("points and label have different p")
    if spec.mode == "montecarlo":
        return _values_mc(label, x, amat, spec, point_offset)
    return _values_exact(label, x, amat, spec)


def type1_spherical(label: SphericalLabel, g: GroupElem, spec: QuadratureSpec):
    """Haar average of the character times the projected Heisenberg function."""
    if label.kind != "type1":
        raise ValueError("label must be type1")
    vals, errs = spherical_values(label, [g], spec)
    return complex(vals[0]), float(errs[0])


def type2_spherical(label: SphericalLabel, g: GroupElem, spec: QuadratureSpec):
    """Haar average of the character alone; real up to quadrature error."""
    if label.kind != "type2":
        raise ValueError("label must be type2")
    vals, errs = spherical_values(label, [g], spec)
    return complex(vals[0]), float(errs[0])


# ---------------------------------------------------------------------------
# Grids


@dataclass(frozen=True)
class CompactGrid:
    """Finite evaluation set standing in for a compact subset of the group."""

    points: tuple
    description: str = ""

    def __post_init__(self):
        if len(self.points) == 0:
            raise ValueError("grid must be non-empty")
        object.__setattr__(self, "points", tuple(self.points))

    @property
    def p(self) -> int:
        return self.points[0].p

    def __len__(self):
        return len(self.points)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "description": self.description,
            "points": [
                {"x": g.x.tolist(), "a_upper": g.a.upper.tolist()}
                for g in self.points
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "CompactGrid":
        p = int(doc["p"])
        pts = [
            GroupElem(np.array(item["x"], float), SkewZ(np.array(item["a_upper"], float), p))
            for item in doc["points"]
        ]
        return cls(tuple(pts), doc.get("description", ""))


def make_ball_grid(p: int, radius: float = 3.0, mesh: float = 1.5) -> CompactGrid:
    """Product grid of step `mesh` inside the coordinate ball of the given
    radius (vector and upper-triangle central coordinates jointly)."""
    d = p + skew_dim(p)
    axis = np.arange(-radius, radius + 0.5 * mesh, mesh)
    grids = np.meshgrid(*([axis] * d), indexing="ij")
    coords = np.stack([g.ravel() for g in grids], axis=-1)
    keep = np.linalg.norm(coords, axis=1) <= radius + 1e-12
    coords = coords[keep]
    pts = [GroupElem(c[:p], SkewZ(c[p:], p)) for c in coords]
    return CompactGrid(tuple(pts), f"ball radius {radius}, mesh {mesh}")


def grid_eval(label: SphericalLabel, grid: CompactGrid, spec: QuadratureSpec) -> np.ndarray:
    """Values at all grid points, evaluated in parallel, deterministic per seed."""
    return grid_eval_with_err(label, grid, spec)[0]


def grid_eval_with_err(label: SphericalLabel, grid: CompactGrid, spec: QuadratureSpec):
    pts = list(grid.points)
    chunk = max(1, math.ceil(len(pts) / max_workers()))
    tasks = [(i, pts[i : i + chunk]) for i in range(0, len(pts), chunk)]

    def run(task):
        offset, sub = task
        return spherical_values(label, sub, spec, point_offset=offset)

    parts = parallel_map(run, tasks)
    vals = np.concatenate([v for v, _ in parts])
    errs = np.concatenate([e for _, e in parts])
    return vals, errs


# ---------------------------------------------------------------------------
# Spherical functional equation


def _coset_products(g: GroupElem, h: GroupElem, ks: np.ndarray):
    """Group elements g * (k.h) for a stack of orthogonal matrices."""
    hx = np.einsum("mij,j->mi", ks, h.x)
    ha = np.einsum("mab,bc,mdc->mad", ks, h.a.matrix, ks)
    xw = g.x[None, :] + hx
    br = np.einsum("mi,j->mij", hx, g.x) - np.einsum("i,mj->mij", g.x, hx)
    aw = g.a.matrix[None] + ha + 0.5 * br
    return xw, aw


def _residual_once(label, g, h, ks_out, w_out, ks_in, w_in):
    xw, aw = _coset_products(g, h, ks_out)
    inner = _integrand_on_nodes(label, xw, aw, ks_in, True) @ w_in
    lhs = complex(inner @ w_out)
    xg, ag, _ = _elems_to_arrays([g, h])
    phis = _integrand_on_nodes(label, xg, ag, ks_in, True) @ w_in
    return lhs, complex(phis[0]), complex(phis[1])


def spherical_residual_with_err(
    label: SphericalLabel,
    g: GroupElem,
    h: GroupElem,
    spec: QuadratureSpec,
    scale: float = 1.0,
):
    """Residual of the spherical functional equation, with a propagated error.

    Returns (|scale * int_K phi(g k.h) dk - scale^2 phi(g) phi(h)|, err).
    scale != 1 models a corrupted candidate function scale * phi.
    """
    spec.validate_for(label.p)
    if spec.mode == "montecarlo":
        side = min(spec.nodes, MC_RESIDUAL_SIDE)
        ks_out = cached_haar_sample(label.p, derived_seed(spec.seed, 0), side)
        w_out = np.full(side, 1.0 / side)
        ks_in = cached_haar_sample(label.p, derived_seed(spec.seed, 1), side)
        w_in = np.full(side, 1.0 / side)
        lhs, pg, ph = _residual_once(label, g, h, ks_out, w_out, ks_in, w_in)
        # conservative error: each Haar average carries O(1/sqrt(side)) noise
        err = (1.0 + abs(pg) + abs(ph)) / math.sqrt(side)
        residual = abs(scale * lhs - scale**2 * pg * ph)
        return residual, max(scale, scale**2) * err
    ks, w, ks_c, w_c = haar_rule(label.p, spec)
    lhs, pg, ph = _residual_once(label, g, h, ks, w, ks, w)
    lhs_c, pg_c, ph_c = _residual_once(label, g, h, ks_c, w_c, ks_c, w_c)
    fine = scale * lhs - scale**2 * pg * ph
    coarse = scale * lhs_c - scale**2 * pg_c * ph_c
    err = NESTED_SAFETY * abs(fine - coarse) + 1e-13 * (
        1.0 + abs(scale * lhs) + abs(scale**2 * pg * ph)
    )
    return abs(fine), err


def spherical_residual(label: SphericalLabel, g: GroupElem, h: GroupElem, spec: QuadratureSpec) -> float:
    """|int_K phi(g * k.h) dk - phi(g) phi(h)|."""
    return spherical_residual_with_err(label, g, h, spec)[0]


# ---------------------------------------------------------------------------
# Stabilizer sampling (validation of the block structure of the isotropy group)


def sample_stabilizer(lam: LambdaParams, p: int, rng: np.random.Generator) -> np.ndarray:
    """A random element of the stabilizer of r X_p* + D2(Lambda).

    Built block-diagonally: a realified unitary on each group of equal
    lambdas (these commute with the corresponding J blocks) and a rotation of
    the untouched trailing coordinates that fixes the last basis vector.
    """
    k = np.eye(p)
    start = 0
    for m_j in lam.mult:
        u = _haar_unitary(m_j, rng)
        r = np.zeros((2 * m_j, 2 * m_j))
        r[0::2, 0::2] = u.real
        r[0::2, 1::2] = -u.imag
        r[1::2, 0::2] = u.imag
        r[1::2, 1::2] = u.real
        k[2 * start : 2 * start + 2 * m_j, 2 * start : 2 * start + 2 * m_j] = r
        start += m_j
    tail = p - 2 * lam.p0
    if tail > 1:
        # rotate the trailing coordinates except the last one
        q = _haar_orthogonal(tail - 1, rng)
        k[2 * lam.p0 : p - 1, 2 * lam.p0 : p - 1] = q
    return k


def _haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _haar_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    d = np.sign(np.diagonal(r))
    d[d == 0] = 1.0
    return q * d
