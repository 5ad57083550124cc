"""Free two-step nilpotent group of rank p in exponential coordinates.

A group element is exp(X + A) with X a vector of length p and A an
antisymmetric p x p matrix (the center). The orthogonal group O(p) acts by
k.(X, A) = (kX, kAk^T). Central parameters are brought to the canonical
block form D2(Lambda) = diag(lambda_1 J, ..., lambda_p' J, (0)) with
J = [[0, 1], [-1, 0]].

Convention note: the canonical bracket [e1, e2] equals -J as a matrix while
D2 is built from +J blocks. Both signs are fixed here; the Heisenberg
projection in `spectrum` documents its t-coordinate sign against this choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

__all__ = [
    "J2",
    "SkewZ",
    "GroupElem",
    "LambdaParams",
    "bracket",
    "z_inner",
    "group_mul",
    "group_inverse",
    "identity_elem",
    "act",
    "canonical_form",
    "spectral_params",
    "d2_matrix",
    "skew_dim",
    "random_group_elem",
    "is_orthogonal",
]

J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])

# Zero threshold for canonical eigenvalues, relative to the Frobenius norm.
CANONICAL_ZERO_RTOL = 1e-12
# Relative tolerance for grouping near-equal lambdas into multiplicity blocks.
GROUPING_RTOL = 1e-9


def skew_dim(p: int) -> int:
    return p * (p - 1) // 2


def _upper_indices(p: int):
    return np.triu_indices(p, k=1)


class SkewZ:
    """Antisymmetric p x p matrix, stored as its strict upper triangle.

    Storing only the upper triangle makes matrix + matrix^T == 0 exact and
    matches the Lebesgue coordinates used for integration over the center.
    """

    __slots__ = ("upper", "p")

    def __init__(self, upper, p: int):
        upper = np.asarray(upper, dtype=float)
        if upper.shape != (skew_dim(p),):
            raise ValueError(f"upper triangle must have length {skew_dim(p)} for p={p}")
        upper.flags.writeable = False
        self.upper = upper
        self.p = p

    @classmethod
    def zero(cls, p: int) -> "SkewZ":
        return cls(np.zeros(skew_dim(p)), p)

    @classmethod
    def from_matrix(cls, m, rtol: float = 1e-10) -> "SkewZ":
        m = np.asarray(m, dtype=float)
        p = m.shape[0]
        if m.shape != (p, p):
            raise ValueError("matrix must be square")
        scale = max(1.0, float(np.abs(m).max()))
        if np.abs(m + m.T).max() > rtol * scale:
            raise ValueError("matrix is not antisymmetric")
        sym = 0.5 * (m - m.T)
        return cls(sym[_upper_indices(p)], p)

    @property
    def matrix(self) -> np.ndarray:
        i, j = _upper_indices(self.p)
        m = np.zeros((self.p, self.p))
        m[i, j] = self.upper
        m[j, i] = -self.upper
        return m

    def norm(self) -> float:
        """The z_inner norm, i.e. the Euclidean norm of the upper triangle."""
        return float(np.linalg.norm(self.upper))

    def __add__(self, other: "SkewZ") -> "SkewZ":
        self._check(other)
        return SkewZ(self.upper + other.upper, self.p)

    def __sub__(self, other: "SkewZ") -> "SkewZ":
        self._check(other)
        return SkewZ(self.upper - other.upper, self.p)

    def __mul__(self, c: float) -> "SkewZ":
        return SkewZ(self.upper * c, self.p)

    __rmul__ = __mul__

    def __neg__(self) -> "SkewZ":
        return SkewZ(-self.upper, self.p)

    def _check(self, other: "SkewZ"):
        if self.p != other.p:
            raise ValueError("dimension mismatch between antisymmetric matrices")

    def __repr__(self):
        return f"SkewZ(p={self.p}, upper={self.upper})"


@dataclass(frozen=True)
class GroupElem:
    """Point exp(X + A): vector part x, central part a."""

    x: np.ndarray
    a: SkewZ

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        if x.ndim != 1 or x.shape[0] < 2:
            raise ValueError("vector part must be 1-dimensional with p >= 2")
        if x.shape[0] != self.a.p:
            raise ValueError("dimension mismatch between vector and central parts")
        x.flags.writeable = False
        object.__setattr__(self, "x", x)

    @property
    def p(self) -> int:
        return self.x.shape[0]


def identity_elem(p: int) -> GroupElem:
    return GroupElem(np.zeros(p), SkewZ.zero(p))


def bracket(x, y) -> SkewZ:
    """Lie bracket of two generators: the matrix v -> <x,v>y - <y,v>x."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("dimension mismatch in bracket")
    m = np.outer(y, x) - np.outer(x, y)
    p = x.shape[0]
    return SkewZ(m[_upper_indices(p)], p)


def z_inner(a: SkewZ, b: SkewZ) -> float:
    """Scalar product on the center: (1/2) trace(a^T b).

    On brackets it reduces to <x,x'><y,y'> - <x,y'><x',y>, and it satisfies
    <A, [X, Y]> = <A.X, Y>.
    """
    a._check(b)
    return float(np.dot(a.upper, b.upper))


def group_mul(g: GroupElem, h: GroupElem) -> GroupElem:
    """Product in exponential coordinates: the central term picks up half the
    bracket of the vector parts (two-step BCH)."""
    if g.p != h.p:
        raise ValueError("dimension mismatch in group product")
    return GroupElem(g.x + h.x, g.a + h.a + 0.5 * bracket(g.x, h.x))


def group_inverse(g: GroupElem) -> GroupElem:
    return GroupElem(-g.x, -g.a)


def act(k, g: GroupElem) -> GroupElem:
    """Orthogonal automorphism: (X, A) -> (kX, kAk^T)."""
    k = np.asarray(k, dtype=float)
    if k.shape != (g.p, g.p):
        raise ValueError("dimension mismatch in orthogonal action")
    m = k @ g.a.matrix @ k.T
    sym = 0.5 * (m - m.T)
    return GroupElem(k @ g.x, SkewZ(sym[_upper_indices(g.p)], g.p))


def is_orthogonal(k, tol: float = 1e-12) -> bool:
    k = np.asarray(k)
    p = k.shape[0]
    return bool(np.abs(k.T @ k - np.eye(p)).max() <= tol)


@dataclass(frozen=True)
class LambdaParams:
    """Canonical spectral data of a central parameter.

    lambdas are nonincreasing and nonnegative, length p' = floor(p/2);
    p0 counts nonzero entries, mu/mult list the distinct values with their
    multiplicities, norm is the z_inner norm of D2(lambdas).
    """

    lambdas: np.ndarray
    p0: int
    p1: int
    mu: np.ndarray
    mult: tuple
    norm: float

    def __post_init__(self):
        for name in ("lambdas", "mu"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def p_prime(self) -> int:
        return self.lambdas.shape[0]

    @property
    def blocks(self) -> tuple:
        """Block sizes m_1..m_p1 of the stabilizer unitary factors."""
        return self.mult

    def nonzero(self) -> np.ndarray:
        return self.lambdas[: self.p0]


def spectral_params(lambdas) -> LambdaParams:
    """Derive (p0, p1, mu, mult, norm) from a sorted spectrum.

    Values within GROUPING_RTOL * lambda_1 of each other fall in one block;
    values below that threshold count as zero.
    """
    lam = np.asarray(lambdas, dtype=float).copy()
    if lam.ndim != 1:
        raise ValueError("lambdas must be a vector")
    if np.any(lam < 0):
        raise ValueError("lambdas must be nonnegative")
    if np.any(np.diff(lam) > 0):
        raise ValueError("lambdas must be nonincreasing")
    norm = float(np.linalg.norm(lam))
    if lam.size == 0 or lam[0] == 0.0:
        return LambdaParams(lam, 0, 0, np.zeros(0), (), norm)
    tol = GROUPING_RTOL * lam[0]
    p0 = int(np.sum(lam > tol))
    groups = []
    start = 0
    for i in range(1, p0 + 1):
        if i == p0 or lam[start] - lam[i] > tol:
            groups.append((start, i))
            start = i
    mu = np.array([lam[s:e].mean() for s, e in groups])
    mult = tuple(e - s for s, e in groups)
    return LambdaParams(lam, p0, len(groups), mu, mult, norm)


def d2_matrix(lam: LambdaParams | np.ndarray, p: int) -> np.ndarray:
    """The canonical antisymmetric form: diag(lambda_i J) padded with zeros."""
    values = lam.lambdas if isinstance(lam, LambdaParams) else np.asarray(lam, float)
    m = np.zeros((p, p))
    for i, v in enumerate(values):
        m[2 * i, 2 * i + 1] = v
        m[2 * i + 1, 2 * i] = -v
    return m


def canonical_form(a: SkewZ) -> tuple[LambdaParams, np.ndarray]:
    """Orthogonal reduction k with k^T a k = D2(Lambda), Lambda sorted.

    Computed from the real Schur form; eigenvalues below
    CANONICAL_ZERO_RTOL * ||a||_F are treated as zero.
    """
    p = a.p
    m = a.matrix
    fro = float(np.linalg.norm(m))
    if fro == 0.0:
        return spectral_params(np.zeros(p // 2)), np.eye(p)
    thresh = CANONICAL_ZERO_RTOL * fro
    t, q = scipy.linalg.schur(m, output="real")

    pairs = []  # (mu, first column index) for 2x2 rotation blocks
    zeros = []
    i = 0
    while i < p:
        if i + 1 < p and abs(t[i + 1, i]) > thresh:
            mu = 0.5 * (t[i, i + 1] - t[i + 1, i])
            pairs.append((mu, i))
            i += 2
        else:
            zeros.append(i)
            i += 1

    pairs.sort(key=lambda it: -abs(it[0]))
    perm = []
    lambdas = []
    for mu, idx in pairs:
        lambdas.append(abs(mu))
        if mu >= 0:
            perm.extend([idx, idx + 1])
        else:
            perm.extend([idx + 1, idx])  # swapping the pair flips the block sign
    perm.extend(zeros)
    k = q[:, perm]
    lambdas.extend([0.0] * (p // 2 - len(lambdas)))
    return spectral_params(np.array(lambdas)), k


def random_group_elem(rng: np.random.Generator, p: int, scale: float = 1.0) -> GroupElem:
    """Gaussian sample in exponential coordinates, for tests and experiments."""
    x = scale * rng.standard_normal(p)
    a = SkewZ(scale * rng.standard_normal(skew_dim(p)), p)
    return GroupElem(x, a)
