"""Bounded spherical functions on the Heisenberg group for block-unitary
stabilizers U(m_1) x ... x U(m_p1).

Type-1 functions factor over blocks into normalized Laguerre-Gaussian radial
profiles times a central character; type-2 functions are Bessel-type orbit
averages of a Euclidean character. Both admit an invariant power series
whose coefficients obey an alternating sign law and a binomial bound, which
yields a certified geometric truncation error; the closed forms and the
series are kept as independent evaluation routes and tested against each
other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "HeisenbergPoint",
    "HSphericalLabel",
    "EigRecord",
    "h_mul",
    "h_inverse",
    "h_identity",
    "type1_value",
    "type1_series_value",
    "type2_value",
    "eig_record",
    "coeff_bound",
    "block_coeff",
    "block_coeffs",
    "laguerre_q",
    "laguerre_q_all",
    "invariant_p",
    "dim_p",
    "choose_truncation",
    "t_derivative_fd",
    "sublaplacian_fd",
]

LAGUERRE_DEGREE_CAP = 64


@dataclass(frozen=True)
class HeisenbergPoint:
    """(z, t) with z partitioned into blocks of sizes m_1..m_p1."""

    z: np.ndarray
    t: float
    blocks: tuple

    def __post_init__(self):
        z = np.asarray(self.z, dtype=complex)
        if z.ndim != 1:
            raise ValueError("z must be a complex vector")
        if sum(self.blocks) != z.shape[0]:
            raise ValueError("block sizes must sum to len(z)")
        z.flags.writeable = False
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "blocks", tuple(int(b) for b in self.blocks))

    @property
    def p0(self) -> int:
        return self.z.shape[0]

    def block_abs2(self) -> np.ndarray:
        """Squared norms |z_j|^2 of the block components."""
        out = np.empty(len(self.blocks))
        start = 0
        for j, m in enumerate(self.blocks):
            out[j] = float(np.sum(np.abs(self.z[start : start + m]) ** 2))
            start += m
        return out


def h_identity(blocks) -> HeisenbergPoint:
    return HeisenbergPoint(np.zeros(sum(blocks), dtype=complex), 0.0, tuple(blocks))


def h_mul(h: HeisenbergPoint, g: HeisenbergPoint) -> HeisenbergPoint:
    """(z,t)(z',t') = (z+z', t+t' + (1/2) sum Im(z_i conj(z'_i)))."""
    if h.p0 != g.p0 or h.blocks != g.blocks:
        raise ValueError("dimension mismatch in Heisenberg product")
    t = h.t + g.t + 0.5 * float(np.sum(np.imag(h.z * np.conj(g.z))))
    return HeisenbergPoint(h.z + g.z, t, h.blocks)


def h_inverse(h: HeisenbergPoint) -> HeisenbergPoint:
    return HeisenbergPoint(-h.z, -h.t, h.blocks)


@dataclass(frozen=True)
class HSphericalLabel:
    """Spectral label: type1 carries (lambda != 0, l in N^p1), type2 carries omega."""

    kind: str
    blocks: tuple
    lam: float | None = None
    l: tuple | None = None
    omega: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(int(b) for b in self.blocks))
        if self.kind == "type1":
            if self.lam is None or self.lam == 0.0:
                raise ValueError("type1 label requires lambda != 0")
            if self.l is None or len(self.l) != len(self.blocks):
                raise ValueError("type1 label requires l of length p1")
            object.__setattr__(self, "l", tuple(int(v) for v in self.l))
            if any(v < 0 for v in self.l):
                raise ValueError("l must be nonnegative")
        elif self.kind == "type2":
            om = np.zeros(sum(self.blocks), dtype=complex) if self.omega is None else np.asarray(self.omega, dtype=complex)
            if om.shape != (sum(self.blocks),):
                raise ValueError("omega must have length p0")
            om.flags.writeable = False
            object.__setattr__(self, "omega", om)
        else:
            raise ValueError(f"unknown label kind {self.kind!r}")

    @classmethod
    def type1(cls, lam: float, l, blocks) -> "HSphericalLabel":
        return cls("type1", tuple(blocks), lam=float(lam), l=tuple(l))

    @classmethod
    def type2(cls, omega, blocks) -> "HSphericalLabel":
        return cls("type2", tuple(blocks), omega=np.asarray(omega, dtype=complex))

    def omega_block_abs2(self) -> np.ndarray:
        out = np.empty(len(self.blocks))
        start = 0
        for j, m in enumerate(self.blocks):
            out[j] = float(np.sum(np.abs(self.omega[start : start + m]) ** 2))
            start += m
        return out


# ---------------------------------------------------------------------------
# Laguerre machinery


def laguerre_q_all(lmax: int, n: int, u) -> np.ndarray:
    """Normalized profiles q_l(u) for all l = 0..lmax, q_l(0) = 1.

    q_l(u) = L_l^{(n-1)}(u/2) exp(-u/4) / binom(l+n-1, l), evaluated by the
    upward recurrence of the normalized polynomials
        (l+1+a) Q_{l+1} = (2l+a+1-x) Q_l - l Q_{l-1},   a = n - 1.
    """
    if lmax > LAGUERRE_DEGREE_CAP:
        raise ValueError(f"Laguerre degree capped at {LAGUERRE_DEGREE_CAP}")
    u = np.asarray(u, dtype=float)
    x = u / 2.0
    a = n - 1
    out = np.empty((lmax + 1,) + u.shape)
    q_prev = np.ones_like(x)
    out[0] = q_prev
    if lmax >= 1:
        q_cur = 1.0 - x / (a + 1.0)
        out[1] = q_cur
        for l in range(1, lmax):
            q_next = ((2 * l + a + 1 - x) * q_cur - l * q_prev) / (l + 1 + a)
            q_prev, q_cur = q_cur, q_next
            out[l + 1] = q_cur
    return out * np.exp(-u / 4.0)


def laguerre_q(l: int, n: int, u):
    """Single normalized Laguerre-Gaussian profile q_l(u)."""
    return laguerre_q_all(l, n, u)[l]


def dim_p(m: int, n: int) -> int:
    """Dimension of the degree-m holomorphic polynomials on C^n."""
    return math.comb(m + n - 1, m)


def coeff_bound(n: int, r: int, m: int) -> int:
    """Binomial bound on the |delta| = m series eigenvalue for a block of
    size n at Laguerre degree r."""
    if n < 1 or r < 0 or m < 0:
        raise ValueError("need n >= 1, r >= 0, m >= 0")
    return math.comb(n + r + m - 1, m)


def invariant_p(m: int, abs2) -> np.ndarray:
    """The normalized radial invariant |z|^(2m) / (2^m m!) on one block."""
    abs2 = np.asarray(abs2, dtype=float)
    return abs2**m / (2.0**m * math.factorial(m))


def block_coeff(l: int, n: int, m: int) -> float:
    """Series coefficient of one block at lambda = 1 and degree m.

    This is the Taylor coefficient of q_l against the normalized invariants:
    the integer sum below is exact, so the sign (-1)^m is exact as well.
    """
    s = sum(
        math.comb(l + n - 1, l - j) * 2**j * math.comb(m, j)
        for j in range(0, min(l, m) + 1)
    )
    return (-1) ** m * s / (2**m * math.comb(l + n - 1, l))


def block_coeffs(l: int, n: int, max_degree: int) -> np.ndarray:
    return np.array([block_coeff(l, n, m) for m in range(max_degree + 1)])


# ---------------------------------------------------------------------------
# Certified truncation


def _chain_constant(x: float) -> float:
    """max_m x^m / m!, the constant in the geometric tail bound."""
    best = term = 1.0
    m = 0
    while True:
        m += 1
        term *= x / m
        if term > best:
            best = term
        elif m > x:
            return best


def choose_truncation(p0: int, l_total: int, lam_abs: float, z_abs2: float, eps: float):
    """Smallest degree cutoff M whose certified tail bound is below eps.

    The bound follows the binomial-coefficient chain: the degree-m term is at
    most binom(m+p0+|l|-1, m) (|lam| |z|^2 / 2)^m / m!, which telescopes to
    c5 / 2^M with c5 = 2^(p0+|l|) max_m (2 |lam| |z|^2)^m / m!.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    c4 = _chain_constant(2.0 * lam_abs * z_abs2)
    c5 = c4 * 2.0 ** (p0 + l_total)
    if c5 <= eps:
        return 0, c5
    m_cut = max(0, math.ceil(math.log2(c5 / eps)))
    return m_cut, c5 / 2.0**m_cut


# ---------------------------------------------------------------------------
# Evaluation


def _require_kind(label: HSphericalLabel, kind: str):
    if label.kind != kind:
        raise ValueError(f"label must be {kind}, got {label.kind}")


def type1_value(label: HSphericalLabel, h: HeisenbergPoint) -> complex:
    """Closed form: e^(i lambda t) times the product of block profiles
    q_{l_j}(|lambda| |z_j|^2)."""
    _require_kind(label, "type1")
    if label.blocks != h.blocks:
        raise ValueError("label and point have different block structure")
    vals = _type1_radial_batch(label, h.block_abs2()[None, :])
    return complex(np.exp(1j * label.lam * h.t) * vals[0])


def _type1_radial_batch(label: HSphericalLabel, block_abs2: np.ndarray) -> np.ndarray:
    """Product of block profiles for a batch of |z_j|^2 rows (no character)."""
    lam_abs = abs(label.lam)
    out = np.ones(block_abs2.shape[0])
    for j, (l_j, n_j) in enumerate(zip(label.l, label.blocks)):
        out *= laguerre_q(l_j, n_j, lam_abs * block_abs2[:, j])
    return out


def type1_series_value(label: HSphericalLabel, h: HeisenbergPoint, eps: float):
    """Invariant series evaluation with a certified truncation bound.

    Sums e^(i lambda t) sum_{|delta| <= M} |lambda|^{|delta|} c_delta
    p_delta(z) with M chosen so the geometric tail bound is below eps;
    returns (value, bound).
    """
    _require_kind(label, "type1")
    if label.blocks != h.blocks:
        raise ValueError("label and point have different block structure")
    abs2 = h.block_abs2()
    lam_abs = abs(label.lam)
    m_cut, bound = choose_truncation(
        h.p0, sum(label.l), lam_abs, float(abs2.sum()), eps
    )
    total = None
    for j, (l_j, n_j) in enumerate(zip(label.l, label.blocks)):
        coeffs = block_coeffs(l_j, n_j, m_cut)
        series = np.empty(m_cut + 1)
        p_m = 1.0
        for m in range(m_cut + 1):
            series[m] = coeffs[m] * p_m
            p_m *= lam_abs * abs2[j] / (2.0 * (m + 1))
        total = series if total is None else np.convolve(total, series)[: m_cut + 1]
    value = complex(np.exp(1j * label.lam * h.t) * np.sum(total))
    return value, bound


def _type2_block_series(om_abs2: float, z_abs2: float, n: int) -> float:
    """sum_m (-1)^m p_m(omega) p_m(z) / dim(P_m) on one block."""
    total = 0.0
    term = 1.0
    m = 0
    while True:
        total += term
        m += 1
        # ratio of consecutive terms: -(a/2)(b/2) / (m^2 * (m+n-1)/m)
        term *= -(om_abs2 / 2.0) * (z_abs2 / 2.0) / (m * (m + n - 1))
        if m > 8 and abs(term) < 1e-18 * max(1.0, abs(total)):
            return total


def type2_value(label: HSphericalLabel, h: HeisenbergPoint) -> complex:
    """t-independent orbit average, evaluated through the invariant series
    with the sign-alternating eigenvalue coefficients."""
    _require_kind(label, "type2")
    if label.blocks != h.blocks:
        raise ValueError("label and point have different block structure")
    om2 = label.omega_block_abs2()
    z2 = h.block_abs2()
    val = 1.0
    for j, n_j in enumerate(label.blocks):
        val *= _type2_block_series(om2[j], z2[j], n_j)
    return complex(val)


# ---------------------------------------------------------------------------
# Eigenvalue records


@dataclass(frozen=True)
class EigRecord:
    """Eigenvalue data: the central derivative t_hat, the per-block
    sublaplacian eigenvalues, and the series coefficient table."""

    label: HSphericalLabel
    t_hat: complex
    lgamma_hat: np.ndarray
    coeff: dict

    def __post_init__(self):
        arr = np.asarray(self.lgamma_hat, dtype=float)
        arr.flags.writeable = False
        object.__setattr__(self, "lgamma_hat", arr)


def _multi_indices(p1: int, max_degree: int):
    if p1 == 0:
        yield ()
        return
    for first in range(max_degree + 1):
        for rest in _multi_indices(p1 - 1, max_degree - first):
            yield (first,) + rest


def eig_record(label: HSphericalLabel, max_degree: int) -> EigRecord:
    """Assemble eigenvalues and the coefficient table up to |delta| <= max_degree.

    Coefficients are the actual eigenvalue ratios at the label's parameter,
    i.e. they carry the |lambda|^{|delta|} scaling of the type-1 series.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    p1 = len(label.blocks)
    coeff = {}
    if label.kind == "type1":
        lam_abs = abs(label.lam)
        per_block = [
            block_coeffs(l_j, n_j, max_degree)
            for l_j, n_j in zip(label.l, label.blocks)
        ]
        for delta in _multi_indices(p1, max_degree):
            val = lam_abs ** sum(delta)
            for j, d in enumerate(delta):
                val *= per_block[j][d]
            coeff[delta] = val
        t_hat = 1j * label.lam
        lgamma = np.array(
            [-lam_abs * (2 * l_j + n_j) for l_j, n_j in zip(label.l, label.blocks)]
        )
    else:
        om2 = label.omega_block_abs2()
        for delta in _multi_indices(p1, max_degree):
            val = 1.0
            for j, d in enumerate(delta):
                val *= (-1) ** d * invariant_p(d, om2[j]) / dim_p(d, label.blocks[j])
            coeff[delta] = val
        t_hat = 0j
        lgamma = -om2
    return EigRecord(label, t_hat, lgamma, coeff)


# ---------------------------------------------------------------------------
# Finite-difference recovery of eigenvalues (independent of the series)


def _value_fn(label: HSphericalLabel):
    return type1_value if label.kind == "type1" else type2_value


def t_derivative_fd(label: HSphericalLabel, at: HeisenbergPoint | None = None, step: float = 1e-4) -> complex:
    """Central-difference derivative along the center at `at` (default e)."""
    h0 = at if at is not None else h_identity(label.blocks)
    fn = _value_fn(label)
    plus = HeisenbergPoint(np.zeros(h0.p0, complex), step, label.blocks)
    minus = HeisenbergPoint(np.zeros(h0.p0, complex), -step, label.blocks)
    return (fn(label, h_mul(h0, plus)) - fn(label, h_mul(h0, minus))) / (2 * step)


def sublaplacian_fd(
    label: HSphericalLabel,
    block_index: int,
    at: HeisenbergPoint | None = None,
    step: float = 1e-4,
) -> complex:
    """Sum of squared left-invariant horizontal fields over one block.

    Each X^2 is the second derivative along the group curve s -> h exp(sX),
    evaluated by a central second difference; applied to an eigenfunction it
    returns eigenvalue * value(at).
    """
    h0 = at if at is not None else h_identity(label.blocks)
    fn = _value_fn(label)
    p0 = h0.p0
    start = sum(label.blocks[:block_index])
    total = 0.0 + 0.0j
    center = fn(label, h0)
    for i in range(start, start + label.blocks[block_index]):
        for direction in (1.0, 1.0j):
            dz = np.zeros(p0, dtype=complex)
            dz[i] = direction * step
            plus = HeisenbergPoint(dz, 0.0, label.blocks)
            minus = HeisenbergPoint(-dz, 0.0, label.blocks)
            total += (
                fn(label, h_mul(h0, plus)) - 2 * center + fn(label, h_mul(h0, minus))
            ) / step**2
    return total
