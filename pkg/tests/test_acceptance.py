"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as they
complete. Every tolerance and runtime bound is stated inline.
"""

import math
import time
from itertools import product

import numpy as np
import pytest
from scipy.special import eval_genlaguerre

from nilspec import heisenberg as hz
from nilspec.haar import QuadratureSpec, haar_sample
from nilspec.nilgroup import (
    SkewZ,
    bracket,
    canonical_form,
    d2_matrix,
    group_mul,
    identity_elem,
    random_group_elem,
    skew_dim,
    spectral_params,
    z_inner,
)
from nilspec.spectrum import (
    QuotientMap,
    SphericalLabel,
    make_ball_grid,
    project_to_heisenberg,
    spherical_residual_with_err,
)
from nilspec.topology import LabelSequence, completeness_residuals, density_experiment, eig_distance
from nilspec.experiments import _convergence_sequences, run_convergence
from nilspec.transform import (
    PlancherelSpec,
    TestFunction,
    fourier_property_suite,
    plancherel_verify,
)


def report(criterion: str, passed: bool, detail: str, elapsed: float, limit: float):
    state = "PASS" if passed and elapsed < limit else "FAIL"
    print(f"[{state}] {criterion}: {detail} ({elapsed:.1f}s < {limit:.0f}s)")
    assert passed, f"{criterion}: {detail}"
    assert elapsed < limit, f"{criterion}: runtime {elapsed:.1f}s exceeded {limit}s"


def test_criterion_01_core_identities():
    t0 = time.monotonic()
    worst = 0.0
    rng = np.random.default_rng(101)
    for p in (2, 3, 4):
        xs = rng.standard_normal((1000, p))
        ys = rng.standard_normal((1000, p))
        m = np.einsum("ni,nj->nij", ys, xs) - np.einsum("ni,nj->nij", xs, ys)
        worst = max(worst, float(np.abs(m + m.transpose(0, 2, 1)).max()))
        ks = haar_sample(p, 7 + p, 1000)
        kx = np.einsum("nij,nj->ni", ks, xs)
        ky = np.einsum("nij,nj->ni", ks, ys)
        mk = np.einsum("ni,nj->nij", ky, kx) - np.einsum("ni,nj->nij", kx, ky)
        conj = np.einsum("nab,nbc,ndc->nad", ks, m, ks)
        worst = max(worst, float(np.abs(conj - mk).max()))
        for _ in range(1000):
            a = SkewZ(rng.standard_normal(skew_dim(p)), p)
            x, y = rng.standard_normal((2, p))
            worst = max(worst, abs(z_inner(a, bracket(x, y)) - float(a.matrix @ x @ y)))
        for _ in range(1000):
            g, h, w = (random_group_elem(rng, p) for _ in range(3))
            left = group_mul(group_mul(g, h), w)
            right = group_mul(g, group_mul(h, w))
            worst = max(
                worst,
                float(np.abs(left.x - right.x).max()),
                float(np.abs(left.a.upper - right.a.upper).max()),
            )
    report("criterion 01 core identities", worst <= 1e-10, f"max residual {worst:.2e} <= 1e-10", time.monotonic() - t0, 5.0)


def test_criterion_02_canonical_form():
    t0 = time.monotonic()
    worst_form = 0.0
    worst_eig = 0.0
    rng = np.random.default_rng(102)
    for p in (2, 3, 4, 5, 6):
        for _ in range(200):
            a = SkewZ(rng.standard_normal(skew_dim(p)), p)
            lam, k = canonical_form(a)
            worst_form = max(
                worst_form, float(np.abs(k.T @ a.matrix @ k - d2_matrix(lam, p)).max())
            )
            ev = np.sort(np.abs(np.linalg.eigvals(a.matrix).imag))[::-1][::2][: p // 2]
            worst_eig = max(worst_eig, float(np.abs(np.sort(lam.lambdas)[::-1] - ev).max()))
    passed = worst_form <= 1e-10 and worst_eig <= 1e-10
    report("criterion 02 canonical form", passed, f"form {worst_form:.2e}, eig oracle {worst_eig:.2e} <= 1e-10", time.monotonic() - t0, 10.0)


def test_criterion_03_heisenberg_oracle():
    t0 = time.monotonic()
    ok = True
    detail = []
    worst_gap = 0.0
    for lam, n in product((1.0, -1.0, 2.0, -2.0), (1, 2)):
        for l in range(5):
            label = hz.HSphericalLabel.type1(lam, (l,), (n,))
            for zr in np.linspace(0.0, 3.0, 10):
                z = np.zeros(n, complex)
                z[0] = zr
                for t in np.linspace(-3.0, 3.0, 10):
                    pt = hz.HeisenbergPoint(z, float(t), (n,))
                    closed = hz.type1_value(label, pt)
                    series, bound = hz.type1_series_value(label, pt, 1e-8)
                    gap = abs(closed - series)
                    worst_gap = max(worst_gap, gap / bound)
                    if gap > bound:
                        ok = False
    detail.append(f"series/closed gap <= bound (max ratio {worst_gap:.2e})")
    for n, l in product((1, 2), range(0, 11)):
        for m in range(0, 21):
            s = sum(
                math.comb(l + n - 1, l - j) * 2**j * math.comb(m, j)
                for j in range(0, min(l, m) + 1)
            )
            if s * math.comb(m + n - 1, m) > math.comb(n + l + m - 1, m) * 2**m * math.comb(l + n - 1, l):
                ok = False
            c = hz.block_coeff(l, n, m)
            if c != 0.0 and math.copysign(1.0, c) != (-1.0) ** m:
                ok = False
    detail.append("sign and binomial laws exact to degree 20")
    report("criterion 03 heisenberg oracle", ok, "; ".join(detail), time.monotonic() - t0, 30.0)


def test_criterion_04_eigenvalues():
    t0 = time.monotonic()
    rng = np.random.default_rng(104)
    worst = 0.0
    for i in range(20):
        lam = float(rng.uniform(0.5, 2.5)) * (1 if rng.random() < 0.5 else -1)
        if i % 3 == 2:
            blocks = (1, 2)
            l = (int(rng.integers(0, 4)), int(rng.integers(0, 4)))
        else:
            blocks = (int(rng.integers(1, 3)),)
            l = (int(rng.integers(0, 5)),)
        label = hz.HSphericalLabel.type1(lam, l, blocks)
        worst = max(worst, abs(hz.t_derivative_fd(label, step=1e-4) - 1j * lam) / abs(lam))
        for j, (l_j, n_j) in enumerate(zip(l, blocks)):
            got = hz.sublaplacian_fd(label, j, step=1e-4)
            expect = -abs(lam) * (2 * l_j + n_j)
            worst = max(worst, abs(got - expect) / abs(expect))
    report("criterion 04 eigenvalues", worst <= 1e-6, f"max relative FD error {worst:.2e} <= 1e-6", time.monotonic() - t0, 30.0)


def test_criterion_05_quotient_homomorphism():
    t0 = time.monotonic()
    rng = np.random.default_rng(105)
    worst = 0.0
    for p in (2, 3, 4):
        for _ in range(100):
            lam = spectral_params(np.sort(np.abs(rng.standard_normal(p // 2)))[::-1] + 0.2)
            q = QuotientMap.aligned(lam, p)
            g1, g2 = random_group_elem(rng, p), random_group_elem(rng, p)
            left = project_to_heisenberg(q, group_mul(g1, g2))
            right = hz.h_mul(project_to_heisenberg(q, g1), project_to_heisenberg(q, g2))
            worst = max(worst, float(np.abs(left.z - right.z).max()), abs(left.t - right.t))
    report("criterion 05 quotient homomorphism", worst <= 1e-10, f"max residual {worst:.2e} <= 1e-10", time.monotonic() - t0, 5.0)


def test_criterion_06_spectrum_membership():
    t0 = time.monotonic()
    rng = np.random.default_rng(106)
    ok = True
    worst_ratio = 0.0
    corrupted_best = 0.0
    for p in (2, 3):
        spec = QuadratureSpec("exact2", 64, 1) if p == 2 else QuadratureSpec("exact3", 6, 1)
        scale_pt = 1.0 if p == 2 else 0.7
        for _ in range(10):
            lam = spectral_params(np.sort(np.abs(rng.standard_normal(p // 2)))[::-1] + 0.3)
            r = 0.0 if 2 * lam.p0 == p else float(rng.uniform(0, 1.5))
            l = tuple(int(v) for v in rng.integers(0, 3, size=lam.p1))
            for label in (
                SphericalLabel.type1(p, r, lam, l),
                SphericalLabel.type2(p, float(rng.uniform(0, 2.0))),
            ):
                for _ in range(50):
                    g = random_group_elem(rng, p, scale_pt)
                    h = random_group_elem(rng, p, scale_pt)
                    res, err = spherical_residual_with_err(label, g, h, spec)
                    worst_ratio = max(worst_ratio, res / (3 * err))
                    if res > 3 * err:
                        ok = False
        # corrupted candidate must be detected
        cand = SphericalLabel.type2(p, 1.2)
        res, err = spherical_residual_with_err(cand, identity_elem(p), identity_elem(p), spec, scale=1.5)
        corrupted_best = max(corrupted_best, res / err)
    if corrupted_best <= 10.0:
        ok = False
    report(
        "criterion 06 spectrum membership",
        ok,
        f"max res/(3 err) {worst_ratio:.3f} <= 1; corrupted ratio {corrupted_best:.1e} > 10",
        time.monotonic() - t0,
        300.0,
    )


def test_criterion_07_convergence_iff():
    t0 = time.monotonic()
    result = run_convergence(2, seed=7, budget=20000, length=16)
    ok = all(c.passed for c in result.checks)
    # eigenvalue distances against their closed forms, exactly
    worst_closed = 0.0
    for name, labels, limit, _ in _convergence_sequences(2, 16):
        for label in labels:
            got = eig_distance(label, limit)
            ea, eb = label.eigenvalues(), limit.eigenvalues()
            worst_closed = max(worst_closed, abs(got - float(np.abs(ea - eb).max())))
            if label.kind == "type1":
                lam_a, lam_b = label.lam.norm, limit.lam.norm
                hand = max(
                    abs(lam_a - lam_b),
                    max(
                        abs(lam_a * (2 * la + ma) - lam_b * (2 * lb + mb))
                        for la, ma, lb, mb in zip(label.l, label.lam.mult, limit.l, limit.lam.mult)
                    ),
                    abs(label.r - limit.r),
                )
                worst_closed = max(worst_closed, abs(got - hand))
    ok = ok and worst_closed <= 1e-12
    n_checks = sum(1 for c in result.checks if c.passed)
    report(
        "criterion 07 convergence iff",
        ok,
        f"{n_checks}/{len(result.checks)} sequence checks, eig closed-form gap {worst_closed:.1e} <= 1e-12",
        time.monotonic() - t0,
        600.0,
    )


def test_criterion_08_completeness():
    t0 = time.monotonic()
    spec = QuadratureSpec("exact2", 64, 8)
    grid = make_ball_grid(2, radius=2.0, mesh=1.0)
    ok = True
    worst = 0.0
    for lam_path in (lambda k: 1.0 + 2.0**-k, lambda k: 0.5 + 4.0**-k):
        labels = tuple(
            SphericalLabel.type1(2, 0.0, spectral_params([lam_path(k)]), (0,))
            for k in range(1, 9)
        )
        seq = LabelSequence(labels, SphericalLabel.type1(2, 0.0, spectral_params([lam_path(40)]), (0,)))
        residuals, errs = completeness_residuals(seq, grid, spec, pairs=20, seed=8)
        worst = max(worst, float((residuals / (3 * errs)).max()))
        if np.any(residuals > 3 * errs):
            ok = False
    report("criterion 08 completeness", ok, f"max res/(3 err) {worst:.3f} <= 1 over converged sequences", time.monotonic() - t0, 120.0)


def test_criterion_09_density():
    t0 = time.monotonic()
    spec = QuadratureSpec("montecarlo", 20000, 9)
    grid = make_ball_grid(2, radius=3.0, mesh=1.5)
    scales = [1.0, 0.5, 0.25, 0.125, 0.0625]
    ok = True
    details = []
    for r in (0.0, 1.0):
        dists = density_experiment(r, scales, (0,), grid, spec)
        floor = 3.0 * 2.0 / math.sqrt(spec.nodes)  # conservative MC floor
        chain = all(
            dists[i + 1] < dists[i] or dists[i + 1] <= floor for i in range(len(dists) - 1)
        )
        ok = ok and chain
        details.append(f"r={r}: " + "->".join(f"{d:.3f}" for d in dists))
    report("criterion 09 density approach", ok, "; ".join(details), time.monotonic() - t0, 300.0)


def test_criterion_10_plancherel():
    t0 = time.monotonic()
    result = plancherel_verify(TestFunction("gaussian", 1.0), PlancherelSpec.default(2))
    ok = result.rel_err <= 0.05 and 0.9 <= result.best_fit <= 1.1
    report(
        "criterion 10 plancherel",
        ok,
        f"rel_err {result.rel_err:.4f} <= 0.05, best fit {result.best_fit:.4f} in [0.9, 1.1], "
        f"implied interior constant {result.implied_interior:.5f} (reported)",
        time.monotonic() - t0,
        600.0,
    )


def test_criterion_11_fourier_suite():
    t0 = time.monotonic()
    rep = fourier_property_suite(p=2, gh_nodes=24, parseval_nodes=20)
    ok = (
        rep["linearity"] <= 1e-10
        and rep["l1_bound_margin"] <= 0.0
        and rep["convolution"] <= 1e-5
        and rep["involution"] <= 1e-5
        and rep["translation"] <= 1e-5
        and rep["modulation"] <= 1e-5
        and rep["parseval_rel_err"] <= 0.01
    )
    report(
        "criterion 11 fourier suite",
        ok,
        f"linearity {rep['linearity']:.1e}, conv {rep['convolution']:.1e}, "
        f"parseval {rep['parseval_rel_err']:.1e}",
        time.monotonic() - t0,
        120.0,
    )
