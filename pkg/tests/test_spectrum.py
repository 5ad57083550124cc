import json
import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import j0

from nilspec import heisenberg as hz
from nilspec.haar import QuadratureSpec, haar_sample
from nilspec.nilgroup import (
    GroupElem,
    SkewZ,
    act,
    d2_matrix,
    group_mul,
    identity_elem,
    random_group_elem,
    skew_dim,
    spectral_params,
)
from nilspec.spectrum import (
    CompactGrid,
    QuotientMap,
    SphericalLabel,
    grid_eval,
    grid_eval_with_err,
    make_ball_grid,
    project_to_heisenberg,
    sample_stabilizer,
    spherical_residual,
    spherical_residual_with_err,
    type1_spherical,
    type2_spherical,
)

EXACT2 = QuadratureSpec("exact2", 64)
EXACT3 = QuadratureSpec("exact3", 8)


def spec_for(p, seed=0):
    if p == 2:
        return QuadratureSpec("exact2", 64, seed)
    if p == 3:
        return QuadratureSpec("exact3", 8, seed)
    return QuadratureSpec("montecarlo", 6000, seed)


class TestLabels:
    def test_type1_requires_nonzero_lambda(self):
        with pytest.raises(ValueError):
            SphericalLabel.type1(2, 0.0, spectral_params([0.0]), ())

    def test_r_forced_zero_when_fully_paired(self):
        with pytest.raises(ValueError):
            SphericalLabel.type1(2, 1.0, spectral_params([1.0]), (0,))
        # extended family used by the approximation experiment
        label = SphericalLabel.type1(2, 1.0, spectral_params([1.0]), (0,), strict=False)
        assert label.r == 1.0

    def test_r_free_for_odd_p(self):
        label = SphericalLabel.type1(3, 1.3, spectral_params([1.0]), (0,))
        assert label.r == 1.3

    def test_l_length_must_match_p1(self):
        with pytest.raises(ValueError):
            SphericalLabel.type1(4, 0.0, spectral_params([2.0, 1.0]), (0,))

    def test_eigenvalue_vector(self):
        label = SphericalLabel.type1(5, 0.7, spectral_params([2.0, 1.0]), (1, 0))
        lam_abs = label.lam.norm
        expect = [lam_abs, -lam_abs * 3, -lam_abs * 1, 0.7]
        assert np.allclose(label.eigenvalues(), expect)


class TestProjection:
    def test_vector_part_p2(self):
        q = QuotientMap.aligned(spectral_params([1.0]), 2)
        g = GroupElem(np.array([0.4, -0.9]), SkewZ.zero(2))
        h = project_to_heisenberg(q, g)
        assert h.z[0] == pytest.approx(0.4 - 0.9j, abs=0)
        assert h.t == 0.0

    def test_central_part_p2(self):
        q = QuotientMap.aligned(spectral_params([1.0]), 2)
        g = GroupElem(np.zeros(2), SkewZ(np.array([0.7]), 2))
        h = project_to_heisenberg(q, g)
        assert h.t == pytest.approx(0.7, abs=0)
        assert np.abs(h.z).max() == 0.0

    @pytest.mark.parametrize("p", [2, 3, 4, 5])
    def test_homomorphism(self, p):
        rng = np.random.default_rng(30 + p)
        worst = 0.0
        for _ in range(100):
            lam = spectral_params(np.sort(np.abs(rng.standard_normal(p // 2)))[::-1] + 0.2)
            q = QuotientMap.aligned(lam, p)
            g1, g2 = random_group_elem(rng, p), random_group_elem(rng, p)
            left = project_to_heisenberg(q, group_mul(g1, g2))
            right = hz.h_mul(project_to_heisenberg(q, g1), project_to_heisenberg(q, g2))
            worst = max(worst, float(np.abs(left.z - right.z).max()), abs(left.t - right.t))
        assert worst <= 1e-10

    def test_rotated_central_direction(self):
        rng = np.random.default_rng(31)
        a = SkewZ(rng.standard_normal(skew_dim(4)), 4)
        q = QuotientMap.from_central(a)
        g1, g2 = random_group_elem(rng, 4), random_group_elem(rng, 4)
        left = project_to_heisenberg(q, group_mul(g1, g2))
        right = hz.h_mul(project_to_heisenberg(q, g1), project_to_heisenberg(q, g2))
        assert np.abs(left.z - right.z).max() <= 1e-10
        assert abs(left.t - right.t) <= 1e-10

    def test_requires_nonzero_lambda(self):
        q = QuotientMap(spectral_params([0.0]), np.eye(2))
        with pytest.raises(ValueError):
            project_to_heisenberg(q, identity_elem(2))


class TestSphericalValues:
    def test_identity_gives_one(self):
        lam = spectral_params([1.4])
        t1 = SphericalLabel.type1(2, 0.0, lam, (2,))
        t2 = SphericalLabel.type2(2, 1.3)
        assert type1_spherical(t1, identity_elem(2), EXACT2)[0] == pytest.approx(1.0, abs=1e-13)
        assert type2_spherical(t2, identity_elem(2), EXACT2)[0] == pytest.approx(1.0, abs=1e-13)

    def test_type2_p2_bessel(self):
        g = GroupElem(np.array([0.8, -0.5]), SkewZ(np.array([0.7]), 2))
        label = SphericalLabel.type2(2, 1.3)
        v, err = type2_spherical(label, g, EXACT2)
        assert v.real == pytest.approx(j0(1.3 * math.hypot(0.8, 0.5)), abs=3 * err + 1e-12)
        assert abs(v.imag) <= 3 * err + 1e-12

    def test_type2_r_zero_constant(self):
        rng = np.random.default_rng(33)
        label = SphericalLabel.type2(3, 0.0)
        for _ in range(5):
            v, err = type2_spherical(label, random_group_elem(rng, 3), EXACT3)
            assert v == pytest.approx(1.0, abs=1e-12)

    def test_type2_p3_sinc(self):
        rng = np.random.default_rng(34)
        label = SphericalLabel.type2(3, 0.9)
        g = random_group_elem(rng, 3)
        v, err = type2_spherical(label, g, QuadratureSpec("exact3", 14))
        x = 0.9 * float(np.linalg.norm(g.x))
        assert v.real == pytest.approx(math.sin(x) / x, abs=3 * err + 1e-9)

    def test_type1_p2_closed_form(self):
        # rotations fix (|z|, t); the reflection coset conjugates, so the
        # orbit average is cos(lam t) q_l(lam |X|^2)
        lam_val = 1.4
        label = SphericalLabel.type1(2, 0.0, spectral_params([lam_val]), (2,))
        g = GroupElem(np.array([0.8, -0.5]), SkewZ(np.array([0.7]), 2))
        v, err = type1_spherical(label, g, EXACT2)
        ref = math.cos(lam_val * 0.7) * hz.laguerre_q(2, 1, lam_val * (0.8**2 + 0.5**2))
        assert v.real == pytest.approx(ref, abs=3 * err + 1e-12)

    def test_type1_circle_average_oracle(self):
        # independent quadrature of the Heisenberg closed form over the circle
        lam_val = 0.9
        label = SphericalLabel.type1(2, 0.0, spectral_params([lam_val]), (1,))
        g = GroupElem(np.array([1.1, 0.3]), SkewZ(np.array([-0.4]), 2))
        v, err = type1_spherical(label, g, EXACT2)

        def integrand(theta):
            # rotation leaves the profile invariant; reflection sends t -> -t
            prof = hz.laguerre_q(1, 1, lam_val * (1.1**2 + 0.3**2))
            return 0.5 * (
                math.cos(lam_val * -0.4) * prof + math.cos(lam_val * 0.4) * prof
            )

        oracle = quad(integrand, 0.0, 2 * math.pi)[0] / (2 * math.pi)
        assert v.real == pytest.approx(oracle, abs=3 * err + 1e-10)

    @pytest.mark.parametrize("p", [2, 3])
    def test_k_invariance(self, p):
        rng = np.random.default_rng(40 + p)
        spec = spec_for(p)
        lam = spectral_params(np.array([0.9] + [0.0] * (p // 2 - 1)))
        r = 0.0 if 2 * lam.p0 == p else 0.7
        label = SphericalLabel.type1(p, r, lam, (1,))
        g = random_group_elem(rng, p, 0.8)
        k0 = haar_sample(p, 99, 1)[0]
        v1, e1 = type1_spherical(label, g, spec)
        v2, e2 = type1_spherical(label, act(k0, g), spec)
        assert abs(v1 - v2) <= 3 * (e1 + e2)

    def test_values_bounded(self):
        rng = np.random.default_rng(44)
        label = SphericalLabel.type1(2, 0.0, spectral_params([1.0]), (3,))
        grid = make_ball_grid(2, radius=3.0, mesh=1.5)
        vals, errs = grid_eval_with_err(label, grid, EXACT2)
        assert np.all(np.abs(vals) <= 1.0 + 3 * errs)


class TestResidual:
    def test_identity_pair_vanishes(self):
        label = SphericalLabel.type2(2, 1.0)
        res = spherical_residual(label, identity_elem(2), identity_elem(2), EXACT2)
        assert res <= 1e-12

    @pytest.mark.parametrize("p", [2, 3])
    def test_true_labels_satisfy_equation(self, p):
        rng = np.random.default_rng(50 + p)
        spec = spec_for(p)
        lam = spectral_params(np.array([1.1] + [0.0] * (p // 2 - 1)))
        r = 0.0 if 2 * lam.p0 == p else 0.5
        labels = [
            SphericalLabel.type1(p, r, lam, (1,)),
            SphericalLabel.type2(p, 1.2),
        ]
        for label in labels:
            for _ in range(10):
                g = random_group_elem(rng, p, 0.7)
                h = random_group_elem(rng, p, 0.7)
                res, err = spherical_residual_with_err(label, g, h, spec)
                assert res <= 3 * err

    def test_non_spherical_average_fails_equation(self):
        # pointwise average of two type-2 functions with distinct r
        from nilspec.haar import haar_rule
        from nilspec.spectrum import _integrand_on_nodes

        ks, w, _, _ = haar_rule(2, EXACT2)
        la = SphericalLabel.type2(2, 0.0)
        lb = SphericalLabel.type2(2, 3.0)

        def avg_phi(elems):
            xa = np.stack([e.x for e in elems])
            am = np.stack([e.a.matrix for e in elems])
            va = _integrand_on_nodes(la, xa, am, ks, True) @ w
            vb = _integrand_on_nodes(lb, xa, am, ks, True) @ w
            return 0.5 * (va + vb)

        rng = np.random.default_rng(52)
        best = 0.0
        for _ in range(20):
            g = random_group_elem(rng, 2, 1.0)
            h = random_group_elem(rng, 2, 1.0)
            prods = [group_mul(g, act(k, h)) for k in ks]
            lhs = complex(avg_phi(prods) @ w)
            pg, ph = avg_phi([g, h])
            best = max(best, abs(lhs - pg * ph))
        # the error scale of the exact rule is ~1e-13; demand a 10x exceedance
        assert best > 10 * 1e-12

    def test_corrupted_scaling_inflates_residual(self):
        label = SphericalLabel.type2(2, 1.0)
        res, err = spherical_residual_with_err(
            label, identity_elem(2), identity_elem(2), EXACT2, scale=1.5
        )
        assert res == pytest.approx(0.75, abs=1e-10)
        assert res > 10 * err


class TestGrid:
    def test_singleton_identity(self):
        grid = CompactGrid((identity_elem(2),), "singleton")
        label = SphericalLabel.type2(2, 1.1)
        vals = grid_eval(label, grid, EXACT2)
        assert vals.shape == (1,)
        assert vals[0] == pytest.approx(1.0, abs=1e-13)

    def test_deterministic_per_seed(self):
        grid = make_ball_grid(2, radius=2.0, mesh=1.0)
        label = SphericalLabel.type1(2, 0.0, spectral_params([1.0]), (0,))
        spec = QuadratureSpec("montecarlo", 1500, seed=21)
        a = grid_eval(label, grid, spec)
        b = grid_eval(label, grid, spec)
        assert np.array_equal(a, b)

    def test_json_round_trip(self):
        grid = make_ball_grid(3, radius=1.5, mesh=1.5)
        doc = json.loads(json.dumps(grid.to_json()))
        back = CompactGrid.from_json(doc)
        assert back.description == grid.description
        for a, b in zip(grid.points, back.points):
            assert np.array_equal(a.x, b.x)
            assert np.array_equal(a.a.upper, b.a.upper)

    def test_nonempty_required(self):
        with pytest.raises(ValueError):
            CompactGrid((), "empty")


class TestStabilizer:
    @pytest.mark.parametrize("lams,p", [([1.0, 1.0], 4), ([2.0, 1.0], 5), ([1.5, 1.5, 0.0], 7)])
    def test_fixes_orbit_data(self, lams, p):
        rng = np.random.default_rng(60)
        lam = spectral_params(np.array(lams))
        d2 = d2_matrix(lam, p)
        for _ in range(20):
            k = sample_stabilizer(lam, p, rng)
            assert np.abs(k.T @ k - np.eye(p)).max() <= 1e-12
            assert np.abs(k @ d2 @ k.T - d2).max() <= 1e-10
            if 2 * lam.p0 < p:
                xstar = np.zeros(p)
                xstar[p - 1] = 1.0
                assert np.abs(k @ xstar - xstar).max() <= 1e-12
