import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilspec.haar import QuadratureSpec
from nilspec.nilgroup import spectral_params
from nilspec.spectrum import SphericalLabel, make_ball_grid
from nilspec.topology import (
    ConvergenceReport,
    LabelSequence,
    completeness_check,
    completeness_residuals,
    convergence_experiment,
    density_experiment,
    eig_distance,
    sup_distance,
)

MC = QuadratureSpec("montecarlo", 3000, seed=13)
EXACT2 = QuadratureSpec("exact2", 48, seed=13)


def t1(lam_val, l=(0,), p=2, r=0.0):
    return SphericalLabel.type1(p, r, spectral_params([lam_val] + [0.0] * (p // 2 - 1)), l)


def t2(r, p=2):
    return SphericalLabel.type2(p, r)


class TestSupDistance:
    def test_identical(self):
        v = np.array([1 + 1j, 0.5])
        assert sup_distance(v, v) == 0.0

    def test_unit(self):
        assert sup_distance([1.0, 0.0], [0.0, 0.0]) == 1.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            sup_distance([1.0], [1.0, 2.0])

    @given(
        st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False), min_size=1, max_size=8),
        st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False), min_size=1, max_size=8),
        st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False), min_size=1, max_size=8),
    )
    @settings(max_examples=100, deadline=None)
    def test_triangle_inequality(self, a, b, c):
        n = min(len(a), len(b), len(c))
        a, b, c = (np.array(v[:n]) for v in (a, b, c))
        assert sup_distance(a, c) <= sup_distance(a, b) + sup_distance(b, c) + 1e-12


class TestEigDistance:
    def test_identical_labels(self):
        assert eig_distance(t1(1.0), t1(1.0)) == 0.0

    def test_type1_closed_form(self):
        for n_idx in (1, 2, 4, 8):
            a = t1(1.0 + 1.0 / n_idx, (1,))
            b = t1(1.0, (1,))
            l, n_block = 1, 1
            expect = max(1.0 / n_idx, (2 * l + n_block) / n_idx)
            assert eig_distance(a, b) == pytest.approx(expect, rel=1e-12)

    def test_type2(self):
        assert eig_distance(t2(1.0), t2(1.1)) == pytest.approx(0.1, abs=1e-15)

    def test_kind_mismatch(self):
        with pytest.raises(ValueError):
            eig_distance(t1(1.0), t2(1.0))


class TestConvergenceExperiment:
    def test_constant_sequence_all_zero(self):
        grid = make_ball_grid(2, radius=1.5, mesh=1.5)
        seq = LabelSequence(tuple(t1(1.0) for _ in range(6)), t1(1.0))
        report = convergence_experiment(seq, grid, EXACT2)
        assert np.all(report.sup_distances == 0.0)
        assert np.all(report.eig_distances == 0.0)
        assert report.verdict == "consistent_with_iff"

    def test_convergent_sequence(self):
        grid = make_ball_grid(2, radius=2.0, mesh=1.0)
        labels = tuple(t1(1.0 + 2.0**-k) for k in range(1, 11))
        report = convergence_experiment(LabelSequence(labels, t1(1.0)), grid, MC)
        assert report.verdict == "consistent_with_iff"
        assert report.sup_converges and report.eig_converges
        assert report.sup_distances[-1] <= 5 * report.error_floor

    def test_divergent_r_sequence(self):
        grid = make_ball_grid(2, radius=2.0, mesh=1.0)
        labels = tuple(t2(1.0 + (-1.0) ** k) for k in range(1, 11))
        report = convergence_experiment(LabelSequence(labels, t2(1.0)), grid, MC)
        assert report.verdict == "consistent_with_iff"
        assert not report.sup_converges and not report.eig_converges
        assert report.sup_distances[-1] > 10 * report.error_floor

    def test_report_serialization(self, tmp_path):
        grid = make_ball_grid(2, radius=1.5, mesh=1.5)
        seq = LabelSequence(tuple(t1(1.0) for _ in range(6)), t1(1.0))
        report = convergence_experiment(seq, grid, EXACT2)
        csv_path = tmp_path / "report.csv"
        report.to_csv(csv_path)
        lines = csv_path.read_text().strip().splitlines()
        assert lines[0] == "N,sup_distance,eig_distance,err_bar"
        assert len(lines) == 7
        summary = report.to_json_summary()
        assert summary["verdict"] == "consistent_with_iff"

    def test_kind_mismatch_rejected(self):
        with pytest.raises(ValueError):
            LabelSequence((t1(1.0), t2(1.0)), t1(1.0))


class TestCompleteness:
    def test_constant_sequence_certifies(self):
        grid = make_ball_grid(2, radius=1.5, mesh=1.5)
        seq = LabelSequence(tuple(t1(1.0, (1,)) for _ in range(4)), t1(1.0, (1,)))
        residuals, errs = completeness_residuals(seq, grid, EXACT2, pairs=10, seed=3)
        assert np.all(residuals <= 3 * errs)

    def test_convergent_sequence_certifies(self):
        grid = make_ball_grid(2, radius=1.5, mesh=1.5)
        seq = LabelSequence(tuple(t1(1.0 + 2.0**-k) for k in range(1, 9)), t1(1.0))
        value = completeness_check(seq, grid, EXACT2, pairs=10, seed=4)
        _, errs = completeness_residuals(seq, grid, EXACT2, pairs=10, seed=4)
        assert value <= 3 * float(errs.max())

    def test_corrupted_limit_fails(self):
        grid = make_ball_grid(2, radius=1.5, mesh=1.5)
        seq = LabelSequence(tuple(t2(1.0) for _ in range(4)), t2(1.0))
        residuals, errs = completeness_residuals(
            seq, grid, EXACT2, pairs=12, seed=5, corruption=1.5
        )
        assert float((residuals / errs).max()) > 10.0


class TestDensity:
    def test_distances_shrink_with_scale(self):
        grid = make_ball_grid(2, radius=2.0, mesh=1.0)
        scales = [1.0, 0.5, 0.25, 0.125]
        dists = density_experiment(0.0, scales, (0,), grid, MC)
        assert np.all(np.diff(dists) < 0)

    def test_r_one_extended_family(self):
        grid = make_ball_grid(2, radius=2.0, mesh=1.0)
        scales = [1.0, 0.25, 0.0625]
        dists = density_experiment(1.0, scales, (0,), grid, MC)
        assert dists[-1] < dists[0]

    def test_zero_scale_rejected(self):
        grid = make_ball_grid(2, radius=1.0, mesh=1.0)
        with pytest.raises(ValueError):
            density_experiment(0.0, [1.0, 0.0], (0,), grid, MC)
