import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import gaussian_kde

from edenscore.errors import DegenerateDataError
from edenscore.kde import (
    default_iso_proportions,
    evaluate,
    fit_kde,
    grid_evaluate,
    iso_thresholds,
    sample_kde,
)
from edenscore.pointsets import PointSet, bounding_rect, make_toy
from edenscore.rng import make_rng


def _gauss_cloud(n=1000, seed=0):
    rng = make_rng(seed)
    return PointSet(rng.standard_normal((n, 2)), "gauss")


class TestFitKde:
    def test_matches_scipy_gaussian_kde(self):
        # Independent oracle: scipy's Scott-rule KDE uses the same
        # full-covariance kernel with factor n**(-1/6) per axis.
        ps = make_toy("trimodal", 400, 11)
        model = fit_kde(ps)
        ref = gaussian_kde(ps.xy.T)  # scott is the default
        q = make_rng(1).uniform(-5, 6, size=(200, 2))
        ours = evaluate(model, q)
        theirs = ref(q.T)
        assert np.allclose(ours, theirs, rtol=1e-10)

    def test_origin_density_standard_normal(self):
        model = fit_kde(_gauss_cloud(1000, 0))
        val = evaluate(model, np.array([[0.0, 0.0]]))[0]
        target = 1.0 / (2 * np.pi)
        assert abs(val - target) / target < 0.15

    def test_collinear_points_error(self):
        xs = np.arange(10.0)
        with pytest.raises(DegenerateDataError):
            fit_kde(PointSet(np.column_stack([xs, xs])))

    def test_affine_equivariance(self):
        ps = make_toy("dart", 300, 4)
        A = np.array([[1.5, 0.4], [-0.2, 0.9]])
        b = np.array([3.0, -1.0])
        transformed = PointSet(ps.xy @ A.T + b)
        m0 = fit_kde(ps)
        m1 = fit_kde(transformed)
        q = make_rng(2).uniform(-4, 4, size=(50, 2))
        lhs = evaluate(m1, q @ A.T + b) * abs(np.linalg.det(A))
        rhs = evaluate(m0, q)
        assert np.allclose(lhs, rhs, rtol=1e-9)


class TestEvaluate:
    def test_three_point_direct_formula(self):
        ps = PointSet(np.array([[0.0, 0.0], [1.0, 0.5], [0.2, 1.3]]))
        model = fit_kde(ps)
        H = model.bandwidth
        Hinv = np.linalg.inv(H)
        norm = 1.0 / (2 * np.pi * np.sqrt(np.linalg.det(H)))
        q = np.array([0.4, 0.6])
        direct = 0.0
        for src in ps.xy:
            d = q - src
            direct += norm * np.exp(-0.5 * d @ Hinv @ d)
        direct /= len(ps)
        ours = evaluate(model, q[None, :])[0]
        assert abs(ours - direct) < 1e-12 * max(1.0, direct)

    def test_far_point_underflows(self):
        model = fit_kde(_gauss_cloud(100, 3))
        assert evaluate(model, np.array([[500.0, 500.0]]))[0] < 1e-30

    def test_batch_equals_loop(self):
        ps = make_toy("stripes", 200, 9)
        model = fit_kde(ps)
        q = make_rng(4).uniform(-5, 5, size=(500, 2))
        batch = evaluate(model, q)
        loop = np.array([evaluate(model, q[i : i + 1])[0] for i in range(len(q))])
        assert np.array_equal(batch, loop)

    def test_permutation_invariance(self):
        ps = make_toy("trimodal", 150, 8)
        perm = make_rng(5).permutation(len(ps))
        shuffled = PointSet(ps.xy[perm])
        q = make_rng(6).uniform(-4, 5, size=(40, 2))
        a = evaluate(fit_kde(ps), q)
        b = evaluate(fit_kde(shuffled), q)
        assert np.allclose(a, b, rtol=1e-12)


class TestGridEvaluate:
    def test_mass_close_to_one(self):
        ps = make_toy("dart", 400, 1)
        model = fit_kde(ps)
        rect = bounding_rect(ps, margin_frac=1.5)
        grid = grid_evaluate(model, rect, 256, 256)
        mass = grid.values.sum() * grid.cell_area
        assert abs(mass - 1.0) < 0.01

    def test_refinement_stability(self):
        ps = make_toy("trimodal", 300, 2)
        model = fit_kde(ps)
        rect = bounding_rect(ps, margin_frac=1.0)
        m1 = grid_evaluate(model, rect, 128, 128)
        m2 = grid_evaluate(model, rect, 256, 256)
        mass1 = m1.values.sum() * m1.cell_area
        mass2 = m2.values.sum() * m2.cell_area
        assert abs(mass1 - mass2) < 0.005

    def test_far_rect_negligible(self):
        from edenscore.pointsets import BoundingRect

        model = fit_kde(_gauss_cloud(100, 7))
        rect = BoundingRect(200.0, 210.0, 200.0, 210.0)
        grid = grid_evaluate(model, rect, 16, 16)
        assert grid.values.max() < 1e-12

    def test_csv_export(self, tmp_path):
        ps = make_toy("dart", 100, 5)
        model = fit_kde(ps)
        grid = grid_evaluate(model, bounding_rect(ps, margin_frac=0.1), 16, 16)
        out = tmp_path / "grid.csv"
        grid.to_csv(out)
        rows = out.read_text().strip().split("\n")
        assert rows[0] == "x,y,density"
        assert len(rows) == 1 + 16 * 16


class TestIsoThresholds:
    def test_f_zero_boundary(self):
        ps = make_toy("trimodal", 200, 3)
        model = fit_kde(ps)
        grid = grid_evaluate(model, bounding_rect(ps, margin_frac=0.10), 64, 64)
        lt = iso_thresholds(model, grid, [0.0])
        assert lt.density_thresholds[0] <= grid.values.min()

    def test_mass_above_f005_threshold(self):
        # Independent MC check: fraction of KDE samples with density >=
        # t(0.05) should be ~0.95.
        ps = _gauss_cloud(500, 11)
        model = fit_kde(ps)
        grid = grid_evaluate(model, bounding_rect(ps, margin_frac=0.3), 256, 256)
        lt = iso_thresholds(model, grid, [0.05])
        t = lt.density_thresholds[0]
        draws = sample_kde(model, 40_000, 99)
        frac = (evaluate(model, draws) >= t).mean()
        assert abs(frac - 0.95) < 0.01

    def test_default_proportions_and_monotonic_thresholds(self):
        assert np.allclose(default_iso_proportions(5), [0.05, 0.24, 0.43, 0.62, 0.81])
        ps = make_toy("trimodal", 500, 1)
        model = fit_kde(ps)
        grid = grid_evaluate(model, bounding_rect(ps, margin_frac=0.10), 256, 256)
        lt = iso_thresholds(model, grid, list(default_iso_proportions(5)))
        t = np.array(lt.density_thresholds)
        assert np.all(np.diff(t) > 0)

    @given(f1=st.floats(0.02, 0.4), f2=st.floats(0.45, 0.95))
    @settings(max_examples=15, deadline=None)
    def test_threshold_monotone_in_f(self, f1, f2):
        ps = make_toy("dart", 200, 6)
        model = fit_kde(ps)
        grid = grid_evaluate(model, bounding_rect(ps, margin_frac=0.10), 64, 64)
        lt = iso_thresholds(model, grid, [f1, f2])
        assert lt.density_thresholds[0] <= lt.density_thresholds[1]


class TestSampleKde:
    def test_deterministic(self):
        model = fit_kde(make_toy("trimodal", 100, 0))
        a = sample_kde(model, 50, 42)
        b = sample_kde(model, 50, 42)
        assert np.array_equal(a, b)

    def test_moments_match_smoothed_target(self):
        # Smoothed bootstrap has covariance = sample cov + kernel cov.
        ps = _gauss_cloud(800, 13)
        model = fit_kde(ps)
        draws = sample_kde(model, 60_000, 7)
        target_cov = np.cov(ps.xy.T, ddof=1) + model.bandwidth
        got_cov = np.cov(draws.T, ddof=1)
        assert np.allclose(got_cov, target_cov, atol=0.05)
        assert np.allclose(draws.mean(axis=0), ps.xy.mean(axis=0), atol=0.03)
