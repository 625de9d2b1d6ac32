import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edenscore.errors import InputDataError
from edenscore.pointsets import (
    PointSet,
    anscombe,
    bounding_rect,
    load_table,
    make_toy,
    save_table,
)


def _ps(pairs, label=""):
    arr = np.asarray(pairs, dtype=float)
    return PointSet(arr, label)


class TestPointSet:
    def test_minimum_three_points(self):
        with pytest.raises(InputDataError):
            _ps([(0, 0), (1, 1)])

    def test_rejects_nonfinite(self):
        with pytest.raises(InputDataError):
            _ps([(0, 0), (1, np.nan), (2, 2)])
        with pytest.raises(InputDataError):
            _ps([(0, 0), (1, 1), (np.inf, 2)])

    def test_order_preserved_and_immutable(self):
        ps = _ps([(3, 1), (0, 2), (5, 0)])
        assert ps.xy[0, 0] == 3 and ps.xy[2, 1] == 0
        with pytest.raises(ValueError):
            ps.xy[0, 0] = 99.0

    def test_copies_input(self):
        arr = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])
        ps = PointSet(arr)
        arr[0, 0] = 42.0
        assert ps.xy[0, 0] == 0.0


class TestBoundingRect:
    def test_margin_zero(self):
        r = bounding_rect(_ps([(0, 0), (1, 2), (0.5, 1)]), margin_frac=0.0)
        assert (r.x_min, r.x_max, r.y_min, r.y_max) == (0, 1, 0, 2)

    def test_margin_tenth(self):
        r = bounding_rect(_ps([(0, 0), (1, 2), (0.5, 1)]), margin_frac=0.1)
        assert np.allclose([r.x_min, r.x_max, r.y_min, r.y_max], [-0.1, 1.1, -0.2, 2.2])

    def test_union_of_two_sets(self):
        a = _ps([(0, 0), (1, 1), (2, 0)])
        b = _ps([(-1, 0), (3, 1), (0, 2)])
        r = bounding_rect(a, b, margin_frac=0.0)
        assert (r.x_min, r.x_max, r.y_min, r.y_max) == (-1, 3, 0, 2)

    def test_degenerate_axis_errors(self):
        with pytest.raises(InputDataError):
            bounding_rect(_ps([(1, 0), (1, 1), (1, 2)]), margin_frac=0.0)

    @given(
        xs=st.lists(st.floats(-1e6, 1e6), min_size=3, max_size=40),
        ys=st.lists(st.floats(-1e6, 1e6), min_size=3, max_size=40),
        margin=st.floats(0, 2),
    )
    @settings(max_examples=60, deadline=None)
    def test_contains_all_points(self, xs, ys, margin):
        n = min(len(xs), len(ys))
        arr = np.column_stack([xs[:n], ys[:n]])
        if np.ptp(arr[:, 0]) == 0 or np.ptp(arr[:, 1]) == 0:
            return
        ps = PointSet(arr)
        r = bounding_rect(ps, margin_frac=margin)
        assert all(r.contains(x, y) for x, y in arr)


class TestLoadTable:
    def test_three_row_csv(self, tmp_path):
        f = tmp_path / "t.csv"
        f.write_text("x,y\n0,0\n1,1\n2,2\n")
        ps = load_table(f, "x", "y")
        assert np.array_equal(ps.xy, [[0, 0], [1, 1], [2, 2]])

    def test_two_valid_rows_errors(self, tmp_path):
        f = tmp_path / "t.csv"
        f.write_text("x,y\n0,0\n1,1\n")
        with pytest.raises(InputDataError, match="fewer than 3 valid rows"):
            load_table(f, "x", "y")

    def test_malformed_rows_skipped(self, tmp_path):
        f = tmp_path / "t.csv"
        f.write_text("x,y\n0,0\nbad,1\n1,1\n2,\n2,2\n3,nan\n")
        ps = load_table(f, "x", "y")
        assert len(ps) == 3

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputDataError):
            load_table(tmp_path / "absent.csv", "x", "y")

    def test_missing_column(self, tmp_path):
        f = tmp_path / "t.csv"
        f.write_text("a,b\n0,0\n1,1\n2,2\n")
        with pytest.raises(InputDataError, match="missing column"):
            load_table(f, "x", "y")

    def test_tab_delimiter_and_filter(self, tmp_path):
        f = tmp_path / "t.tsv"
        f.write_text("ds\tx\ty\nA\t0\t0\nA\t1\t1\nA\t2\t2\nB\t9\t9\n")
        ps = load_table(f, "x", "y", "\t", "ds", "A")
        assert len(ps) == 3 and ps.xy[:, 0].max() == 2

    def test_round_trip_bit_exact(self, tmp_path):
        ps = make_toy("dart", 50, 3)
        f = tmp_path / "rt.csv"
        save_table(ps, f)
        again = load_table(f, "x", "y")
        assert np.array_equal(ps.xy, again.xy)

    def test_datasaurus_dino_has_142_points(self, datasaurus_path):
        ps = load_table(datasaurus_path, "x", "y", "\t", "dataset", "dino")
        assert len(ps) == 142


class TestAnscombe:
    def test_pearson_r_082_all_four(self):
        for which in ("I", "II", "III", "IV"):
            ps = anscombe(which)
            assert len(ps) == 11
            r = np.corrcoef(ps.x, ps.y)[0, 1]
            assert round(r, 2) == 0.82

    def test_quartet_shared_moments(self):
        # The quartet's defining property: identical first/second moments.
        stats = []
        for which in ("I", "II", "III", "IV"):
            ps = anscombe(which)
            stats.append((ps.x.mean(), ps.y.mean(), ps.x.var(), ps.y.var()))
        base = stats[0]
        assert base[0] == 9.0
        assert abs(base[1] - 7.5) < 0.01
        for other in stats[1:]:
            assert np.allclose(other, base, atol=0.02)

    def test_set_iv_ten_identical_x(self):
        ps = anscombe("IV")
        values, counts = np.unique(ps.x, return_counts=True)
        assert counts.max() == 10

    def test_integer_aliases(self):
        assert np.array_equal(anscombe(1).xy, anscombe("I").xy)

    def test_unknown_name_errors(self):
        with pytest.raises(InputDataError):
            anscombe("V")


class TestMakeToy:
    def test_deterministic(self):
        a = make_toy("trimodal", 3000, 7)
        b = make_toy("trimodal", 3000, 7)
        assert np.array_equal(a.xy, b.xy)

    def test_stripes_five_band_peaks(self):
        ps = make_toy("stripes", 5000, 1)
        # Bands are width 0.4 at centers -4,-2,0,2,4; count mass inside
        # each band and in the gaps between them.
        centers = np.array([-4.0, -2.0, 0.0, 2.0, 4.0])
        for c in centers:
            inside = np.abs(ps.x - c) <= 0.2
            assert inside.sum() > 800  # ~1000 expected per band
        gaps = np.abs(ps.x[:, None] - centers[None, :]).min(axis=1) > 0.21
        assert gaps.sum() == 0

    def test_dart_radii(self):
        ps = make_toy("dart", 4000, 2)
        r = np.hypot(ps.x, ps.y)
        assert (r <= 3.5).mean() >= 0.95
        # ring fraction ~80%
        ring = (r >= 2.5) & (r <= 3.5)
        assert 0.75 < ring.mean() < 0.85

    def test_trimodal_three_modes(self):
        ps = make_toy("trimodal", 3000, 5)
        centers = np.array([[-3.0, 0.0], [3.0, 0.0], [0.0, 4.0]])
        d = np.linalg.norm(ps.xy[:, None, :] - centers[None, :, :], axis=2)
        nearest = d.argmin(axis=1)
        frac = np.bincount(nearest, minlength=3) / len(ps)
        assert np.all(np.abs(frac - 1 / 3) < 0.05)
        assert d.min(axis=1).max() < 4.0  # sigma=0.7: all points near a mode

    def test_n_below_three_errors(self):
        with pytest.raises(InputDataError):
            make_toy("trimodal", 2, 0)

    def test_unknown_kind_errors(self):
        with pytest.raises(InputDataError):
            make_toy("spiral", 100, 0)

    @given(kind=st.sampled_from(["trimodal", "stripes", "dart"]),
           n=st.integers(3, 200), seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_pure_function_of_args(self, kind, n, seed):
        a = make_toy(kind, n, seed)
        b = make_toy(kind, n, seed)
        assert np.array_equal(a.xy, b.xy) and len(a) == n
