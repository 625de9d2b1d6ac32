import xml.etree.ElementTree as ET

import numpy as np
import pytest

from edenscore.contours import ContourPolyline, marching_squares
from edenscore.errors import InputDataError
from edenscore.kde import DensityGrid
from edenscore.pointsets import BoundingRect, bounding_rect, make_toy
from edenscore.render import fit_contours, render_fit, render_svg


def _radial_grid(n=200, half=3.0):
    rect = BoundingRect(-half, half, -half, half)
    xc = rect.x_min + (np.arange(n) + 0.5) * (rect.width / n)
    yc = rect.y_min + (np.arange(n) + 0.5) * (rect.height / n)
    r2 = xc[:, None] ** 2 + yc[None, :] ** 2
    return DensityGrid(rect=rect, nx=n, ny=n, values=np.exp(-r2 / 2.0))


def _bimodal_grid(n=200, half=5.0, sigma=0.8):
    rect = BoundingRect(-half, half, -half, half)
    xc = rect.x_min + (np.arange(n) + 0.5) * (rect.width / n)
    yc = rect.y_min + (np.arange(n) + 0.5) * (rect.height / n)
    x = xc[:, None]
    y = yc[None, :]
    v = np.exp(-((x - 2) ** 2 + y**2) / (2 * sigma**2)) + np.exp(
        -((x + 2) ** 2 + y**2) / (2 * sigma**2)
    )
    return DensityGrid(rect=rect, nx=n, ny=n, values=v)


class TestMarchingSquares:
    def test_radial_level_is_a_circle(self):
        # exp(-r^2/2) = 0.5 at r = sqrt(2 ln 2); one closed loop, radii
        # within 2% of the mean
        grid = _radial_grid()
        polys = marching_squares(grid, [0.5])
        assert len(polys) == 1
        poly = polys[0]
        assert poly.closed
        radii = np.hypot(poly.vertices[:, 0], poly.vertices[:, 1])
        assert np.all(np.abs(radii - radii.mean()) / radii.mean() < 0.02)
        assert radii.mean() == pytest.approx(np.sqrt(2 * np.log(2)), rel=0.01)

    def test_level_above_max_empty(self):
        grid = _radial_grid()
        assert marching_squares(grid, [2.0]) == []

    def test_level_below_min_empty(self):
        grid = _radial_grid()
        assert marching_squares(grid, [-1.0]) == []

    def test_bimodal_low_one_high_two(self):
        # the saddle between the peaks sits near 0.088; below it the region
        # is connected, above it the two peaks separate
        grid = _bimodal_grid()
        low = marching_squares(grid, [0.05])
        high = marching_squares(grid, [0.5])
        assert len(low) == 1 and low[0].closed
        assert len(high) == 2 and all(p.closed for p in high)

    def test_multiple_levels_concatenate(self):
        grid = _bimodal_grid()
        both = marching_squares(grid, [0.05, 0.5])
        assert len(both) == 3
        assert sorted({p.level for p in both}) == [0.05, 0.5]

    def test_closed_polylines_repeat_endpoint(self):
        ps = make_toy("trimodal", 300, 1)
        rect = bounding_rect(ps, margin_frac=0.10)
        polys = fit_contours(ps, rect)
        assert polys
        for poly in polys:
            if poly.closed:
                assert np.array_equal(poly.vertices[0], poly.vertices[-1])

    def test_determinism(self):
        grid = _bimodal_grid()
        a = marching_squares(grid, [0.05, 0.5])
        b = marching_squares(grid, [0.05, 0.5])
        assert len(a) == len(b)
        for pa, pb in zip(a, b):
            assert np.array_equal(pa.vertices, pb.vertices)
            assert pa.closed == pb.closed

    def test_vertices_on_level(self):
        # every vertex interpolates the level along a lattice edge; feeding
        # them back through bilinear interpolation recovers the level
        grid = _radial_grid()
        poly = marching_squares(grid, [0.5])[0]
        r = np.hypot(poly.vertices[:, 0], poly.vertices[:, 1])
        # the analytic density at the vertices is close to the level; the
        # residual is the linear-interp error of the grid spacing
        assert np.all(np.abs(np.exp(-(r**2) / 2.0) - 0.5) < 0.005)


class TestContourPolyline:
    def test_needs_two_vertices(self):
        with pytest.raises(InputDataError):
            ContourPolyline(level=0.5, vertices=np.array([[0.0, 0.0]]), closed=False)

    def test_closed_needs_matching_endpoints(self):
        with pytest.raises(InputDataError):
            ContourPolyline(
                level=0.5,
                vertices=np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]]),
                closed=True,
            )

    def test_vertices_immutable(self):
        poly = ContourPolyline(
            level=0.5, vertices=np.array([[0.0, 0.0], [1.0, 0.0]]), closed=False
        )
        with pytest.raises(ValueError):
            poly.vertices[0, 0] = 9.0


@pytest.fixture(scope="module")
def pair():
    real = make_toy("trimodal", 80, 2)
    synth = make_toy("dart", 80, 3)
    return real, synth


class TestRenderSvg:
    def test_well_formed_xml(self, pair):
        svg = render_svg(*pair, seed=4)
        root = ET.fromstring(svg)
        assert root.tag.endswith("svg")

    def test_byte_identical_rerun(self, pair):
        assert render_svg(*pair, seed=4) == render_svg(*pair, seed=4)

    def test_contour_counts_match_marching_squares(self, pair):
        real, synth = pair
        svg = render_svg(real, synth, seed=4)
        rect = bounding_rect(real, synth, margin_frac=0.10)
        root = ET.fromstring(svg)
        ns = {"svg": "http://www.w3.org/2000/svg"}
        for name, ps in (("real", real), ("synth", synth)):
            group = root.find(f".//svg:g[@id='{name}-contours']", ns)
            assert group is not None
            assert len(group.findall("svg:path", ns)) == len(fit_contours(ps, rect))

    def test_two_distinguishable_colors_and_table(self, pair):
        svg = render_svg(*pair, seed=4)
        assert "#2462ab" in svg and "#e8862d" in svg
        for name in ("correlation", "emd", "jaccard", "kl", "eden"):
            assert f"{name}:" in svg

    def test_render_fit_writes_file(self, pair, tmp_path):
        out = tmp_path / "fit.svg"
        render_fit(*pair, out, seed=4)
        content = out.read_text()
        ET.fromstring(content)
        assert content == render_svg(*pair, seed=4)
