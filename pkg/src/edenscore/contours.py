"""Marching squares over a DensityGrid.

The grid samples live at cell centers; contours march over the lattice of
those sample points with linear interpolation along lattice edges. Each
lattice edge is interpolated once per level and identified by an integer
key, so neighboring cells share crossing vertices exactly and segment
stitching needs no floating-point matching. Saddle cells are disambiguated
by the four-corner average.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputDataError
from .kde import DensityGrid


@dataclass(frozen=True)
class ContourPolyline:
    """An open chain or closed loop of an iso-density contour."""

    level: float
    vertices: np.ndarray  # (m, 2) data coordinates
    closed: bool

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.float64)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 2:
            raise InputDataError("polyline needs at least 2 (x, y) vertices")
        if self.closed and not np.array_equal(v[0], v[-1]):
            raise InputDataError("closed polyline must repeat its first vertex last")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    def __len__(self) -> int:
        return len(self.vertices)


def _edge_key(horizontal: bool, ix: int, iy: int, nx: int, ny: int) -> int:
    # Horizontal edges join (ix,iy)-(ix+1,iy); vertical join (ix,iy)-(ix,iy+1).
    if horizontal:
        return iy * (nx - 1) + ix
    return (nx - 1) * ny + ix * (ny - 1) + iy


# Per marching-squares case: segments as (edge_a, edge_b) with edges numbered
# bottom=0, right=1, top=2, left=3. Case bit i set = corner i above level,
# corners ordered (ix,iy), (ix+1,iy), (ix+1,iy+1), (ix,iy+1).
_CASES = {
    0: (),
    1: ((3, 0),),
    2: ((0, 1),),
    3: ((3, 1),),
    4: ((1, 2),),
    5: None,  # saddle
    6: ((0, 2),),
    7: ((3, 2),),
    8: ((2, 3),),
    9: ((0, 2),),
    10: None,  # saddle
    11: ((1, 2),),
    12: ((1, 3),),
    13: ((0, 1),),
    14: ((3, 0),),
    15: (),
}


def marching_squares(grid: DensityGrid, levels) -> list[ContourPolyline]:
    """Extract iso-lines for each level; levels beyond the grid's value range
    simply yield no polylines."""
    out: list[ContourPolyline] = []
    for level in levels:
        out.extend(_march_one(grid, float(level)))
    return out


def _march_one(grid: DensityGrid, level: float) -> list[ContourPolyline]:
    v = grid.values
    nx, ny = grid.nx, grid.ny
    if not (v.min() < level < v.max()):
        return []
    xc = grid.x_centers
    yc = grid.y_centers

    crossings: dict[int, tuple[float, float]] = {}

    def cross_h(ix: int, iy: int) -> int:
        key = _edge_key(True, ix, iy, nx, ny)
        if key not in crossings:
            v0 = v[ix, iy]
            v1 = v[ix + 1, iy]
            t = (level - v0) / (v1 - v0)
            crossings[key] = (xc[ix] + t * (xc[ix + 1] - xc[ix]), yc[iy])
        return key

    def cross_v(ix: int, iy: int) -> int:
        key = _edge_key(False, ix, iy, nx, ny)
        if key not in crossings:
            v0 = v[ix, iy]
            v1 = v[ix, iy + 1]
            t = (level - v0) / (v1 - v0)
            crossings[key] = (xc[ix], yc[iy] + t * (yc[iy + 1] - yc[iy]))
        return key

    # adjacency between crossing keys; each key touches at most two segments
    links: dict[int, list[int]] = {}
    for ix in range(nx - 1):
        for iy in range(ny - 1):
            case = 0
            if v[ix, iy] > level:
                case |= 1
            if v[ix + 1, iy] > level:
                case |= 2
            if v[ix + 1, iy + 1] > level:
                case |= 4
            if v[ix, iy + 1] > level:
                case |= 8
            if case == 0 or case == 15:
                continue
            segs = _CASES[case]
            if segs is None:
                center_above = (
                    v[ix, iy] + v[ix + 1, iy] + v[ix + 1, iy + 1] + v[ix, iy + 1]
                ) / 4.0 > level
                if case == 5:
                    segs = ((3, 0), (1, 2)) if not center_above else ((3, 2), (1, 0))
                else:
                    segs = ((0, 1), (2, 3)) if not center_above else ((0, 3), (2, 1))
            for ea, eb in segs:
                ka = _cell_edge_key(ea, ix, iy, cross_h, cross_v)
                kb = _cell_edge_key(eb, ix, iy, cross_h, cross_v)
                links.setdefault(ka, []).append(kb)
                links.setdefault(kb, []).append(ka)

    return _stitch(links, crossings, level)


def _cell_edge_key(edge: int, ix: int, iy: int, cross_h, cross_v) -> int:
    if edge == 0:
        return cross_h(ix, iy)
    if edge == 1:
        return cross_v(ix + 1, iy)
    if edge == 2:
        return cross_h(ix, iy + 1)
    return cross_v(ix, iy)


def _stitch(links: dict, crossings: dict, level: float) -> list[ContourPolyline]:
    polylines = []
    visited = set()

    def walk(start: int) -> list[int]:
        chain = [start]
        visited.add(start)
        prev = None
        node = start
        while True:
            nbrs = [k for k in links[node] if k != prev]
            if prev is None and len(nbrs) > 1:
                nbrs = nbrs[:1]
            nxt = None
            for k in nbrs:
                if k not in visited or (k == start and len(chain) > 2):
                    nxt = k
                    break
            if nxt is None:
                return chain
            if nxt == start:
                chain.append(start)
                return chain
            visited.add(nxt)
            chain.append(nxt)
            prev, node = node, nxt

    # open chains first (degree-1 endpoints), then remaining loops
    for start in [k for k, nb in links.items() if len(nb) == 1]:
        if start in visited:
            continue
        chain = walk(start)
        if len(chain) >= 2:
            polylines.append(_to_polyline(chain, crossings, level))
    for start in links:
        if start in visited:
            continue
        chain = walk(start)
        if len(chain) >= 2:
            polylines.append(_to_polyline(chain, crossings, level))
    return polylines


def _to_polyline(chain: list, crossings: dict, level: float) -> ContourPolyline:
    closed = len(chain) > 2 and chain[0] == chain[-1]
    pts = np.array([crossings[k] for k in chain], dtype=np.float64)
    return ContourPolyline(level=level, vertices=pts, closed=closed)
