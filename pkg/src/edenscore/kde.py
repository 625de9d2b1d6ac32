"""Full-covariance Gaussian kernel density estimation on 2D point sets.

The kernel covariance is the sample covariance scaled by Scott's factor
n**(-1/3) (the d=2 case of n**(-2/(d+4)) applied to the covariance), the
same rule seaborn's kdeplot inherits from scipy. Evaluation sums kernel
contributions per query point in fixed source order, so results are
bit-identical regardless of how queries are batched.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import DegenerateDataError, InputDataError
from .pointsets import BoundingRect, PointSet
from .rng import make_rng


@njit(cache=True)
def _eval_kernel(qx, qy, sx, sy, a, b, c, norm):
    # (a, b, c) are the rows of inv(chol(H)): z1 = a*dx, z2 = b*dx + c*dy.
    out = np.empty(qx.shape[0], np.float64)
    n = sx.shape[0]
    for k in range(qx.shape[0]):
        acc = 0.0
        x = qx[k]
        y = qy[k]
        for i in range(n):
            dx = x - sx[i]
            dy = y - sy[i]
            z1 = a * dx
            z2 = b * dx + c * dy
            acc += np.exp(-0.5 * (z1 * z1 + z2 * z2))
        out[k] = acc * norm
    return out


@dataclass(frozen=True)
class DensityModel:
    """A fitted KDE: source points plus an SPD kernel covariance matrix."""

    points: PointSet
    bandwidth: np.ndarray  # (2, 2) kernel covariance H

    def __post_init__(self):
        H = np.asarray(self.bandwidth, dtype=np.float64)
        if H.shape != (2, 2) or not np.all(np.isfinite(H)):
            raise DegenerateDataError("bandwidth must be a finite 2x2 matrix")
        if abs(H[0, 1] - H[1, 0]) > 1e-12 * (1.0 + abs(H[0, 1])):
            raise DegenerateDataError("bandwidth matrix must be symmetric")
        try:
            chol = np.linalg.cholesky(H)
        except np.linalg.LinAlgError as exc:
            raise DegenerateDataError(f"bandwidth matrix not positive definite: {exc}") from exc
        H = H.copy()
        H.setflags(write=False)
        object.__setattr__(self, "bandwidth", H)
        object.__setattr__(self, "_chol", chol)

    @property
    def chol(self) -> np.ndarray:
        """Lower Cholesky factor of the kernel covariance."""
        return self._chol


@dataclass(frozen=True)
class DensityGrid:
    """Density values sampled at the cell centers of a regular grid."""

    rect: BoundingRect
    nx: int
    ny: int
    values: np.ndarray  # (nx, ny), values[i, j] at center (x_i, y_j)

    def __post_init__(self):
        if self.nx < 16 or self.ny < 16:
            raise InputDataError(f"grid must be at least 16x16, got {self.nx}x{self.ny}")
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (self.nx, self.ny):
            raise InputDataError(f"values shape {v.shape} != ({self.nx}, {self.ny})")
        if not np.all(np.isfinite(v)) or v.min() < 0:
            raise InputDataError("grid values must be finite and nonnegative")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def cell_width(self) -> float:
        return self.rect.width / self.nx

    @property
    def cell_height(self) -> float:
        return self.rect.height / self.ny

    @property
    def cell_area(self) -> float:
        return self.cell_width * self.cell_height

    @property
    def x_centers(self) -> np.ndarray:
        return self.rect.x_min + (np.arange(self.nx) + 0.5) * self.cell_width

    @property
    def y_centers(self) -> np.ndarray:
        return self.rect.y_min + (np.arange(self.ny) + 0.5) * self.cell_height

    @property
    def total_mass(self) -> float:
        """Riemann mass of the sampled density over the rectangle."""
        return float(self.values.sum() * self.cell_area)

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("x,y,density\n")
            xc = self.x_centers
            yc = self.y_centers
            for i in range(self.nx):
                for j in range(self.ny):
                    fh.write(f"{xc[i]!r},{yc[j]!r},{self.values[i, j]!r}\n")


@dataclass(frozen=True)
class LevelThresholds:
    """Iso-proportion density thresholds; ascending, one per proportion."""

    iso_proportions: tuple
    density_thresholds: tuple

    def __post_init__(self):
        if len(self.iso_proportions) != len(self.density_thresholds):
            raise InputDataError("proportions and thresholds must align")
        t = np.asarray(self.density_thresholds)
        if t.size == 0 or np.any(np.diff(t) < 0):
            raise InputDataError("thresholds must be non-empty and ascending")


def fit_kde(ps: PointSet) -> DensityModel:
    """Fit a full-covariance gaussian KDE with Scott bandwidth scaling.

    Collinear or otherwise covariance-degenerate point sets are refused:
    the bandwidth matrix must be symmetric positive definite.
    """
    n = len(ps)
    cov = np.cov(ps.xy.T, ddof=1)
    if not np.all(np.isfinite(cov)):
        raise DegenerateDataError("sample covariance is not finite")
    H = cov * n ** (-1.0 / 3.0)
    try:
        return DensityModel(points=ps, bandwidth=H)
    except DegenerateDataError as exc:
        raise DegenerateDataError(
            f"cannot fit KDE to {ps.label or 'point set'}: {exc}"
        ) from exc


def _inv_chol_entries(model: DensityModel):
    L = model.chol
    a = 1.0 / L[0, 0]
    c = 1.0 / L[1, 1]
    b = -L[1, 0] / (L[0, 0] * L[1, 1])
    det_l = L[0, 0] * L[1, 1]
    norm = 1.0 / (len(model.points) * 2.0 * np.pi * det_l)
    return a, b, c, norm


def evaluate(model: DensityModel, xy) -> np.ndarray:
    """Density of the fitted KDE at query points, shape (k, 2) -> (k,).

    Per query point the kernel sum runs over source points in storage order,
    so the result does not depend on query batching.
    """
    xy = np.atleast_2d(np.asarray(xy, dtype=np.float64))
    if xy.ndim != 2 or xy.shape[1] != 2:
        raise InputDataError(f"expected query shape (k, 2), got {xy.shape}")
    a, b, c, norm = _inv_chol_entries(model)
    src = model.points.xy
    return _eval_kernel(
        np.ascontiguousarray(xy[:, 0]),
        np.ascontiguousarray(xy[:, 1]),
        np.ascontiguousarray(src[:, 0]),
        np.ascontiguousarray(src[:, 1]),
        a,
        b,
        c,
        norm,
    )


def grid_evaluate(model: DensityModel, rect: BoundingRect, nx: int = 256, ny: int = 256) -> DensityGrid:
    """Evaluate the KDE at the nx * ny cell centers of a regular grid."""
    xc = rect.x_min + (np.arange(nx) + 0.5) * (rect.width / nx)
    yc = rect.y_min + (np.arange(ny) + 0.5) * (rect.height / ny)
    qx = np.repeat(xc, ny)
    qy = np.tile(yc, nx)
    vals = evaluate(model, np.column_stack([qx, qy])).reshape(nx, ny)
    return DensityGrid(rect=rect, nx=nx, ny=ny, values=vals)


def iso_thresholds(model: DensityModel, grid: DensityGrid, iso_proportions) -> LevelThresholds:
    """Density levels t_f such that a fraction f of the KDE's probability
    mass, as discretized on the grid, lies strictly below t_f.

    Cell masses are sorted by density ascending and accumulated; t_f is the
    smallest cell density whose strictly-below running mass reaches f of the
    total. f = 0.05 therefore ignores the lowest 5% of mass, the region
    outside the outermost of five default contours. Proportions must be
    ascending, in [0, 1); thresholds are ascending by construction. The model
    argument is the fit the grid was sampled from; only the grid is consulted.
    """
    del model
    props = tuple(float(p) for p in iso_proportions)
    if len(props) == 0:
        raise InputDataError("need at least one iso proportion")
    arr = np.asarray(props)
    if np.any(arr < 0) or np.any(arr >= 1):
        raise InputDataError(f"iso proportions must lie in [0, 1), got {props}")
    if len(props) > 1 and np.any(np.diff(arr) <= 0):
        raise InputDataError("iso proportions must be strictly ascending")
    flat = np.sort(grid.values.ravel())
    total = flat.sum()
    if total <= 0:
        raise DegenerateDataError("grid holds no density mass")
    # below[i] = mass fraction strictly below flat[i], assuming no ties.
    below = np.concatenate([[0.0], np.cumsum(flat)[:-1] / total])
    idx = np.searchsorted(below, arr, side="left")
    idx = np.minimum(idx, flat.size - 1)
    levels = flat[idx]
    return LevelThresholds(
        iso_proportions=props, density_thresholds=tuple(float(t) for t in levels)
    )


def default_iso_proportions(n_annuli: int) -> tuple:
    """n_annuli + 1 equally spaced proportions from 0.05 to 1.0, with the
    degenerate 1.0 endpoint dropped: 5 annuli use (0.05, 0.24, 0.43, 0.62, 0.81)."""
    if n_annuli < 2:
        raise InputDataError(f"need at least 2 annuli, got {n_annuli}")
    return tuple(float(p) for p in np.linspace(0.05, 1.0, n_annuli + 1)[:-1])


def sample_kde(model: DensityModel, n: int, seed: int) -> np.ndarray:
    """Smoothed bootstrap: draw a source point uniformly, add kernel noise."""
    if n < 1:
        raise InputDataError(f"need n >= 1 samples, got {n}")
    rng = make_rng(seed)
    src = model.points.xy
    idx = rng.integers(0, src.shape[0], size=n)
    z = rng.standard_normal((n, 2))
    return src[idx] + z @ model.chol.T
