"""Point-set containers, table IO, and reference data generators.

A PointSet is an immutable bag of finite 2D points. Everything downstream
(density fits, scores, transport) consumes PointSets, so validation happens
once, here.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import InputDataError
from .rng import make_rng

log = logging.getLogger(__name__)

_DELIMITERS = {",", "\t"}


@dataclass(frozen=True)
class PointSet:
    """n >= 3 finite points in the plane, shape (n, 2), read-only."""

    xy: np.ndarray
    label: str = ""

    def __post_init__(self):
        arr = np.asarray(self.xy, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise InputDataError(f"expected an (n, 2) array, got shape {arr.shape}")
        if arr.shape[0] < 3:
            raise InputDataError(f"need at least 3 points, got {arr.shape[0]}")
        if not np.all(np.isfinite(arr)):
            raise InputDataError("coordinates must be finite")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "xy", arr)

    def __len__(self) -> int:
        return self.xy.shape[0]

    @property
    def x(self) -> np.ndarray:
        return self.xy[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.xy[:, 1]

    @classmethod
    def from_xy(cls, x, y, label: str = "") -> "PointSet":
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if x.shape != y.shape or x.ndim != 1:
            raise InputDataError("x and y must be 1D arrays of equal length")
        return cls(np.column_stack([x, y]), label=label)


@dataclass(frozen=True)
class BoundingRect:
    """Axis-aligned rectangle with strictly positive width and height."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise InputDataError(
                f"degenerate rectangle: x [{self.x_min}, {self.x_max}], "
                f"y [{self.y_min}, {self.y_max}]"
            )

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def diagonal(self) -> float:
        return float(np.hypot(self.width, self.height))

    @property
    def area(self) -> float:
        return self.width * self.height

    def contains(self, x: float, y: float) -> bool:
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max


def bounding_rect(*point_sets: PointSet, margin_frac: float = 0.0) -> BoundingRect:
    """Tight axis-aligned rectangle around the union of the given point sets,
    expanded on each side by margin_frac of that axis' tight extent.

    Degenerate axes (all points sharing one coordinate) are an error: every
    grid and histogram downstream needs positive area.
    """
    if not point_sets:
        raise InputDataError("bounding_rect needs at least one point set")
    if margin_frac < 0:
        raise InputDataError("margin_frac must be >= 0")
    xs = np.concatenate([ps.x for ps in point_sets])
    ys = np.concatenate([ps.y for ps in point_sets])
    x_min, x_max = float(xs.min()), float(xs.max())
    y_min, y_max = float(ys.min()), float(ys.max())
    if x_max == x_min or y_max == y_min:
        raise InputDataError("all points share a coordinate; rectangle would be degenerate")
    mx = margin_frac * (x_max - x_min)
    my = margin_frac * (y_max - y_min)
    return BoundingRect(x_min - mx, x_max + mx, y_min - my, y_max + my)


def load_table(
    path,
    x_col: str,
    y_col: str,
    delimiter: str = ",",
    filter_col: str | None = None,
    filter_value: str | None = None,
    label: str = "",
) -> PointSet:
    """Load a delimited text table with a header row into a PointSet.

    Rows whose x/y fields are missing or not finite numbers are skipped and
    counted in the log. An optional equality filter on a third column selects
    a subset (for files that stack several datasets in one table).
    """
    if delimiter not in _DELIMITERS:
        raise InputDataError(f"delimiter must be ',' or tab, got {delimiter!r}")
    if (filter_col is None) != (filter_value is None):
        raise InputDataError("filter_col and filter_value must be given together")
    rows = []
    skipped = 0
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise InputDataError(f"cannot open {path}: {exc}") from exc
    with fh:
        reader = csv.DictReader(fh, delimiter=delimiter)
        if reader.fieldnames is None:
            raise InputDataError(f"{path}: empty file")
        for col in (x_col, y_col):
            if col not in reader.fieldnames:
                raise InputDataError(
                    f"{path}: missing column {col!r}; found {reader.fieldnames}"
                )
        if filter_col is not None and filter_col not in reader.fieldnames:
            raise InputDataError(f"{path}: missing filter column {filter_col!r}")
        for row in reader:
            if filter_col is not None and row.get(filter_col) != filter_value:
                continue
            try:
                x = float(row[x_col])
                y = float(row[y_col])
            except (TypeError, ValueError):
                skipped += 1
                continue
            if not (np.isfinite(x) and np.isfinite(y)):
                skipped += 1
                continue
            rows.append((x, y))
    if skipped:
        log.info("load_table(%s): skipped %d malformed rows", path, skipped)
    if len(rows) < 3:
        raise InputDataError(f"{path}: fewer than 3 valid rows ({len(rows)} found)")
    return PointSet(np.array(rows, dtype=np.float64), label=label or str(path))


def save_table(ps: PointSet, path, delimiter: str = ",") -> None:
    """Write a PointSet as a two-column table; floats use repr so that a
    load_table round trip reproduces the coordinates bit for bit."""
    if delimiter not in _DELIMITERS:
        raise InputDataError(f"delimiter must be ',' or tab, got {delimiter!r}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"x{delimiter}y\n")
        for x, y in ps.xy:
            fh.write(f"{float(x)!r}{delimiter}{float(y)!r}\n")


# Anscombe's quartet, from the published 1973 table. Four 11-point sets with
# near-identical linear summary statistics (R = 0.82 to two decimals on all
# four) and visibly different shapes.
_ANSCOMBE_X123 = [10.0, 8.0, 13.0, 9.0, 11.0, 14.0, 6.0, 4.0, 12.0, 7.0, 5.0]
_ANSCOMBE = {
    "I": (
        _ANSCOMBE_X123,
        [8.04, 6.95, 7.58, 8.81, 8.33, 9.96, 7.24, 4.26, 10.84, 4.82, 5.68],
    ),
    "II": (
        _ANSCOMBE_X123,
        [9.14, 8.14, 8.74, 8.77, 9.26, 8.10, 6.13, 3.10, 9.13, 7.26, 4.74],
    ),
    "III": (
        _ANSCOMBE_X123,
        [7.46, 6.77, 12.74, 7.11, 7.81, 8.84, 6.08, 5.39, 8.15, 6.42, 5.73],
    ),
    "IV": (
        [8.0, 8.0, 8.0, 8.0, 8.0, 8.0, 8.0, 19.0, 8.0, 8.0, 8.0],
        [6.58, 5.76, 7.71, 8.84, 8.47, 7.04, 5.25, 12.50, 5.56, 7.91, 6.89],
    ),
}
_ANSCOMBE_NAMES = {1: "I", 2: "II", 3: "III", 4: "IV"}


def anscombe(which) -> PointSet:
    """One of the four Anscombe quartet datasets ('I'..'IV' or 1..4)."""
    key = _ANSCOMBE_NAMES.get(which, which)
    if key not in _ANSCOMBE:
        raise InputDataError(f"unknown anscombe dataset {which!r}; use I, II, III or IV")
    x, y = _ANSCOMBE[key]
    return PointSet.from_xy(x, y, label=f"anscombe_{key}")


_TOY_KINDS = ("trimodal", "stripes", "dart")

# Stripe band centers and half-width; five equal-weight vertical bands.
_STRIPE_CENTERS = np.array([-4.0, -2.0, 0.0, 2.0, 4.0])
_STRIPE_HALF_WIDTH = 0.2

# Trimodal mixture component centers, equal weights, isotropic sd 0.7.
_TRIMODAL_CENTERS = np.array([[-3.0, 0.0], [3.0, 0.0], [0.0, 4.0]])
_TRIMODAL_SD = 0.7

# Dart board: 80% uniform annulus, 20% central gaussian blob.
_DART_R_INNER = 2.5
_DART_R_OUTER = 3.5
_DART_BLOB_SD = 0.5
_DART_BLOB_FRAC = 0.2


def make_toy(kind: str, n: int, seed: int) -> PointSet:
    """Deterministic synthetic benchmark distributions.

    trimodal: equal mixture of three isotropic gaussian blobs at (-3, 0),
    (3, 0) and (0, 4), sd 0.7. A single full-covariance gaussian fitted to it
    is badly wrong, a structure-aware model is not.

    stripes: y uniform on [0, 1]; x uniform inside five width-0.4 bands
    centered at -4, -2, 0, 2, 4, equal weights.

    dart: 80% uniform over the annulus 2.5 <= r <= 3.5, 20% isotropic
    gaussian blob at the origin with sd 0.5.
    """
    if kind not in _TOY_KINDS:
        raise InputDataError(f"unknown toy kind {kind!r}; use one of {_TOY_KINDS}")
    if n < 3:
        raise InputDataError(f"need n >= 3, got {n}")
    rng = make_rng(seed)
    if kind == "trimodal":
        comp = rng.integers(0, 3, size=n)
        xy = _TRIMODAL_CENTERS[comp] + rng.normal(0.0, _TRIMODAL_SD, size=(n, 2))
    elif kind == "stripes":
        band = rng.integers(0, len(_STRIPE_CENTERS), size=n)
        x = _STRIPE_CENTERS[band] + rng.uniform(-_STRIPE_HALF_WIDTH, _STRIPE_HALF_WIDTH, size=n)
        y = rng.uniform(0.0, 1.0, size=n)
        xy = np.column_stack([x, y])
    else:
        blob = rng.random(n) < _DART_BLOB_FRAC
        # Area-uniform radius on the annulus: r = sqrt(u*(R^2-r0^2)+r0^2).
        u = rng.random(n)
        r = np.sqrt(u * (_DART_R_OUTER**2 - _DART_R_INNER**2) + _DART_R_INNER**2)
        theta = rng.uniform(0.0, 2.0 * np.pi, size=n)
        xy = np.column_stack([r * np.cos(theta), r * np.sin(theta)])
        n_blob = int(blob.sum())
        xy[blob] = rng.normal(0.0, _DART_BLOB_SD, size=(n_blob, 2))
    return PointSet(xy, label=f"{kind}_n{n}_seed{seed}")
