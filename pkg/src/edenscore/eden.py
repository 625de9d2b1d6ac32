"""The eden equidensity score.

Both point sets get a KDE; each KDE gets density thresholds at the shared
iso-proportion ladder, splitting the plane into concentric equidensity
annuli (index 0 = outermost band, highest index = innermost disk, the region
below the lowest threshold excluded). One shared uniform Monte-Carlo
sprinkle lands on the union bounding rectangle; per annulus index i, s_i is
the count of sprinkle points in annulus i of both models over the count in
annulus i of either. The eden score is the mean of the s_i.

Sharing the sprinkle between both models makes the score exactly symmetric
and makes the identity case exact: identical fits give identical annulus
labels point for point, so every s_i is exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDataError, InputDataError
from .kde import (
    DensityModel,
    LevelThresholds,
    default_iso_proportions,
    evaluate,
    fit_kde,
    grid_evaluate,
    iso_thresholds,
)
from .pointsets import BoundingRect, PointSet, bounding_rect
from .rng import make_rng


@dataclass(frozen=True)
class AnnulusSet:
    """A fitted KDE together with its ascending density thresholds."""

    model: DensityModel
    thresholds: LevelThresholds
    n_annuli: int

    def __post_init__(self):
        t = np.asarray(self.thresholds.density_thresholds)
        if len(t) != self.n_annuli:
            raise InputDataError(
                f"expected {self.n_annuli} thresholds, got {len(t)}"
            )
        if self.n_annuli >= 2 and np.any(np.diff(t) <= 0):
            raise DegenerateDataError("density thresholds are not strictly ascending")


@dataclass(frozen=True)
class EdenConfig:
    n_annuli: int = 5
    n_mc: int = 200_000
    margin_frac: float = 0.10
    seed: int = 0
    grid_n: int = 256

    def __post_init__(self):
        if self.n_annuli < 2:
            raise InputDataError(f"n_annuli must be >= 2, got {self.n_annuli}")
        if self.n_mc < 10_000:
            raise InputDataError(f"n_mc must be >= 10,000, got {self.n_mc}")
        if self.margin_frac < 0:
            raise InputDataError("margin_frac must be >= 0")


@dataclass(frozen=True)
class AnnulusStat:
    """IoU bookkeeping for one annulus index of a score evaluation."""

    index: int
    intersection_area: float
    union_area: float
    s: float
    stderr: float
    intersection_count: int
    union_count: int
    empty_union: bool

    def to_json_dict(self) -> dict:
        return {
            "index": self.index,
            "intersection_area": self.intersection_area,
            "union_area": self.union_area,
            "s": self.s,
            "stderr": self.stderr,
            "intersection_count": self.intersection_count,
            "union_count": self.union_count,
            "empty_union": self.empty_union,
        }


@dataclass(frozen=True)
class AnnulusReport:
    """Per-annulus IoU statistics plus their mean, the eden score."""

    per_annulus: tuple
    eden: float
    n_mc: int
    seed: int
    rect: BoundingRect

    def __post_init__(self):
        if not 0.0 <= self.eden <= 1.0:
            raise InputDataError(f"eden = {self.eden} outside [0, 1]")
        for st in self.per_annulus:
            if not 0.0 <= st.s <= 1.0 or st.intersection_area > st.union_area + 1e-12:
                raise InputDataError(f"bad annulus stat {st}")

    @property
    def eden_stderr(self) -> float:
        """Binomial stderr of the mean of the per-annulus ratios."""
        var = sum(st.stderr**2 for st in self.per_annulus)
        return float(np.sqrt(var) / len(self.per_annulus))

    def to_json_dict(self) -> dict:
        return {
            "eden": self.eden,
            "stderr": self.eden_stderr,
            "n_mc": self.n_mc,
            "seed": self.seed,
            "rect": {
                "x_min": self.rect.x_min,
                "x_max": self.rect.x_max,
                "y_min": self.rect.y_min,
                "y_max": self.rect.y_max,
            },
            "per_annulus": [st.to_json_dict() for st in self.per_annulus],
        }


def build_annulus_set(
    model: DensityModel, rect: BoundingRect, n_annuli: int = 5, grid_n: int = 256
) -> AnnulusSet:
    """Thresholds for a model from a grid_n x grid_n evaluation over rect."""
    grid = grid_evaluate(model, rect, grid_n, grid_n)
    levels = iso_thresholds(model, grid, default_iso_proportions(n_annuli))
    return AnnulusSet(model=model, thresholds=levels, n_annuli=n_annuli)


def annulus_indices(aset: AnnulusSet, xy) -> np.ndarray:
    """Annulus index for each query point; -1 means outside all annuli.

    Intervals are half-open [t_i, t_{i+1}), the top one unbounded, so a
    density exactly equal to t_i belongs to annulus i.
    """
    dens = evaluate(aset.model, xy)
    t = np.asarray(aset.thresholds.density_thresholds)
    return np.searchsorted(t, dens, side="right").astype(np.int64) - 1


def annulus_of(aset: AnnulusSet, pt) -> int | None:
    """Annulus index of a single (x, y) point, or None when it falls below
    the outermost threshold."""
    idx = int(annulus_indices(aset, np.asarray(pt, dtype=np.float64).reshape(1, 2))[0])
    return idx if idx >= 0 else None


def eden_score(p: PointSet, q: PointSet, cfg: EdenConfig = EdenConfig()) -> AnnulusReport:
    """Mean per-annulus intersection-over-union of the two equidensity
    decompositions, estimated on one shared uniform sprinkle.

    An annulus whose union receives no sprinkle points contributes s = 0 and
    is flagged; if every annulus of both models is empty the configuration is
    degenerate and raises.
    """
    rect = bounding_rect(p, q, margin_frac=cfg.margin_frac)
    aset_p = build_annulus_set(fit_kde(p), rect, cfg.n_annuli, cfg.grid_n)
    aset_q = build_annulus_set(fit_kde(q), rect, cfg.n_annuli, cfg.grid_n)

    rng = make_rng(cfg.seed)
    u = rng.random((cfg.n_mc, 2))
    pts = np.column_stack(
        [rect.x_min + u[:, 0] * rect.width, rect.y_min + u[:, 1] * rect.height]
    )
    idx_p = annulus_indices(aset_p, pts)
    idx_q = annulus_indices(aset_q, pts)

    cell_mass = rect.area / cfg.n_mc
    stats = []
    any_union = False
    for i in range(cfg.n_annuli):
        in_p = idx_p == i
        in_q = idx_q == i
        inter = int((in_p & in_q).sum())
        union = int((in_p | in_q).sum())
        if union == 0:
            stats.append(
                AnnulusStat(
                    index=i,
                    intersection_area=0.0,
                    union_area=0.0,
                    s=0.0,
                    stderr=0.0,
                    intersection_count=0,
                    union_count=0,
                    empty_union=True,
                )
            )
            continue
        any_union = True
        s = inter / union
        stats.append(
            AnnulusStat(
                index=i,
                intersection_area=inter * cell_mass,
                union_area=union * cell_mass,
                s=s,
                stderr=float(np.sqrt(s * (1.0 - s) / union)),
                intersection_count=inter,
                union_count=union,
                empty_union=False,
            )
        )
    if not any_union:
        raise DegenerateDataError(
            "no sprinkle point landed in any annulus of either model"
        )
    eden = float(np.mean([st.s for st in stats]))
    return AnnulusReport(
        per_annulus=tuple(stats), eden=eden, n_mc=cfg.n_mc, seed=cfg.seed, rect=rect
    )


def annulus_areas_raster(aset: AnnulusSet, rect: BoundingRect, n: int = 256) -> np.ndarray:
    """Deterministic annulus areas: count raster cell centers per annulus
    index and multiply by the cell area. Oracle for the Monte-Carlo sprinkle."""
    if n < 256:
        raise InputDataError(f"raster resolution must be >= 256, got {n}")
    xc = rect.x_min + (np.arange(n) + 0.5) * (rect.width / n)
    yc = rect.y_min + (np.arange(n) + 0.5) * (rect.height / n)
    pts = np.column_stack([np.repeat(xc, n), np.tile(yc, n)])
    idx = annulus_indices(aset, pts)
    cell_area = rect.area / (n * n)
    areas = np.zeros(aset.n_annuli, dtype=np.float64)
    for i in range(aset.n_annuli):
        areas[i] = (idx == i).sum() * cell_area
    return areas
