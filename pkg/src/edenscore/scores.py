"""Equipoint quality scores: correlation agreement, density-threshold
Jaccard, and the KL-divergence score.

All scores live on [0, 1], 1 = best. The KL score is the only asymmetric
one; its direction is the surprise at the real data given the synthetic
model, so call it as kl_score(real, synth).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDataError, InputDataError
from .kde import DensityModel, evaluate, fit_kde, grid_evaluate, sample_kde
from .pointsets import PointSet, bounding_rect

log = logging.getLogger(__name__)

_STOCHASTIC_SCORES = frozenset({"kl", "eden"})
_SCORE_NAMES = ("correlation", "emd", "jaccard", "kl", "eden")


@dataclass(frozen=True)
class ScoreValue:
    """One named score in [0, 1]; stochastic scores carry stderr and seed."""

    name: str
    value: float
    stderr: float | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.name not in _SCORE_NAMES:
            raise InputDataError(f"unknown score name {self.name!r}")
        if not 0.0 <= self.value <= 1.0:
            raise InputDataError(f"score {self.name} = {self.value} outside [0, 1]")
        if (self.stderr is not None) != (self.name in _STOCHASTIC_SCORES):
            raise InputDataError(
                f"stderr must be present exactly for {sorted(_STOCHASTIC_SCORES)}, "
                f"got {self.name} with stderr={self.stderr}"
            )
        if self.stderr is not None and self.stderr < 0:
            raise InputDataError("stderr must be nonnegative")

    def to_json_dict(self) -> dict:
        out = {"name": self.name, "value": self.value}
        if self.stderr is not None:
            out["stderr"] = self.stderr
        if self.seed is not None:
            out["seed"] = self.seed
        return out


@dataclass(frozen=True)
class KLConfig:
    """Monte-Carlo settings for the KL estimate.

    order is the Renyi order; only the KL limit (order 1) is supported.
    floor is the minimum admissible denominator density before the log.
    """

    order: float = 1.0
    n_samples: int = 20_000
    floor: float = 1e-300
    seed: int = 0

    def __post_init__(self):
        if self.order != 1.0:
            raise InputDataError("only order 1 (the KL limit) is supported")
        if self.n_samples < 100:
            raise InputDataError(f"n_samples must be >= 100, got {self.n_samples}")
        if self.floor <= 0:
            raise InputDataError("floor must be positive")


def pearson_r(ps: PointSet) -> float:
    """Sample Pearson correlation of the x and y coordinates."""
    x = ps.x
    y = ps.y
    sx = x.std()
    sy = y.std()
    if sx == 0.0 or sy == 0.0:
        raise DegenerateDataError("zero variance in x or y; correlation undefined")
    return float(np.corrcoef(x, y)[0, 1])


def correlation_score(p: PointSet, q: PointSet) -> ScoreValue:
    """1 - |R_p - R_q| / 2: how closely the two linear correlations agree.

    Two point clouds with utterly different shapes but similar R score near 1,
    which is exactly the failure mode the equidensity score exists to expose.
    """
    value = 1.0 - abs(pearson_r(p) - pearson_r(q)) / 2.0
    return ScoreValue(name="correlation", value=float(value))


def _max_density(model: DensityModel, grid_values: np.ndarray) -> float:
    """Maximum density estimate: grid cells plus the model's own source
    points, which guards against a peak falling between cell centers."""
    at_sources = evaluate(model, model.points.xy)
    return float(max(grid_values.max(), at_sources.max()))


def jaccard_score(
    p: PointSet,
    q: PointSet,
    ratio_thresh: float = 0.1,
    grid_n: int = 256,
    margin_frac: float = 0.10,
) -> ScoreValue:
    """Fraction of all points that land inside the other side's high-density
    region.

    A point counts as intersecting when the other model's density there
    exceeds ratio_thresh of that model's maximum density. The denominator is
    the total point count |P| + |Q|. Symmetric and deterministic given the
    max-estimation grid.
    """
    if not 0.0 < ratio_thresh < 1.0:
        raise InputDataError(f"ratio_thresh must be in (0, 1), got {ratio_thresh}")
    rect = bounding_rect(p, q, margin_frac=margin_frac)
    model_p = fit_kde(p)
    model_q = fit_kde(q)
    grid_p = grid_evaluate(model_p, rect, grid_n, grid_n)
    grid_q = grid_evaluate(model_q, rect, grid_n, grid_n)
    max_p = _max_density(model_p, grid_p.values)
    max_q = _max_density(model_q, grid_q.values)
    p_in_q = int((evaluate(model_q, p.xy) / max_q > ratio_thresh).sum())
    q_in_p = int((evaluate(model_p, q.xy) / max_p > ratio_thresh).sum())
    value = (p_in_q + q_in_p) / (len(p) + len(q))
    return ScoreValue(name="jaccard", value=float(value))


def kl_divergence_mc(
    p: DensityModel, q: DensityModel, cfg: KLConfig = KLConfig()
) -> tuple[float, float]:
    """Monte-Carlo estimate of KL(p || q) between two fitted KDEs.

    Draws n_samples points from p by smoothed bootstrap and averages
    log(p(x) / max(q(x), floor)). Returns (estimate, standard error of the
    mean). The estimate can dip below zero by Monte-Carlo noise; it is
    clamped to 0 and the clamp is logged.
    """
    xs = sample_kde(p, cfg.n_samples, seed=cfg.seed)
    dens_p = evaluate(p, xs)
    dens_q = np.maximum(evaluate(q, xs), cfg.floor)
    logr = np.log(dens_p / dens_q)
    est = float(logr.mean())
    stderr = float(logr.std(ddof=1) / np.sqrt(cfg.n_samples))
    if est < 0.0:
        log.info("negative KL estimate %.3e clamped to 0 (noise-level mismatch)", est)
        est = 0.0
    return est, stderr


def kl_score(p: PointSet, q: PointSet, cfg: KLConfig = KLConfig()) -> ScoreValue:
    """exp(-KL(p || q)) with p the real data and q the synthetic data.

    Asymmetric by design: it measures the surprise at the real data under
    the synthetic density. stderr is propagated through the exponential
    (delta method).
    """
    model_p = fit_kde(p)
    model_q = fit_kde(q)
    est, stderr = kl_divergence_mc(model_p, model_q, cfg)
    value = float(np.exp(-est))
    return ScoreValue(name="kl", value=value, stderr=float(value * stderr), seed=cfg.seed)
