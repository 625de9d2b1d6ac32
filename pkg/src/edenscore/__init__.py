"""Quality scores for comparing 2D point distributions.

Five scores on a shared [0, 1] scale: three equipoint scores (correlation
agreement, earth mover's score, density-threshold Jaccard), a KL-divergence
score, and the equidensity "eden" score built from iso-proportion density
annuli. The equidensity view is deliberately harder to please: models that
merely match coarse moments score high on the equipoint side and low here.
"""

__version__ = "0.1.0"

from .contours import ContourPolyline, marching_squares
from .eden import (
    AnnulusReport,
    AnnulusSet,
    AnnulusStat,
    EdenConfig,
    annulus_areas_raster,
    annulus_indices,
    annulus_of,
    build_annulus_set,
    eden_score,
)
from .emd import Histogram2D, TransportPlan, bin_points, emd_exact, emd_score
from .errors import DegenerateDataError, EdenscoreError, InputDataError
from .evalkit import (
    GaussianCopulaModel,
    MomentGaussianModel,
    ResampleSummary,
    cohen_kappa,
    fit_model,
    mann_whitney_u,
    resample_scores,
    sample,
    score_once,
)
from .kde import (
    DensityGrid,
    DensityModel,
    LevelThresholds,
    default_iso_proportions,
    evaluate,
    fit_kde,
    grid_evaluate,
    iso_thresholds,
    sample_kde,
)
from .pointsets import (
    BoundingRect,
    PointSet,
    anscombe,
    bounding_rect,
    load_table,
    make_toy,
    save_table,
)
from .render import render_fit, render_svg
from .reports import ALL_SCORES, ScoreParams, ScoreReport, compute_scores
from .rng import derive_seed, make_rng
from .scores import (
    KLConfig,
    ScoreValue,
    correlation_score,
    jaccard_score,
    kl_divergence_mc,
    kl_score,
    pearson_r,
)

__all__ = [
    "ALL_SCORES",
    "AnnulusReport",
    "AnnulusSet",
    "AnnulusStat",
    "BoundingRect",
    "ContourPolyline",
    "DegenerateDataError",
    "DensityGrid",
    "DensityModel",
    "EdenConfig",
    "EdenscoreError",
    "GaussianCopulaModel",
    "Histogram2D",
    "InputDataError",
    "KLConfig",
    "LevelThresholds",
    "MomentGaussianModel",
    "PointSet",
    "ResampleSummary",
    "ScoreParams",
    "ScoreReport",
    "ScoreValue",
    "TransportPlan",
    "__version__",
    "annulus_areas_raster",
    "annulus_indices",
    "annulus_of",
    "anscombe",
    "bin_points",
    "bounding_rect",
    "build_annulus_set",
    "cohen_kappa",
    "compute_scores",
    "correlation_score",
    "default_iso_proportions",
    "derive_seed",
    "eden_score",
    "emd_exact",
    "emd_score",
    "evaluate",
    "fit_kde",
    "fit_model",
    "grid_evaluate",
    "iso_thresholds",
    "jaccard_score",
    "kl_divergence_mc",
    "kl_score",
    "load_table",
    "make_rng",
    "make_toy",
    "mann_whitney_u",
    "marching_squares",
    "pearson_r",
    "render_fit",
    "render_svg",
    "resample_scores",
    "sample",
    "sample_kde",
    "save_table",
    "score_once",
]
