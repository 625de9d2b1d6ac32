"""Baseline generative models, repeat-sampling summaries, and the two
agreement statistics used to compare scores against human judgment.

The two baselines bracket the quality range the scores must separate:
moment_gaussian is the untrained straw man (matched per-axis mean/sd,
independent axes); the Gaussian copula reproduces both marginals exactly and
couples them through a single normal-scores correlation, so it looks almost
perfect to equipoint scores while still missing multimodal structure.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from .eden import EdenConfig, eden_score
from .emd import emd_score
from .errors import DegenerateDataError, InputDataError
from .pointsets import PointSet
from .rng import derive_seed, make_rng
from .scores import KLConfig, ScoreValue, correlation_score, jaccard_score, kl_score

MODEL_KINDS = ("moment_gaussian", "copula")


@dataclass(frozen=True)
class MomentGaussianModel:
    """Independent per-axis gaussian with the data's mean and sd."""

    kind = "moment_gaussian"
    mean: tuple
    sd: tuple

    def sample_xy(self, n: int, rng: np.random.Generator) -> np.ndarray:
        z = rng.standard_normal((n, 2))
        return np.asarray(self.mean) + z * np.asarray(self.sd)


@dataclass(frozen=True)
class GaussianCopulaModel:
    """Empirical marginals coupled by a normal-scores Pearson correlation.

    Marginal inverse CDFs interpolate linearly between order statistics at
    plotting positions k/(n+1) and clamp to the observed min/max.
    """

    kind = "copula"
    x_sorted: np.ndarray
    y_sorted: np.ndarray
    rho: float

    def __post_init__(self):
        if not -1.0 <= self.rho <= 1.0:
            raise InputDataError(f"correlation {self.rho} outside [-1, 1]")
        for arr in (self.x_sorted, self.y_sorted):
            if np.any(np.diff(arr) < 0):
                raise InputDataError("inverse-CDF tables must be nondecreasing")

    def sample_xy(self, n: int, rng: np.random.Generator) -> np.ndarray:
        z = rng.standard_normal((n, 2))
        # chol of [[1, rho], [rho, 1]]
        r = min(max(self.rho, -1.0 + 1e-12), 1.0 - 1e-12)
        z2 = r * z[:, 0] + math.sqrt(1.0 - r * r) * z[:, 1]
        u1 = ndtr(z[:, 0])
        u2 = ndtr(z2)
        m = len(self.x_sorted)
        pp = np.arange(1, m + 1) / (m + 1.0)
        x = np.interp(u1, pp, self.x_sorted)
        y = np.interp(u2, pp, self.y_sorted)
        return np.column_stack([x, y])


def fit_model(kind: str, ps: PointSet):
    """Fit one of the baseline generative models to a point set."""
    if kind not in MODEL_KINDS:
        raise InputDataError(f"unknown model kind {kind!r}; use one of {MODEL_KINDS}")
    x = ps.x
    y = ps.y
    if x.std() == 0.0 or y.std() == 0.0:
        raise DegenerateDataError("zero variance on an axis; cannot fit a model")
    if kind == "moment_gaussian":
        return MomentGaussianModel(
            mean=(float(x.mean()), float(y.mean())),
            sd=(float(x.std(ddof=1)), float(y.std(ddof=1))),
        )
    n = len(ps)
    # midranks -> plotting positions -> normal scores
    zx = ndtri(_midranks(x) / (n + 1.0))
    zy = ndtri(_midranks(y) / (n + 1.0))
    rho = float(np.corrcoef(zx, zy)[0, 1])
    return GaussianCopulaModel(
        x_sorted=np.sort(x), y_sorted=np.sort(y), rho=rho
    )


def _midranks(v: np.ndarray) -> np.ndarray:
    """Average ranks (1-based) with ties sharing their midrank."""
    order = np.argsort(v, kind="stable")
    ranks = np.empty(len(v), dtype=np.float64)
    sv = v[order]
    i = 0
    while i < len(sv):
        j = i
        while j + 1 < len(sv) and sv[j + 1] == sv[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def sample(model, n: int, seed: int) -> PointSet:
    """Draw n points from a fitted model; deterministic given the seed."""
    if n < 3:
        raise InputDataError(f"need n >= 3, got {n}")
    rng = make_rng(seed)
    xy = model.sample_xy(n, rng)
    return PointSet(xy, label=f"{model.kind}_n{n}_seed{seed}")


@dataclass(frozen=True)
class ResampleSummary:
    """All raw score values from repeat sampling plus their summaries.

    Percentiles use the nearest-rank rule: percentile(p) is the value at
    rank ceil(p/100 * n) of the sorted values.
    """

    score_name: str
    n_repeats: int
    values: np.ndarray
    base_seed: int

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (self.n_repeats,):
            raise InputDataError("values length must equal n_repeats")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def mean(self) -> float:
        return float(self.values.mean())

    @property
    def sd(self) -> float:
        return float(self.values.std(ddof=1))

    def percentile(self, p: float) -> float:
        if not 0 < p <= 100:
            raise InputDataError(f"percentile must be in (0, 100], got {p}")
        v = np.sort(self.values)
        rank = int(np.ceil(p / 100.0 * len(v)))
        return float(v[max(rank, 1) - 1])

    @property
    def median(self) -> float:
        return self.percentile(50)

    @property
    def iqr(self) -> float:
        return self.percentile(75) - self.percentile(25)

    def to_json_dict(self) -> dict:
        return {
            "score_name": self.score_name,
            "n_repeats": self.n_repeats,
            "base_seed": self.base_seed,
            "mean": self.mean,
            "sd": self.sd,
            "median": self.median,
            "iqr": self.iqr,
            "percentile_5": self.percentile(5),
            "percentile_95": self.percentile(95),
            "values": [float(v) for v in self.values],
        }

    def to_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2)
            fh.write("\n")

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("repeat,value\n")
            for i, v in enumerate(self.values):
                fh.write(f"{i},{float(v)!r}\n")


def score_once(score_name: str, real: PointSet, synth: PointSet, seed: int, params: dict | None = None):
    """Compute a single named score; stochastic scores consume the seed."""
    params = dict(params or {})
    if score_name == "correlation":
        return correlation_score(real, synth)
    if score_name == "emd":
        return emd_score(real, synth, **params)
    if score_name == "jaccard":
        return jaccard_score(real, synth, **params)
    if score_name == "kl":
        return kl_score(real, synth, KLConfig(seed=seed, **params))
    if score_name == "eden":
        report = eden_score(real, synth, EdenConfig(seed=seed, **params))
        return ScoreValue(
            name="eden", value=report.eden, stderr=report.eden_stderr, seed=seed
        )
    raise InputDataError(f"unknown score name {score_name!r}")


def resample_scores(
    real: PointSet,
    model,
    score_name: str,
    n_repeats: int,
    base_seed: int,
    score_params: dict | None = None,
) -> ResampleSummary:
    """Score n_repeats fresh samples of size |real| against the real data.

    Repeat i draws its sample with derive_seed(base_seed, i, 0) and scores
    with derive_seed(base_seed, i, 1), so repeats are independent and the
    whole run is reproducible from base_seed alone.
    """
    if n_repeats < 2:
        raise InputDataError(f"n_repeats must be >= 2, got {n_repeats}")
    values = np.empty(n_repeats, dtype=np.float64)
    for i in range(n_repeats):
        synth = sample(model, len(real), derive_seed(base_seed, i, 0))
        result = score_once(score_name, real, synth, derive_seed(base_seed, i, 1), score_params)
        values[i] = result.value
    return ResampleSummary(
        score_name=score_name, n_repeats=n_repeats, values=values, base_seed=base_seed
    )


def cohen_kappa(a, b) -> float:
    """Cohen's kappa for two equal-length lists of binary choices.

    kappa = (p_o - p_e) / (1 - p_e). When both raters agree perfectly and
    the expected agreement is also 1 (all-identical inputs), returns 1 by
    convention.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 1 or len(a) < 1:
        raise InputDataError("inputs must be equal-length nonempty 1D sequences")
    cats = np.unique(np.concatenate([a, b]))
    if len(cats) > 2:
        raise InputDataError(f"inputs must be binary choices, saw {len(cats)} values")
    if len(cats) == 1:
        return 1.0
    a01 = (a == cats[1]).astype(np.int64)
    b01 = (b == cats[1]).astype(np.int64)
    n = len(a01)
    p_o = float((a01 == b01).mean())
    p_a1 = a01.mean()
    p_b1 = b01.mean()
    p_e = float(p_a1 * p_b1 + (1 - p_a1) * (1 - p_b1))
    if p_e == 1.0:
        return 1.0 if p_o == 1.0 else -1.0
    return float((p_o - p_e) / (1.0 - p_e))


def mann_whitney_u(xs, ys) -> tuple[float, float]:
    """Mann-Whitney U with midrank ties; two-sided p from the normal
    approximation with tie and continuity corrections. Returns (U of xs, p)."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if len(xs) == 0 or len(ys) == 0:
        raise InputDataError("both samples must be nonempty")
    n1 = len(xs)
    n2 = len(ys)
    pooled = np.concatenate([xs, ys])
    ranks = _midranks(pooled)
    u1 = float(ranks[:n1].sum() - n1 * (n1 + 1) / 2.0)
    mu = n1 * n2 / 2.0
    n = n1 + n2
    # tie correction to the variance
    _, counts = np.unique(pooled, return_counts=True)
    tie_term = float((counts.astype(np.float64) ** 3 - counts).sum())
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if var <= 0:
        return u1, 1.0
    u_big = max(u1, n1 * n2 - u1)
    z = (u_big - mu - 0.5) / math.sqrt(var)
    p = 2.0 * (1.0 - ndtr(z))
    return u1, float(min(max(p, 0.0), 1.0))
