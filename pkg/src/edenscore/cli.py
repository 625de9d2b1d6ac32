"""Command-line interface.

Subcommands: score, demo, resample, render, toy. Flags override a flat
``key = value`` config file (given by --config or the EDENSCORE_CONFIG
environment variable), which overrides built-in defaults. Every run logs its
effective parameters, seeds, and library version to stderr; the data outputs
on stdout or disk are byte-deterministic given the seed.

Exit codes: 0 success, 2 input/usage error, 3 numerical degeneracy.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, fields

from . import __version__
from .errors import DegenerateDataError, EdenscoreError, InputDataError
from .evalkit import fit_model, resample_scores, sample
from .pointsets import PointSet, anscombe, load_table, make_toy, save_table
from .render import render_fit
from .reports import ALL_SCORES, ScoreParams, ScoreReport, compute_scores

log = logging.getLogger("edenscore.cli")

CONFIG_ENV_VAR = "EDENSCORE_CONFIG"
DATASAURUS_ENV_VAR = "EDENSCORE_DATASAURUS"

_DELIMITER_NAMES = {"comma": ",", "tab": "\t"}


@dataclass
class RunConfig:
    """Effective parameters of one CLI invocation after merging defaults,
    config file, and flags."""

    subcommand: str
    real: str | None = None
    synth: str | None = None
    x: str = "x"
    y: str = "y"
    delimiter: str = "comma"
    filter: str | None = None
    scores: str = "all"
    seed: int = 0
    format: str = "text"
    out: str | None = None
    emd_k: float = 1.0
    emd_bins: int = 32
    eden_annuli: int = 5
    eden_mc: int = 200_000
    kl_samples: int = 20_000
    jaccard_thresh: float = 0.1
    # subcommand-specific
    name: str | None = None  # demo name / toy kind
    data: str | None = None  # datasaurus TSV for demo dino
    model: str = "copula"
    score: str = "emd"
    repeats: int = 100
    n: int = 1000

    def score_params(self) -> ScoreParams:
        return ScoreParams(
            emd_k=self.emd_k,
            emd_bins=self.emd_bins,
            jaccard_thresh=self.jaccard_thresh,
            kl_samples=self.kl_samples,
            eden_annuli=self.eden_annuli,
            eden_mc=self.eden_mc,
        )

    def score_names(self) -> tuple:
        if self.scores == "all":
            return ALL_SCORES
        names = tuple(s.strip() for s in self.scores.split(",") if s.strip())
        if not names:
            raise InputDataError("empty --scores list")
        return names


def load_config_file(path) -> dict:
    """Parse a flat ``key = value`` config file; # starts a comment."""
    values = {}
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise InputDataError(f"cannot open config file {path}: {exc}") from exc
    with fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InputDataError(f"{path}:{lineno}: expected key = value")
            key, _, val = line.partition("=")
            values[key.strip().replace("-", "_")] = val.strip().strip("\"'")
    return values


def _coerce(value: str, target_type):
    if target_type is int:
        return int(value)
    if target_type is float:
        return float(value)
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edenscore",
        description="Compare 2D point distributions with five quality scores.",
    )
    parser.add_argument("--version", action="version", version=f"edenscore {__version__}")
    parser.add_argument("--config", help="path to a key = value config file")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_io_flags(p, synth=True):
        p.add_argument("--real", help="path to the real/reference table")
        if synth:
            p.add_argument("--synth", help="path to the synthetic/model table")
        p.add_argument("--x", help="x column name (default x)")
        p.add_argument("--y", help="y column name (default y)")
        p.add_argument("--delimiter", choices=("comma", "tab"), help="field delimiter")
        p.add_argument(
            "--filter",
            metavar="COL=VALUE",
            help="keep only rows where COL equals VALUE (tables lacking COL load whole)",
        )

    def add_score_flags(p):
        p.add_argument("--seed", type=int, help="base RNG seed (default 0)")
        p.add_argument("--emd-k", dest="emd_k", type=float, help="EMD score exponent k")
        p.add_argument("--emd-bins", dest="emd_bins", type=int, help="EMD bins per axis")
        p.add_argument("--eden-annuli", dest="eden_annuli", type=int, help="annulus count")
        p.add_argument("--eden-mc", dest="eden_mc", type=int, help="eden sprinkle size")
        p.add_argument("--kl-samples", dest="kl_samples", type=int, help="KL MC samples")
        p.add_argument(
            "--jaccard-thresh", dest="jaccard_thresh", type=float, help="density ratio threshold"
        )

    p_score = sub.add_parser("score", help="score a (real, synth) pair")
    add_io_flags(p_score)
    add_score_flags(p_score)
    p_score.add_argument("--scores", help="comma list from {%s} or 'all'" % ",".join(ALL_SCORES))
    p_score.add_argument("--format", choices=("json", "csv", "text"), help="output format")
    p_score.add_argument("--out", help="output file (default stdout)")

    p_demo = sub.add_parser("demo", help="run a scripted demo experiment")
    p_demo.add_argument("name", choices=("anscombe", "dino", "stripes", "inflation"))
    p_demo.add_argument("--data", help="datasaurus TSV path (dino demo)")
    p_demo.add_argument("--out", help="output directory")
    add_score_flags(p_demo)

    p_res = sub.add_parser("resample", help="repeat-sample a model and summarize one score")
    add_io_flags(p_res, synth=False)
    add_score_flags(p_res)
    p_res.add_argument("--model", choices=("copula", "moment_gaussian"), help="baseline model")
    p_res.add_argument("--score", choices=ALL_SCORES, help="score to resample")
    p_res.add_argument("--repeats", type=int, help="number of repeat samples")
    p_res.add_argument("--out", help="output path prefix (writes .json and .csv)")

    p_render = sub.add_parser("render", help="render the two-KDE contour overlay as SVG")
    add_io_flags(p_render)
    add_score_flags(p_render)
    p_render.add_argument("--out", help="output SVG path (default fit.svg)")

    p_toy = sub.add_parser("toy", help="emit a toy dataset as a table")
    p_toy.add_argument("name", choices=("trimodal", "stripes", "dart"))
    p_toy.add_argument("--n", type=int, help="number of points (default 1000)")
    p_toy.add_argument("--seed", type=int, help="RNG seed")
    p_toy.add_argument("--delimiter", choices=("comma", "tab"), help="field delimiter")
    p_toy.add_argument("--out", help="output table path (default stdout)")
    return parser


def make_run_config(argv=None) -> RunConfig:
    parser = build_parser()
    args = vars(parser.parse_args(argv))
    config_path = args.pop("config", None) or os.environ.get(CONFIG_ENV_VAR)
    file_values = load_config_file(config_path) if config_path else {}

    cfg = RunConfig(subcommand=args.pop("subcommand"))
    field_types = {f.name: f.type for f in fields(RunConfig)}
    for key, raw in file_values.items():
        if key not in field_types:
            raise InputDataError(f"unknown config key {key!r}")
        current = getattr(cfg, key)
        target = type(current) if current is not None else str
        setattr(cfg, key, _coerce(raw, target))
    for key, val in args.items():
        if val is not None:
            setattr(cfg, key, val)
    if cfg.delimiter not in _DELIMITER_NAMES:
        raise InputDataError(f"delimiter must be comma or tab, got {cfg.delimiter!r}")
    return cfg


def _parse_filter(cfg: RunConfig):
    if cfg.filter is None:
        return None, None
    if "=" not in cfg.filter:
        raise InputDataError(f"--filter expects COL=VALUE, got {cfg.filter!r}")
    col, _, val = cfg.filter.partition("=")
    return col.strip(), val


def _load_input(cfg: RunConfig, path, role: str) -> tuple[PointSet, bool]:
    """Load one input table; the bool reports whether the --filter applied.

    The filter binds only to tables that carry its column, so a pair like
    (datasaurus.tsv, plain synth.csv) works; the caller errors out if the
    filter bound to no table at all.
    """
    if path is None:
        raise InputDataError(f"missing required --{role} input path")
    delim = _DELIMITER_NAMES[cfg.delimiter]
    fcol, fval = _parse_filter(cfg)
    if fcol is not None:
        try:
            ps = load_table(path, cfg.x, cfg.y, delim, fcol, fval, label=f"{path}[{fcol}={fval}]")
            return ps, True
        except InputDataError as exc:
            if "missing filter column" not in str(exc):
                raise
            log.info("%s has no column %r; filter not applied to it", path, fcol)
    return load_table(path, cfg.x, cfg.y, delim, label=str(path)), False


def _check_filter_bound(cfg: RunConfig, *applied: bool) -> None:
    if cfg.filter is not None and not any(applied):
        col, _, _ = cfg.filter.partition("=")
        raise InputDataError(f"--filter column {col.strip()!r} found in no input table")


def cmd_score(cfg: RunConfig) -> ScoreReport:
    real, f_real = _load_input(cfg, cfg.real, "real")
    synth, f_synth = _load_input(cfg, cfg.synth, "synth")
    _check_filter_bound(cfg, f_real, f_synth)
    report = compute_scores(
        real, synth, names=cfg.score_names(), seed=cfg.seed, params=cfg.score_params()
    )
    _emit(cfg, report)
    return report


def _emit(cfg: RunConfig, report: ScoreReport) -> None:
    if cfg.format == "json":
        payload = report.to_json()
    elif cfg.format == "csv":
        payload = report.to_csv()
    else:
        payload = report.to_text()
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
        log.info("wrote %s", cfg.out)
    else:
        sys.stdout.write(payload)


def _demo_dir(cfg: RunConfig) -> str:
    out = cfg.out or f"edenscore_demo_{cfg.name}"
    os.makedirs(out, exist_ok=True)
    return out


def _score_and_render(cfg, out_dir, tag, real, synth) -> ScoreReport:
    report = compute_scores(real, synth, seed=cfg.seed, params=cfg.score_params())
    path = os.path.join(out_dir, f"{tag}_scores.json")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(report.to_json())
    render_fit(real, synth, os.path.join(out_dir, f"{tag}_fit.svg"), report=report)
    log.info("%s: %s", tag, {sv.name: round(sv.value, 4) for sv in report.scores})
    return report


def cmd_demo(cfg: RunConfig) -> dict:
    """Run one scripted experiment; returns {tag: ScoreReport}."""
    out_dir = _demo_dir(cfg)
    reports: dict[str, ScoreReport] = {}
    if cfg.name == "anscombe":
        reports["anscombe_I_vs_II"] = _score_and_render(
            cfg, out_dir, "anscombe_I_vs_II", anscombe("I"), anscombe("II")
        )
    elif cfg.name == "dino":
        path = cfg.data or os.environ.get(DATASAURUS_ENV_VAR)
        if not path or not os.path.exists(path):
            raise InputDataError(
                "the dino demo needs the Datasaurus TSV: pass --data PATH or set "
                f"{DATASAURUS_ENV_VAR} (the file is not redistributed with this package)"
            )
        dino = load_table(path, "x", "y", "\t", "dataset", "dino", label="dino")
        model = fit_model("moment_gaussian", dino)
        synth = sample(model, len(dino), cfg.seed)
        reports["dino_vs_moment_gaussian"] = _score_and_render(
            cfg, out_dir, "dino_vs_moment_gaussian", dino, synth
        )
    elif cfg.name == "stripes":
        real = make_toy("stripes", 1000, cfg.seed)
        model = fit_model("copula", real)
        matched = sample(model, len(real), cfg.seed + 1)
        oversampled = sample(model, 10 * len(real), cfg.seed + 2)
        reports["stripes_matched"] = _score_and_render(
            cfg, out_dir, "stripes_matched", real, matched
        )
        reports["stripes_oversampled"] = _score_and_render(
            cfg, out_dir, "stripes_oversampled", real, oversampled
        )
        _log_demo_table(reports)
    else:  # inflation
        real = make_toy("trimodal", 1000, cfg.seed)
        gauss = sample(fit_model("moment_gaussian", real), len(real), cfg.seed + 1)
        cop = sample(fit_model("copula", real), len(real), cfg.seed + 2)
        reports["trimodal_vs_moment_gaussian"] = _score_and_render(
            cfg, out_dir, "trimodal_vs_moment_gaussian", real, gauss
        )
        reports["trimodal_vs_copula"] = _score_and_render(
            cfg, out_dir, "trimodal_vs_copula", real, cop
        )
        _log_demo_table(reports)
    log.info("demo outputs in %s", out_dir)
    return reports


def _log_demo_table(reports: dict) -> None:
    for tag, report in reports.items():
        row = "  ".join(f"{sv.name}={sv.value:.3f}" for sv in report.scores)
        log.info("%-28s %s", tag, row)


def cmd_resample(cfg: RunConfig):
    real, f_real = _load_input(cfg, cfg.real, "real")
    _check_filter_bound(cfg, f_real)
    model = fit_model(cfg.model, real)
    params = {}
    if cfg.score == "emd":
        params = {"k": cfg.emd_k, "nx": cfg.emd_bins, "ny": cfg.emd_bins}
    elif cfg.score == "jaccard":
        params = {"ratio_thresh": cfg.jaccard_thresh}
    elif cfg.score == "kl":
        params = {"n_samples": cfg.kl_samples}
    elif cfg.score == "eden":
        params = {"n_annuli": cfg.eden_annuli, "n_mc": cfg.eden_mc}
    summary = resample_scores(
        real, model, cfg.score, cfg.repeats, cfg.seed, score_params=params
    )
    prefix = cfg.out or f"resample_{cfg.score}"
    summary.to_json(prefix + ".json")
    summary.to_csv(prefix + ".csv")
    log.info(
        "resample %s x%d: mean=%.4f sd=%.4f median=%.4f iqr=%.4f -> %s.{json,csv}",
        cfg.score, cfg.repeats, summary.mean, summary.sd, summary.median, summary.iqr, prefix,
    )
    return summary


def cmd_render(cfg: RunConfig) -> str:
    real, f_real = _load_input(cfg, cfg.real, "real")
    synth, f_synth = _load_input(cfg, cfg.synth, "synth")
    _check_filter_bound(cfg, f_real, f_synth)
    out = cfg.out or "fit.svg"
    report = compute_scores(real, synth, seed=cfg.seed, params=cfg.score_params())
    render_fit(real, synth, out, report=report)
    log.info("wrote %s", out)
    return out


def cmd_toy(cfg: RunConfig) -> PointSet:
    ps = make_toy(cfg.name, cfg.n, cfg.seed)
    delim = _DELIMITER_NAMES[cfg.delimiter]
    if cfg.out:
        save_table(ps, cfg.out, delim)
        log.info("wrote %s (%d points)", cfg.out, len(ps))
    else:
        sys.stdout.write(f"x{delim}y\n")
        for x, y in ps.xy:
            sys.stdout.write(f"{float(x)!r}{delim}{float(y)!r}\n")
    return ps


_COMMANDS = {
    "score": cmd_score,
    "demo": cmd_demo,
    "resample": cmd_resample,
    "render": cmd_render,
    "toy": cmd_toy,
}


def main(argv=None) -> int:
    logging.basicConfig(
        level=logging.INFO, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr
    )
    try:
        cfg = make_run_config(argv)
        log.info("edenscore %s", __version__)
        log.info("run config: %s", cfg)
        _COMMANDS[cfg.subcommand](cfg)
    except DegenerateDataError as exc:
        log.error("%s", exc)
        return 3
    except EdenscoreError as exc:
        log.error("%s", exc)
        return 2
    except OSError as exc:
        log.error("%s", exc)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
