#!/usr/bin/env python3
"""Repeat-sampling spread of each score at several training sizes.

For each training size, fits the chosen model to a fresh toy cloud and
scores many same-size resamples against it, reporting the percentile
band per score. Small training sets give wide bands: a single sample's
score is then a noisy draw, not a verdict.
"""

import argparse

from edenscore import fit_model, make_toy, resample_scores

# Cheap settings per stochastic score; exact scores take none.
FAST_PARAMS = {
    "kl": {"n_samples": 4000},
    "eden": {"n_mc": 10_000, "grid_n": 128},
}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--toy", default="trimodal")
    ap.add_argument("--model", default="moment_gaussian")
    ap.add_argument("--sizes", type=int, nargs="+", default=[20, 80, 320])
    ap.add_argument("--repeats", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument(
        "--scores", nargs="+",
        default=["correlation", "emd", "jaccard", "kl", "eden"],
    )
    args = ap.parse_args()

    print(f"{'score':>11s}  {'n':>5s}  {'median':>7s}  {'iqr':>7s}  "
          f"{'p5':>7s}  {'p95':>7s}")
    for n in args.sizes:
        real = make_toy(args.toy, n, args.seed)
        model = fit_model(args.model, real)
        for score in args.scores:
            summary = resample_scores(
                real, model, score, args.repeats, args.seed,
                score_params=FAST_PARAMS.get(score, {}),
            )
            print(f"{score:>11s}  {n:5d}  {summary.median:7.4f}  "
                  f"{summary.iqr:7.4f}  {summary.percentile(5):7.4f}  "
                  f"{summary.percentile(95):7.4f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
