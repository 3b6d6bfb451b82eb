"""Command-line entry point.

Subcommands:
  run    execute a configured experiment; writes results JSON/CSV/SVG
  demo   render the two-bells prioritisation heatmaps (5 CSVs + 5 SVGs)
  score  fit a model on a store CSV and rank candidate examples

Exit codes: 0 success, 2 configuration/input error, 3 runtime failure of
every seed. The STREAMSIFT_SEED environment variable supplies a last-resort
seed default when neither flags nor config give one.
"""

import argparse
import json
import sys

import numpy as np

from .acquisition import OBJECTIVES, TargetSet, score_pool
from .config import (
    default_seed,
    load_config,
    validate_model_spec,
)
from .demo import run_demo
from .errors import ConfigError, DataFormatError, StreamsiftError
from .harness import ExperimentConfig, build_model, run_experiment, write_results
from .rng import derive_seed
from .streams import load_csv, load_features_csv

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="streamsift",
        description="Information-theoretic subsampling from labelled data streams",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a configured experiment")
    p_run.add_argument("--config", required=True, help="path to a JSON run config")
    p_run.add_argument(
        "--override", action="append", default=[], metavar="PATH=VALUE",
        help="dotted-path config override, e.g. store.m=250 or seeds=[1,2]",
    )
    p_run.add_argument("--workers", type=int, default=1,
                       help="parallel seed workers (results are order-stable)")

    p_demo = sub.add_parser("demo", help="render the two-bells heatmaps")
    p_demo.add_argument("--resolution", type=int, default=64)
    p_demo.add_argument("--targets", type=int, default=256,
                        help="number of target-input samples")
    p_demo.add_argument("--hypotheses", type=int, default=256)
    p_demo.add_argument("--seed", type=int, default=None)
    p_demo.add_argument("--output-dir", default="demo_output")

    p_score = sub.add_parser("score", help="rank candidates for one store")
    p_score.add_argument("--model", required=True,
                         help="model spec as inline JSON or @path/to/spec.json")
    p_score.add_argument("--store", required=True, help="labelled store CSV")
    p_score.add_argument("--candidates", required=True, help="labelled candidates CSV")
    p_score.add_argument("--targets", default=None, help="feature CSV of target inputs")
    p_score.add_argument("--objective", required=True, choices=OBJECTIVES)
    p_score.add_argument("--eta", type=float, default=1.0)
    p_score.add_argument("--label-column", type=int, default=-1)
    p_score.add_argument("--header", action="store_true",
                         help="store/candidate CSVs carry a header row")
    p_score.add_argument("--seed", type=int, default=None)
    p_score.add_argument("--sample-count", type=int, default=20,
                         help="posterior samples K for sample-based models")
    return parser


def cmd_run(args):
    config_dict = load_config(args.config, overrides=args.override)
    config = ExperimentConfig(**config_dict)
    result = run_experiment(config, workers=max(1, args.workers))
    paths = write_results(result, config.output["dir"])
    ok = result.summary["seeds_ok"]
    failed = result.summary["seeds_failed"]
    for seed in failed:
        run = next(r for r in result.per_seed if r.seed == seed)
        print(f"seed {seed} failed: {run.error}", file=sys.stderr)
    print(
        f"wrote {paths['json']}, {paths['csv']}, {paths['svg']} "
        f"({len(ok)} ok / {len(failed)} failed seeds)"
    )
    if not ok:
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_demo(args):
    seed = args.seed if args.seed is not None else default_seed()
    out = run_demo(
        resolution=args.resolution, num_targets=args.targets,
        num_hypotheses=args.hypotheses, seed=seed, outdir=args.output_dir,
    )
    print(f"wrote {len(out['files'])} files to {args.output_dir}")
    return EXIT_OK


def _load_model_spec(text):
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            raw = json.load(fh)
    else:
        raw = json.loads(text)
    return validate_model_spec(raw)


def cmd_score(args):
    seed = args.seed if args.seed is not None else default_seed()
    try:
        spec = _load_model_spec(args.model)
    except (json.JSONDecodeError, FileNotFoundError) as exc:
        raise ConfigError(f"cannot read model spec: {exc}") from None
    store = load_csv(args.store, args.label_column, header=args.header)
    candidates = load_csv(args.candidates, args.label_column, header=args.header)

    targets = None
    if args.objective in ("epig", "la_epig"):
        if args.targets is None:
            raise ConfigError(f"objective {args.objective!r} needs --targets")
        targets = TargetSet(load_features_csv(args.targets))
    if args.objective == "rho_loss":
        raise ConfigError(
            "rho_loss scoring needs an auxiliary holdout model; use the run "
            "command's harness instead"
        )

    num_classes = max(2, max(ex.label for ex in store + candidates) + 1)
    num_features = store[0].features.shape[0]
    if spec["kind"] == "dirichlet" and (spec["lower"] is None or spec["upper"] is None):
        pts = [ex.features for ex in store + candidates]
        if targets is not None:
            pts.extend(targets.inputs)
        stacked = np.vstack(pts)
        spec = dict(spec, lower=(stacked.min(axis=0) - 1e-6).tolist(),
                    upper=(stacked.max(axis=0) + 1e-6).tolist())
    training = {"lr": 0.01, "max_steps": 200, "weight_decay": 1e-4, "val_fraction": 0.1}
    model = build_model(spec, num_classes, num_features, args.sample_count,
                        training, derive_seed(seed, 1))
    model.fit(store)
    ranked = score_pool(args.objective, model, candidates, targets=targets,
                        seed=derive_seed(seed, 2), eta=args.eta)
    print("index,score,rank")
    for rank, item in enumerate(ranked, start=1):
        print(f"{item.candidate_index},{item.value!r},{rank}")
    return EXIT_OK


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    handler = {"run": cmd_run, "demo": cmd_demo, "score": cmd_score}[args.command]
    try:
        return handler(args)
    except (ConfigError, DataFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StreamsiftError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
