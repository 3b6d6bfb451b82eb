"""End-to-end experiment driver: greedy subsampling interleaved with model
training over a stream, with accuracy tracking, cost accounting, seeded
repeats and results serialization.

The driver realizes the addition-based store strategy (D): at each stream
step it moves ``quota`` examples from the step's candidate batch into the
store, one at a time, refitting the model before each decision; after the
step it refits on the full store and records test accuracy. Failed seeds are
reported, excluded from aggregates, and never abort the batch.
"""

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .acquisition import TargetSet, score_pool
from .config import validate_config
from .errors import ConfigError, FitError, StreamsiftError
from .models import (
    BootstrapForest,
    DirichletHistogramClassifier,
    DropoutMLP,
    FiniteHypothesisModel,
    dataset_arrays,
)
from .rng import derive_seed, rng_from
from .store import CostLedger
from .streams import (
    load_csv,
    load_features_csv,
    load_idx,
    permuted_stream,
    split_stream,
    stationary_stream,
    synth_blobs,
)
from .svgrender import learning_curve_svg

# purpose tags for seed derivation
_TAG_DATA, _TAG_MODEL, _TAG_SELECT, _TAG_TARGETS, _TAG_AUX, _TAG_SPLIT = range(6)


@dataclass
class ExperimentConfig:
    """Validated experiment description (see config.validate_config)."""

    stream: dict
    model: dict
    objective: dict
    store: dict
    targets: dict
    sampling: dict
    training: dict
    seeds: list
    output: dict

    @classmethod
    def from_dict(cls, raw):
        return cls(**validate_config(raw))

    def echo(self):
        return {
            "stream": self.stream, "model": self.model, "objective": self.objective,
            "store": self.store, "targets": self.targets, "sampling": self.sampling,
            "training": self.training, "seeds": self.seeds, "output": self.output,
        }


@dataclass
class SeedRun:
    seed: int
    status: str = "ok"
    error: str = ""
    accuracies: list = field(default_factory=list)
    store_track: list = field(default_factory=list)
    selections: list = field(default_factory=list)
    ledger: dict = field(default_factory=dict)


@dataclass
class ExperimentResult:
    config: dict
    per_seed: list
    summary: dict
    timing: dict

    def to_dict(self):
        return {
            "config": self.config,
            "objective": self.config["objective"]["name"],
            "per_seed": [vars(run).copy() for run in self.per_seed],
            "summary": self.summary,
            "timing": self.timing,
        }


# --- data preparation ---------------------------------------------------------


def _split_indices(n, fractions, rng):
    """Shuffle 0..n-1 and split off len(fractions) tail pools."""
    perm = rng.permutation(n)
    counts = [int(np.floor(f * n)) for f in fractions]
    pools, start = [], 0
    for c in counts:
        pools.append(perm[start:start + c])
        start += c
    return perm[start:], pools


def prepare_data(config, run_seed):
    """Build the per-seed stream schedule, eval set, target pool and holdout.

    Synthetic sources draw fresh data per run seed (shared class means come
    from the same generative draw); file sources are split per run seed. The
    objective never enters any of this, so paired comparisons across
    objectives see identical data at equal seeds.
    """
    ds = config.stream["dataset"]
    stream_seed = config.stream["seed"]
    data_seed = derive_seed(stream_seed, run_seed, _TAG_DATA)

    if ds["source"] == "blobs":
        total_per_class = (
            ds["per_class"] + ds["eval_per_class"] + ds["target_per_class"]
            + ds["holdout_per_class"]
        )
        full = synth_blobs(
            ds["num_classes"], total_per_class, dim=ds["dim"],
            spread=ds["spread"], seed=data_seed, box=ds["box"],
        )
        rng = rng_from(data_seed, _TAG_SPLIT)
        stream_data, eval_set, target_data, holdout = [], [], [], []
        for c in range(ds["num_classes"]):
            members = [ex for ex in full if ex.label == c]
            order = rng.permutation(len(members))
            cut1 = ds["per_class"]
            cut2 = cut1 + ds["eval_per_class"]
            cut3 = cut2 + ds["target_per_class"]
            stream_data += [members[i] for i in order[:cut1]]
            eval_set += [members[i] for i in order[cut1:cut2]]
            target_data += [members[i] for i in order[cut2:cut3]]
            holdout += [members[i] for i in order[cut3:]]
    else:
        if ds["source"] == "csv":
            full = load_csv(ds["path"], ds["label_column"], header=ds["header"])
        else:
            full = load_idx(ds["images"], ds["labels"])
        rng = rng_from(data_seed, _TAG_SPLIT)
        keep, (ev, tg, ho) = _split_indices(
            len(full),
            [ds["eval_fraction"], ds["target_fraction"], ds["holdout_fraction"]],
            rng,
        )
        stream_data = [full[i] for i in sorted(keep)]
        eval_set = [full[i] for i in sorted(ev)]
        target_data = [full[i] for i in sorted(tg)]
        holdout = [full[i] for i in sorted(ho)]

    if not eval_set:
        raise ConfigError("evaluation set is empty; increase its share of the data")

    kind = config.stream["kind"]
    sched_seed = derive_seed(stream_seed, run_seed, _TAG_SPLIT, 1)
    if kind == "split":
        schedule = split_stream(
            stream_data, config.stream["steps"], seed=sched_seed,
            examples_per_step=config.stream["examples_per_step"],
        )
    elif kind == "permuted":
        schedule = permuted_stream(stream_data, config.stream["steps"], seed=sched_seed)
    else:
        schedule = stationary_stream(stream_data, config.stream["steps"], seed=sched_seed)

    labels = {ex.label for ex in stream_data} | {ex.label for ex in eval_set}
    num_classes = max(labels) + 1
    target_pool = (
        np.stack([ex.features for ex in target_data]) if target_data else np.zeros((0, 0))
    )
    return {
        "schedule": schedule,
        "eval_set": eval_set,
        "target_pool": target_pool,
        "holdout": holdout,
        "num_classes": num_classes,
        "num_features": stream_data[0].features.shape[0],
    }


def build_model(spec, num_classes, num_features, K, training, seed, data=None):
    """Instantiate a model from its validated spec dict."""
    kind = spec["kind"]
    if kind == "forest":
        return BootstrapForest(
            num_classes, num_trees=K, max_depth=spec["max_depth"],
            min_leaf=spec["min_leaf"], beta=spec["beta"], seed=seed,
        )
    if kind == "dropout_mlp":
        return DropoutMLP(
            num_features, num_classes, hidden=tuple(spec["hidden"]),
            dropout_rate=spec["dropout_rate"], learning_rate=training["lr"],
            max_steps=training["max_steps"], weight_decay=training["weight_decay"],
            val_fraction=training["val_fraction"], num_samples=K, seed=seed,
        )
    if kind == "dirichlet":
        lower, upper = spec["lower"], spec["upper"]
        if lower is None or upper is None:
            if data is None:
                raise ConfigError("dirichlet model needs explicit lower/upper bounds here")
            pts = [ex.features for batch in data["schedule"] for ex in batch]
            pts += [ex.features for ex in data["eval_set"]]
            if data["target_pool"].size:
                pts.append(data["target_pool"].reshape(-1, data["target_pool"].shape[-1]))
            stacked = np.vstack([np.atleast_2d(p) for p in pts])
            lower = (stacked.min(axis=0) - 1e-6).tolist()
            upper = (stacked.max(axis=0) + 1e-6).tolist()
        return DirichletHistogramClassifier(
            num_classes, lower, upper, bins_per_dim=spec["bins_per_dim"],
            alpha0=spec["alpha0"], num_samples=K, seed=seed,
        )
    if kind == "finite_hypothesis":
        return FiniteHypothesisModel(spec["grid"], spec["tables"], spec["prior"])
    raise ConfigError(f"unknown model.kind {kind!r}")


def build_target_set(spec, context, seed):
    """Draw a TargetSet per the configured source.

    "global" samples without replacement from the held-out unlabelled pool,
    "seen_so_far" from inputs of the current and earlier stream steps,
    "fixed" reads a feature CSV verbatim.
    """
    source = spec["source"]
    if source == "fixed":
        return TargetSet(load_features_csv(spec["path"]))
    if source == "global":
        pool = context["target_pool"]
    elif source == "seen_so_far":
        seen = [
            ex.features
            for batch in context["schedule"].steps[: context["step"] + 1]
            for ex in batch
        ]
        pool = np.stack(seen)
    else:
        raise ConfigError(f"unknown targets.source {source!r}")
    M = spec["M"]
    if M > len(pool):
        raise ConfigError(
            f"targets.M = {M} exceeds the available pool of {len(pool)} inputs"
        )
    rng = rng_from(seed)
    idx = np.sort(rng.choice(len(pool), size=M, replace=False))
    return TargetSet(pool[idx])


def evaluate_accuracy(model, eval_set):
    """Zero-one accuracy of argmax predictions; ties go to the lowest class."""
    if not eval_set:
        raise ConfigError("evaluation set is empty")
    X, y = dataset_arrays(eval_set)
    marg = model.marginal_predict_batch(X)
    return float((marg.argmax(axis=1) == y).mean())


# --- main loop ----------------------------------------------------------------


def _try_fit(model, store):
    """Fit on the current store; False when the model rejects it (cold start)."""
    try:
        model.fit(store)
        return True
    except FitError:
        return False


def _score_summary(ranked):
    finite = [s.value for s in ranked if np.isfinite(s.value)]
    if not finite:
        return {"max": None, "mean": None, "min": None}
    return {
        "max": float(max(finite)),
        "mean": float(np.mean(finite)),
        "min": float(min(finite)),
    }


def _run_seed(config, run_seed, timing):
    objective = config.objective["name"]
    eta = config.objective["eta"]
    quota = config.store["quota"]
    if config.store["strategy"] != "D":
        raise ConfigError(
            "run_experiment implements the addition-based store strategy 'D'; "
            f"got {config.store['strategy']!r}"
        )

    t0 = time.perf_counter()
    data = prepare_data(config, run_seed)
    timing["data_prep"] += time.perf_counter() - t0

    K = config.sampling["K"]
    model = build_model(
        config.model, data["num_classes"], data["num_features"], K,
        config.training, derive_seed(run_seed, _TAG_MODEL), data=data,
    )
    aux_model = None
    if objective == "rho_loss":
        if not data["holdout"]:
            raise ConfigError(
                "rho_loss needs a non-empty holdout split for the auxiliary model"
            )
        aux_model = build_model(
            config.model, data["num_classes"], data["num_features"], K,
            config.training, derive_seed(run_seed, _TAG_AUX), data=data,
        )
        t0 = time.perf_counter()
        aux_model.fit(data["holdout"])
        timing["fitting"] += time.perf_counter() - t0

    run = SeedRun(seed=run_seed)
    store = []
    origins = []
    ledger = CostLedger()
    refit_every = config.training["refit_every"]
    model_fitted = False

    for t, batch in enumerate(data["schedule"].steps):
        if quota > len(batch):
            raise ConfigError(
                f"store.quota = {quota} exceeds the step-{t} batch size {len(batch)}"
            )
        remaining = list(range(len(batch)))
        targets = None
        if objective in ("epig", "la_epig"):
            targets = build_target_set(
                config.targets,
                {"target_pool": data["target_pool"], "schedule": data["schedule"], "step": t},
                derive_seed(run_seed, _TAG_TARGETS, t),
            )
        selections_since_fit = refit_every  # force a refit at the first slot
        for slot in range(quota):
            candidates = [batch[i] for i in remaining]
            diag = {}
            cold_start = False
            sel_seed = derive_seed(run_seed, _TAG_SELECT, t, slot)
            if objective == "random":
                ranked = score_pool("random", None, candidates, seed=sel_seed,
                                    diagnostics=diag)
            else:
                if not model_fitted or selections_since_fit >= refit_every:
                    t0 = time.perf_counter()
                    model_fitted = _try_fit(model, store)
                    timing["fitting"] += time.perf_counter() - t0
                    selections_since_fit = 0
                if model_fitted:
                    t0 = time.perf_counter()
                    ranked = score_pool(
                        objective, model, candidates, targets=targets,
                        seed=sel_seed, eta=eta, aux_model=aux_model,
                        diagnostics=diag,
                    )
                    timing["scoring"] += time.perf_counter() - t0
                else:
                    # empty store and a model that cannot fit it: seeded random
                    cold_start = True
                    ranked = score_pool("random", None, candidates, seed=sel_seed,
                                        diagnostics=diag)
            chosen_local = ranked[0].candidate_index
            chosen_batch_index = remaining[chosen_local]
            store.append(batch[chosen_batch_index])
            origins.append(t)
            remaining.pop(chosen_local)
            selections_since_fit += 1
            run.selections.append({
                "step": t,
                "slot": slot,
                "chosen": int(chosen_batch_index),
                "score": ranked[0].value,
                "summary": _score_summary(ranked),
                "degenerate": len(diag.get("degenerate_candidates", [])),
                "cold_start": cold_start,
                "target_evaluations": diag.get("target_evaluations", 0),
            })

        ledger.charge_storage(len(store))
        ledger.charge_selection(quota, len(batch))
        ledger.charge_training(len(store), tau=config.store["tau"])
        ledger.end_step()

        t0 = time.perf_counter()
        model.fit(store)
        model_fitted = True
        timing["fitting"] += time.perf_counter() - t0
        t0 = time.perf_counter()
        run.accuracies.append(evaluate_accuracy(model, data["eval_set"]))
        timing["evaluation"] += time.perf_counter() - t0

        labels = [ex.label for ex in store]
        run.store_track.append({
            "step": t,
            "size": len(store),
            "label_histogram": np.bincount(
                labels, minlength=data["num_classes"]
            ).tolist(),
            "origin_steps": list(origins),
        })

    run.ledger = ledger.as_dict()
    return run


def run_experiment(config, workers=1):
    """Run every seed and aggregate. Returns an ExperimentResult."""
    if isinstance(config, dict):
        config = ExperimentConfig.from_dict(config)
    timing = {"data_prep": 0.0, "fitting": 0.0, "scoring": 0.0, "evaluation": 0.0}
    wall = time.perf_counter()

    def one(seed):
        t = dict.fromkeys(timing, 0.0)
        try:
            run = _run_seed(config, seed, t)
        except StreamsiftError as exc:
            run = SeedRun(seed=seed, status="failed", error=f"{type(exc).__name__}: {exc}")
        return run, t

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(one, config.seeds))
    else:
        outcomes = [one(s) for s in config.seeds]

    per_seed = []
    for run, t in outcomes:
        per_seed.append(run)
        for key in timing:
            timing[key] += t[key]
    timing["total"] = time.perf_counter() - wall

    ok = [r for r in per_seed if r.status == "ok"]
    steps = config.stream["steps"]
    if ok:
        acc = np.array([r.accuracies for r in ok])
        mean = acc.mean(axis=0)
        stderr = (
            acc.std(axis=0, ddof=1) / np.sqrt(len(ok)) if len(ok) > 1
            else np.zeros(steps)
        )
        summary = {
            "seeds_ok": [r.seed for r in ok],
            "seeds_failed": [r.seed for r in per_seed if r.status == "failed"],
            "per_step_mean_accuracy": mean.tolist(),
            "per_step_stderr": stderr.tolist(),
            "mean_final_accuracy": float(mean[-1]),
            "stderr_final_accuracy": float(stderr[-1]),
        }
    else:
        summary = {
            "seeds_ok": [],
            "seeds_failed": [r.seed for r in per_seed],
            "per_step_mean_accuracy": [],
            "per_step_stderr": [],
            "mean_final_accuracy": None,
            "stderr_final_accuracy": None,
        }
    return ExperimentResult(
        config=config.echo(), per_seed=per_seed, summary=summary, timing=timing
    )


# --- serialization --------------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, float) and not np.isfinite(obj):
        return repr(obj)
    return obj


def write_results(result, outdir):
    """Write results.json, results.csv and learning_curve.svg; returns paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    objective = result.config["objective"]["name"]

    json_path = outdir / "results.json"
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(_jsonable(result.to_dict()), fh, indent=2)
        fh.write("\n")

    csv_path = outdir / "results.csv"
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        fh.write("seed,step,objective,accuracy\n")
        for run in result.per_seed:
            if run.status != "ok":
                continue
            for step, acc in enumerate(run.accuracies):
                fh.write(f"{run.seed},{step},{objective},{acc!r}\n")

    svg_path = outdir / "learning_curve.svg"
    mean = result.summary["per_step_mean_accuracy"]
    stderr = result.summary["per_step_stderr"]
    if mean:
        svg = learning_curve_svg(
            list(range(len(mean))), mean, stderr,
            title=f"objective={objective} (mean +/- stderr over "
                  f"{len(result.summary['seeds_ok'])} seeds)",
        )
    else:
        svg = learning_curve_svg([0], [0.0], [0.0], title="no successful seeds")
    svg_path.write_text(svg, encoding="utf-8")
    return {"json": json_path, "csv": csv_path, "svg": svg_path}
