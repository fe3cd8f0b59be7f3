"""Experiment grid: dataset x preprocessing x model x XAI method.

Each pipeline runs the full offline chain (label, prefix, bucket, encode,
search+train per bucket) twice with independent derived seeds; the second
run only feeds the two-run consistency comparison of the global methods.
Explainers are timed under a process-wide lock so concurrent cells cannot
skew each other's measurements. Wall-clock values end up exclusively in
the timing records; every other artifact is a pure function of
(config, master seed).
"""
from __future__ import annotations

import threading
import time
import traceback
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bucketing import (PREFIX_LENGTH, SINGLE, SINGLE_KEY, BucketingStrategy,
                        assign_buckets, lookup_bucket)
from .encoding import (AGGREGATION, INDEX, LAST_STATE, encode_bucket,
                       encode_instance, fit_encoder)
from .eventlog import (LabeledLog, LabelingRule, SynthConfig, apply_labeling,
                       generate_synthetic_log, parse_event_log, read_labels,
                       temporal_split)
from .explainers import (ale_curve, ale_global_rank, decision_path_data, lime_explain,
                         categorical_indices, pfi, shap_background,
                         shap_dependence_data, shap_global, shap_kernel)
from .explanations import rank_descending
from .models import (GBT, LOGIT, default_space, evaluate, intrinsic_importance,
                     predict_margin, predict_proba, random_search, train_gbt,
                     train_logit)
from .models.gbt import GbtParams
from .models.logit import LogitParams
from .prefixing import PrefixSpec, build_prefix_log
from .stability import global_run_consistency, lime_stability_report
from .util import derive_seed, jsonable

TIMING_LOCK = threading.Lock()

XAI_METHODS = ("pfi", "ale", "shap", "lime")
BASELINE_METHODS = ("intrinsic", "predict")

_ENCODING_ALIASES = {"aggregation": AGGREGATION, "index": INDEX,
                     "last-state": LAST_STATE, "last_state": LAST_STATE}


# ---------------------------------------------------------------------------
# configuration

@dataclass
class DatasetSpec:
    name: str
    synthetic: dict | None = None
    csv: str | None = None
    schema: str | None = None
    labeling: dict | None = None
    labels: str | None = None


@dataclass
class PrepCombo:
    bucketing: str
    encoding: str
    prefix: PrefixSpec

    @property
    def slug(self) -> str:
        return f"{self.bucketing}-{self.encoding}"


@dataclass
class ModelSpec:
    kind: str
    search_budget: int = 1
    space: dict | None = None


@dataclass
class ExplainerSettings:
    methods: tuple = XAI_METHODS
    top_k: int = 10
    pfi_n_iter: int = 10
    ale_bins: int = 10
    ale_max_features: int = 20
    shap_background_size: int = 100
    shap_n_samples: int = 512
    shap_global_rows: int = 10
    lime_k: int = 10
    lime_n_samples: int = 1000
    lime_stability_runs: int = 10
    local_rows: int = 20
    stability_rows: int = 1
    timing_repetitions: int = 1


@dataclass
class ExperimentConfig:
    seed: int
    train_ratio: float
    datasets: list
    preprocessing: list
    models: list
    explainers: ExplainerSettings
    out_dir: str = "results"
    include_temporal: bool = True
    jobs: int = 1
    raw: dict = field(default_factory=dict)


def parse_config(obj: dict) -> ExperimentConfig:
    datasets = []
    for entry in obj.get("datasets", []):
        ds = DatasetSpec(name=entry["name"], synthetic=entry.get("synthetic"),
                         csv=entry.get("csv"), schema=entry.get("schema"),
                         labeling=entry.get("labeling"),
                         labels=entry.get("labels"))
        if ds.synthetic is None and ds.csv is None:
            raise ValueError(f"dataset {ds.name!r} needs 'synthetic' or 'csv'")
        if ds.csv is not None and ds.schema is None:
            raise ValueError(f"dataset {ds.name!r}: csv requires 'schema'")
        if ds.csv is not None and ds.labeling is None and ds.labels is None:
            raise ValueError(f"dataset {ds.name!r}: csv requires 'labeling' "
                             "rule or 'labels' file")
        datasets.append(ds)

    preps = []
    for entry in obj.get("preprocessing", []):
        encoding = _ENCODING_ALIASES.get(entry.get("encoding"))
        if encoding is None:
            raise ValueError(f"unknown encoding {entry.get('encoding')!r}")
        bucketing = entry.get("bucketing")
        BucketingStrategy(bucketing)  # validates
        if "prefix" in entry:
            prefix = PrefixSpec.from_json(entry["prefix"])
        elif encoding == INDEX:
            raise ValueError("index encoding must pair with a prefix spec")
        else:
            prefix = PrefixSpec(max_prefix_len=20, gap=1)
        preps.append(PrepCombo(bucketing=bucketing, encoding=encoding,
                               prefix=prefix))

    models = []
    for entry in obj.get("models", []):
        kind = entry.get("kind")
        if kind not in (LOGIT, GBT):
            raise ValueError(f"unknown model kind {kind!r}")
        models.append(ModelSpec(kind=kind,
                                search_budget=int(entry.get("search_budget", 1)),
                                space=entry.get("space")))

    ex = obj.get("explainers", {})
    methods = tuple(ex.get("methods", list(XAI_METHODS)))
    for m in methods:
        if m not in XAI_METHODS:
            raise ValueError(f"unknown explainer method {m!r}")
    settings = ExplainerSettings(
        methods=methods,
        top_k=int(ex.get("top_k", 10)),
        pfi_n_iter=int(ex.get("pfi", {}).get("n_iter", 10)),
        ale_bins=int(ex.get("ale", {}).get("n_bins", 10)),
        ale_max_features=int(ex.get("ale", {}).get("max_features", 20)),
        shap_background_size=int(ex.get("shap", {}).get("background_size", 100)),
        shap_n_samples=int(ex.get("shap", {}).get("n_samples", 512)),
        shap_global_rows=int(ex.get("shap", {}).get("global_rows", 10)),
        lime_k=int(ex.get("lime", {}).get("k", 10)),
        lime_n_samples=int(ex.get("lime", {}).get("n_samples", 1000)),
        lime_stability_runs=int(ex.get("lime", {}).get("stability_runs", 10)),
        local_rows=int(ex.get("local_rows", 20)),
        stability_rows=int(ex.get("stability_rows", 1)),
        timing_repetitions=int(ex.get("timing_repetitions", 1)))

    if not datasets or not preps or not models or not methods:
        raise ValueError("config needs at least one entry per axis "
                         "(datasets, preprocessing, models, explainer methods)")

    return ExperimentConfig(
        seed=int(obj.get("seed", 0)),
        train_ratio=float(obj.get("train_ratio", 0.8)),
        datasets=datasets, preprocessing=preps, models=models,
        explainers=settings, out_dir=obj.get("out_dir", "results"),
        include_temporal=bool(obj.get("include_temporal", True)),
        jobs=int(obj.get("jobs", 1)), raw=obj)


def load_dataset(ds: DatasetSpec, master_seed: int) -> LabeledLog:
    if ds.synthetic is not None:
        synth = dict(ds.synthetic)
        synth.setdefault("seed", derive_seed(master_seed, "dataset", ds.name))
        return generate_synthetic_log(SynthConfig.from_json(synth))
    log = parse_event_log(ds.csv, ds.schema)
    if ds.labels is not None:
        return read_labels(log, ds.labels)
    return apply_labeling(log, LabelingRule.from_json(ds.labeling))


# ---------------------------------------------------------------------------
# timing

@dataclass
class TimingRecord:
    dataset: str
    variant: str
    prefix_len: int | None
    bucketing: str
    encoding: str
    model: str
    method: str
    setup_s: float
    compute_s: float
    note: str = ""

    @property
    def total_s(self) -> float:
        return self.setup_s + self.compute_s

    def to_json(self) -> dict:
        return {"dataset": self.dataset, "variant": self.variant,
                "prefix_len": self.prefix_len, "bucketing": self.bucketing,
                "encoding": self.encoding, "model": self.model,
                "method": self.method, "setup_s": self.setup_s,
                "compute_s": self.compute_s, "total_s": self.total_s,
                "note": self.note}


@dataclass
class PreparedCell:
    """One timeable unit: an explainer bound to a trained bucket model."""
    identity: dict  # dataset/variant/prefix_len/bucketing/encoding/model/method
    setup_fn: object = None
    compute_fn: object = None
    note: str = ""


def time_explainer(cell: PreparedCell, repetitions: int = 1):
    """Run setup and score computation under the timing lock; repetitions
    are averaged. Returns the record plus the first repetition's payload."""
    if cell.setup_fn is None or cell.compute_fn is None:
        raise ValueError("cell not prepared: setup/compute missing")
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    setups, computes = [], []
    payload = None
    for rep in range(repetitions):
        with TIMING_LOCK:
            t0 = time.perf_counter()
            state = cell.setup_fn()
            t1 = time.perf_counter()
            out = cell.compute_fn(state)
            t2 = time.perf_counter()
        setups.append(t1 - t0)
        computes.append(t2 - t1)
        if payload is None:
            payload = out
    record = TimingRecord(setup_s=float(np.mean(setups)),
                          compute_s=float(np.mean(computes)),
                          note=cell.note, **cell.identity)
    return record, payload


# ---------------------------------------------------------------------------
# pipeline internals

def _variant(ds_name: str, key) -> str:
    return ds_name if key == SINGLE_KEY else f"{ds_name}_prfx{key}"


def _prefix_len_of(key):
    return None if key == SINGLE_KEY else int(key)


def _train_model(matrix, model_spec: ModelSpec, seed: int):
    space = model_spec.space
    if space is None:
        space = default_space(model_spec.kind)
    if model_spec.search_budget > 1:
        hp = random_search(matrix, model_spec.kind, space,
                           budget=model_spec.search_budget, seed=seed)
    else:
        drawn = {}
        if model_spec.kind == GBT:
            hp = GbtParams(**drawn)
        else:
            hp = LogitParams(**drawn)
    if model_spec.kind == GBT:
        if hp.seed == 0:
            hp.seed = derive_seed(seed, "train")
        return hp, (lambda m: train_gbt(m, hp))
    return hp, (lambda m: train_logit(m, hp))


@dataclass
class _BucketRun:
    key: object
    encoder: object
    matrix: object
    model: object
    hp: object
    train_seconds: float
    k: int | None


def _fit_buckets(blog, schema, prep: PrepCombo, model_spec: ModelSpec,
                 include_temporal: bool, master: int, pid, run: int,
                 timed: bool) -> dict:
    out = {}
    for key in blog.keys():
        bucket = blog.buckets[key]
        k = None
        if prep.encoding == INDEX:
            k = key if key != SINGLE_KEY else prep.prefix.max_prefix_len
        enc = fit_encoder(bucket, schema, prep.encoding, k=k,
                          include_temporal=include_temporal)
        matrix = encode_bucket(enc, bucket)
        seed = derive_seed(master, *pid, key, run, "search")
        hp, trainer = _train_model(matrix, model_spec, seed)
        if timed:
            with TIMING_LOCK:
                t0 = time.perf_counter()
                model = trainer(matrix)
                seconds = time.perf_counter() - t0
        else:
            model = trainer(matrix)
            seconds = 0.0
        out[key] = _BucketRun(key=key, encoder=enc, matrix=matrix, model=model,
                              hp=hp, train_seconds=seconds, k=k)
    return out


def _global_payload(method: str, run: _BucketRun, settings: ExplainerSettings,
                    seed: int):
    """(setup_fn, compute_fn) building the method's global artifact."""
    model, matrix = run.model, run.matrix

    if method == "pfi":
        return (lambda: None,
                lambda _state: pfi(model, matrix.rows, matrix.labels,
                                   n_iter=settings.pfi_n_iter, seed=seed))
    if method == "ale":
        def compute(_state):
            live = [j for j in range(matrix.rows.shape[1])
                    if len(np.unique(matrix.rows[:, j])) > 1]
            if len(live) > settings.ale_max_features:
                by_intrinsic = intrinsic_importance(model).ranking
                keep = [j for j in by_intrinsic if j in set(live)]
                live = sorted(keep[:settings.ale_max_features])
            curves = [ale_curve(model, matrix.rows, j, n_bins=settings.ale_bins)
                      for j in live]
            names = [c.name for c in matrix.columns]
            return {"curves": curves,
                    "global": ale_global_rank(curves, all_feature_names=names)}
        return (lambda: None, compute)
    if method == "shap":
        def setup():
            return shap_background(matrix.rows,
                                   size=settings.shap_background_size,
                                   seed=derive_seed(seed, "background"))

        def compute(background):
            rng = np.random.default_rng(derive_seed(seed, "rows"))
            n = matrix.rows.shape[0]
            count = min(settings.shap_global_rows, n)
            rows = np.sort(rng.choice(n, size=count, replace=False))
            m = matrix.rows.shape[1]
            n_samples = max(settings.shap_n_samples, 2 * m + 2)
            attrs = [shap_kernel(model, matrix.rows[i], background,
                                 n_samples=n_samples,
                                 seed=derive_seed(seed, "ks", int(i)),
                                 row_id=matrix.row_ids[i])
                     for i in rows]
            return {"attributions": attrs, "rows": rows,
                    "global": shap_global(attrs)}
        return (setup, compute)
    if method == "lime":
        def compute(_state):
            cat = categorical_indices(matrix.columns)
            expl = lime_explain(model, matrix.rows[0], matrix.rows,
                                k=settings.lime_k,
                                n_samples=settings.lime_n_samples,
                                seed=derive_seed(seed, "timing-row"),
                                categorical=cat)
            return {"timing_row": expl}
        return (lambda: None, compute)
    raise ValueError(f"unknown method {method!r}")


def _route_test_rows(blog, runs, plog_test):
    """Encode every test prefix with its bucket's encoder (online path)."""
    routed = []
    for p in plog_test.prefixes:
        key = lookup_bucket(blog, p)
        vec = encode_instance(runs[key].encoder, p)
        routed.append({"key": key, "vec": vec, "row_id": (p.case_id, p.prefix_len),
                       "label": p.label})
    return routed


def _pooled_eval(runs, routed):
    if not routed:
        return None
    margins = np.array([float(predict_margin(runs[r["key"]].model,
                                             r["vec"][None, :])[0])
                        for r in routed])
    labels = np.array([r["label"] for r in routed], dtype=int)
    proba = 1.0 / (1.0 + np.exp(-margins))
    pred = (proba >= 0.5).astype(int)
    out = {"accuracy": float(np.mean(pred == labels)),
           "tp": int(np.sum((pred == 1) & (labels == 1))),
           "fp": int(np.sum((pred == 1) & (labels == 0))),
           "tn": int(np.sum((pred == 0) & (labels == 0))),
           "fn": int(np.sum((pred == 0) & (labels == 1))),
           "n_rows": len(routed)}
    if len(np.unique(labels)) == 2:
        from .models import evaluate_auc
        out["auc"] = evaluate_auc(margins, labels)
    else:
        out["auc"] = None
    return out


def _select_local_rows(runs, routed, count: int, seed: int):
    """Stratify the routed test rows by predicted class (seeded)."""
    if not routed or count < 1:
        return []
    margins = np.array([float(predict_margin(runs[r["key"]].model,
                                             r["vec"][None, :])[0])
                        for r in routed])
    pred = (margins >= 0.0).astype(int)
    rng = np.random.default_rng(seed)
    pos = np.where(pred == 1)[0]
    neg = np.where(pred == 0)[0]
    want_pos = min(len(pos), (count + 1) // 2)
    want_neg = min(len(neg), count - want_pos)
    if want_pos + want_neg < count:  # fill from whichever class has spare rows
        want_pos = min(len(pos), count - want_neg)
    chosen = []
    if want_pos:
        chosen.extend(np.sort(rng.choice(pos, size=want_pos, replace=False)))
    if want_neg:
        chosen.extend(np.sort(rng.choice(neg, size=want_neg, replace=False)))
    return [routed[i] for i in sorted(int(i) for i in chosen)]


# ---------------------------------------------------------------------------
# one pipeline = (dataset, preprocessing, model)

def _run_pipeline(cfg: ExperimentConfig, labeled: LabeledLog, ds_name: str,
                  prep: PrepCombo, model_spec: ModelSpec):
    master = cfg.seed
    pid = (ds_name, prep.bucketing, prep.encoding, model_spec.kind)
    settings = cfg.explainers

    train, test = temporal_split(labeled, cfg.train_ratio)
    plog_train = build_prefix_log(train, prep.prefix)
    blog = assign_buckets(plog_train, BucketingStrategy(prep.bucketing))
    plog_test = build_prefix_log(test, prep.prefix)
    schema = plog_train.schema

    runs0 = _fit_buckets(blog, schema, prep, model_spec, cfg.include_temporal,
                         master, pid, run=0, timed=True)
    runs1 = _fit_buckets(blog, schema, prep, model_spec, cfg.include_temporal,
                         master, pid, run=1, timed=False)

    routed = _route_test_rows(blog, runs0, plog_test)
    eval_report = _pooled_eval(runs0, routed)
    local_rows = _select_local_rows(runs0, routed, settings.local_rows,
                                    derive_seed(master, *pid, "locals"))

    pipeline = {
        "dataset": ds_name, "bucketing": prep.bucketing,
        "encoding": prep.encoding, "prefix_spec": prep.prefix.to_json(),
        "model": model_spec.kind, "eval": eval_report,
        "buckets": [{"key": key, "prefix_len": _prefix_len_of(key),
                     "n_rows": int(runs0[key].matrix.rows.shape[0]),
                     "n_features": int(runs0[key].matrix.rows.shape[1]),
                     "hyperparams": runs0[key].hp.to_json()}
                    for key in blog.keys()],
    }

    cells = []
    for method in list(settings.methods) + list(BASELINE_METHODS):
        cell = {"dataset": ds_name, "bucketing": prep.bucketing,
                "encoding": prep.encoding, "model": model_spec.kind,
                "method": method, "status": "ok", "buckets": []}
        try:
            for key in blog.keys():
                cell["buckets"].append(
                    _method_bucket_record(cfg, prep, model_spec, method,
                                          ds_name, pid, key, runs0, runs1,
                                          local_rows))
        except Exception as exc:  # failures recorded, grid continues
            cell["status"] = "error"
            cell["error"] = f"{type(exc).__name__}: {exc}"
            cell["traceback"] = traceback.format_exc()
        cells.append(cell)
    return pipeline, cells


def _method_bucket_record(cfg, prep, model_spec, method, ds_name, pid, key,
                          runs0, runs1, local_rows):
    settings = cfg.explainers
    master = cfg.seed
    run0, run1 = runs0[key], runs1[key]
    identity = {"dataset": ds_name, "variant": _variant(ds_name, key),
                "prefix_len": _prefix_len_of(key),
                "bucketing": prep.bucketing, "encoding": prep.encoding,
                "model": model_spec.kind, "method": method}
    record = {"key": key, "prefix_len": _prefix_len_of(key)}
    bucket_locals = [r for r in local_rows if r["key"] == key]

    if method == "predict":
        model, X = run0.model, run0.matrix.rows
        cell = PreparedCell(identity=identity, setup_fn=lambda: None,
                            compute_fn=lambda _s: predict_proba(model, X),
                            note="mean of 3 prediction trials")
        timing, _ = time_explainer(cell, repetitions=3)
        record["timing"] = timing.to_json()
        return record

    if method == "intrinsic":
        timing = TimingRecord(setup_s=0.0, compute_s=run0.train_seconds,
                              note="model training time", **identity)
        record["timing"] = timing.to_json()
        record["global"] = intrinsic_importance(run0.model).to_json()
        consistency = global_run_consistency(intrinsic_importance(run0.model),
                                             intrinsic_importance(run1.model),
                                             settings.top_k)
        record["consistency"] = consistency.to_json()
        return record

    seed0 = derive_seed(master, *pid, key, 0, method)
    seed1 = derive_seed(master, *pid, key, 1, method)
    setup_fn, compute_fn = _global_payload(method, run0, settings, seed0)
    cell = PreparedCell(identity=identity, setup_fn=setup_fn,
                        compute_fn=compute_fn)
    timing, payload = time_explainer(cell,
                                     repetitions=settings.timing_repetitions)
    record["timing"] = timing.to_json()

    if method == "lime":
        record["timing_row"] = payload["timing_row"].to_json()
        cat = categorical_indices(run0.matrix.columns)
        locals_out, stability_out = [], []
        for i, row in enumerate(bucket_locals):
            expl = lime_explain(run0.model, row["vec"], run0.matrix.rows,
                                k=settings.lime_k,
                                n_samples=settings.lime_n_samples,
                                seed=derive_seed(seed0, "local", i),
                                categorical=cat)
            locals_out.append({"row_id": list(row["row_id"]),
                               "explanation": expl.to_json()})
        for i, row in enumerate(bucket_locals[:settings.stability_rows]):
            reruns = [lime_explain(run0.model, row["vec"], run0.matrix.rows,
                                   k=settings.lime_k,
                                   n_samples=settings.lime_n_samples,
                                   seed=derive_seed(seed0, "stability", i, r),
                                   categorical=cat)
                      for r in range(settings.lime_stability_runs)]
            report = lime_stability_report(reruns, k=settings.lime_k)
            stability_out.append({"row_id": list(row["row_id"]),
                                  "report": report.to_json()})
        record["locals"] = locals_out
        record["stability"] = stability_out
        return record

    # pfi / ale / shap: store the global artifact and the two-run consistency
    if method == "ale":
        record["global"] = payload["global"].to_json()
        record["curves"] = [c.to_json() for c in payload["curves"]]
        _, compute1 = _global_payload("ale", run1, settings, seed1)
        second = compute1(None)["global"]
    elif method == "pfi":
        record["global"] = payload.to_json()
        _, compute1 = _global_payload("pfi", run1, settings, seed1)
        second = compute1(None)
        payload = {"global": payload}
    else:  # shap
        record["global"] = payload["global"].to_json()
        record["attribution_rows"] = [int(i) for i in payload["rows"]]
        record["attributions"] = [a.to_json() for a in payload["attributions"]]
        setup1, compute1 = _global_payload("shap", run1, settings, seed1)
        second = compute1(setup1())["global"]
        record.update(_shap_extras(run0, payload, bucket_locals, settings,
                                   seed0))
    record["consistency"] = global_run_consistency(
        payload["global"], second, settings.top_k).to_json()
    return record


def _shap_extras(run0, payload, bucket_locals, settings, seed0):
    """Local attributions of routed test rows, a decision path for the
    first of them, and dependence data for the top-ranked feature."""
    out = {}
    background = shap_background(run0.matrix.rows,
                                 size=settings.shap_background_size,
                                 seed=derive_seed(seed0, "background"))
    m = run0.matrix.rows.shape[1]
    n_samples = max(settings.shap_n_samples, 2 * m + 2)
    locals_out = []
    for i, row in enumerate(bucket_locals):
        attr = shap_kernel(run0.model, row["vec"], background,
                           n_samples=n_samples,
                           seed=derive_seed(seed0, "local", i),
                           row_id=row["row_id"])
        locals_out.append(attr)
    out["locals"] = [a.to_json() for a in locals_out]
    if locals_out:
        out["decision_path"] = decision_path_data(
            locals_out[0], top_n=settings.top_k).to_json()

    explanation = payload["global"]
    rows = payload["rows"]
    top = explanation.ranking[0]
    x_top = run0.matrix.rows[rows][:, top]
    if len(np.unique(x_top)) > 1:
        dep = shap_dependence_data(payload["attributions"],
                                   run0.matrix.rows[rows], top)
        out["dependence"] = dep.to_json()
    return out


# ---------------------------------------------------------------------------
# the grid

def run_grid(cfg: ExperimentConfig) -> dict:
    """Run every configured (dataset, preprocessing, model) pipeline and
    attach one cell per explainer method (plus intrinsic/predict baselines).
    Pipeline failures become error cells; the grid always completes."""
    logs = {}
    for ds in cfg.datasets:
        logs[ds.name] = load_dataset(ds, cfg.seed)

    tasks = [(ds, prep, model_spec)
             for ds in cfg.datasets
             for prep in cfg.preprocessing
             for model_spec in cfg.models]

    def job(task):
        ds, prep, model_spec = task
        try:
            return _run_pipeline(cfg, logs[ds.name], ds.name, prep, model_spec)
        except Exception as exc:
            error = {"error": f"{type(exc).__name__}: {exc}",
                     "traceback": traceback.format_exc()}
            pipeline = {"dataset": ds.name, "bucketing": prep.bucketing,
                        "encoding": prep.encoding, "model": model_spec.kind,
                        "eval": None, "buckets": [], **error}
            cells = [{"dataset": ds.name, "bucketing": prep.bucketing,
                      "encoding": prep.encoding, "model": model_spec.kind,
                      "method": method, "status": "error", "buckets": [],
                      **error}
                     for method in list(cfg.explainers.methods)
                     + list(BASELINE_METHODS)]
            return pipeline, cells

    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            outcomes = list(pool.map(job, tasks))
    else:
        outcomes = [job(t) for t in tasks]

    results = {"master_seed": cfg.seed, "config": jsonable(cfg.raw),
               "pipelines": [], "cells": []}
    for pipeline, cells in outcomes:
        results["pipelines"].append(pipeline)
        results["cells"].extend(cells)
    return jsonable(results)
