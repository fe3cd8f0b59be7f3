"""Command-line surface: thin adapters over the library.

Exit codes: 0 success, 1 user error (bad flags, bad inputs), 2 internal
error. Every run prints the master seed it resolved.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import traceback

from . import reports
from .bench import parse_config, run_grid
from .bucketing import BucketingStrategy, assign_buckets
from .encoding import (encode_bucket, fit_encoder, read_features_json,
                       read_matrix_csv, write_features_json, write_matrix_csv)
from .eventlog import (LabelingRule, SynthConfig, apply_labeling,
                       compute_statistics, generate_synthetic_log,
                       parse_event_log, read_labels, write_event_log,
                       write_labels)
from .explainers import (ale_curve, ale_global_rank, categorical_indices,
                         lime_explain, pfi, shap_background, shap_global,
                         shap_kernel)
from .models import (GbtParams, LogitParams, default_space, evaluate,
                     intrinsic_importance, load_model, random_search,
                     save_model, train_gbt, train_logit)
from .prefixing import PrefixSpec, build_prefix_log
from .stability import lime_stability_report
from .util import derive_seed, dump_json, load_json


class UserError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; we want 1
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> _Parser:
    parser = _Parser(prog="ppmxplain",
                     description="XAI workbench for outcome-oriented "
                                 "predictive process monitoring")
    sub = parser.add_subparsers(dest="command")

    def common(p):
        p.add_argument("--seed", type=int, default=None,
                       help="master seed (overrides config)")
        p.add_argument("--config", default=None, help="JSON config file")
        p.add_argument("--out", default=None, help="output file or directory")

    p = sub.add_parser("synth", parents=[], help="generate a synthetic labeled log")
    common(p)

    p = sub.add_parser("stats", help="print event-log statistics")
    common(p)
    p.add_argument("--log", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--labels", default=None)
    p.add_argument("--rule", default=None)

    p = sub.add_parser("prep", help="prefix + bucket + encode, export matrices")
    common(p)
    p.add_argument("--log", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--labels", default=None)
    p.add_argument("--rule", default=None)
    p.add_argument("--bucketing", default="single",
                   choices=["single", "prefix_length"])
    p.add_argument("--encoding", default="aggregation",
                   choices=["aggregation", "index", "last-state"])
    p.add_argument("--max-prefix-len", type=int, default=20)
    p.add_argument("--gap", type=int, default=1)
    p.add_argument("--no-temporal-features", action="store_true")

    p = sub.add_parser("train", help="train a model on an exported matrix")
    common(p)
    p.add_argument("--matrix", required=True)
    p.add_argument("--features", default=None,
                   help="features JSON exported by prep")
    p.add_argument("--model", required=True, choices=["logit", "gbt"])
    p.add_argument("--budget", type=int, default=1,
                   help="random-search budget (1 = defaults, no search)")

    p = sub.add_parser("explain-global", help="PFI / ALE / SHAP / intrinsic")
    common(p)
    p.add_argument("--matrix", required=True)
    p.add_argument("--features", default=None)
    p.add_argument("--model-file", required=True)
    p.add_argument("--method", required=True,
                   choices=["pfi", "ale", "shap", "intrinsic"])

    p = sub.add_parser("explain-local", help="SHAP / LIME for one row")
    common(p)
    p.add_argument("--matrix", required=True)
    p.add_argument("--features", default=None)
    p.add_argument("--model-file", required=True)
    p.add_argument("--method", required=True, choices=["shap", "lime"])
    p.add_argument("--row", type=int, default=0)

    p = sub.add_parser("stability", help="LIME VSI/CSI over repeated runs")
    common(p)
    p.add_argument("--matrix", required=True)
    p.add_argument("--features", default=None)
    p.add_argument("--model-file", required=True)
    p.add_argument("--row", type=int, default=0)
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--top-k", type=int, default=10)

    p = sub.add_parser("bench", help="run the full experiment grid")
    common(p)
    p.add_argument("--jobs", type=int, default=None)

    p = sub.add_parser("report", help="re-emit report files from saved results")
    common(p)
    p.add_argument("--results", required=True)

    return parser


def _resolve_seed(args, cfg_obj=None) -> int:
    if args.seed is not None:
        return args.seed
    if cfg_obj and "seed" in cfg_obj:
        return int(cfg_obj["seed"])
    return 0


def _need_out(args, what="this command"):
    if not args.out:
        raise UserError(f"--out is required for {what}")
    return args.out


# ---------------------------------------------------------------------------
# subcommands

def cmd_synth(args) -> int:
    cfg_obj = load_json(args.config) if args.config else {}
    seed = _resolve_seed(args, cfg_obj)
    print(f"master seed: {seed}")
    cfg_obj.setdefault("seed", seed)
    labeled = generate_synthetic_log(SynthConfig.from_json(cfg_obj))
    out = _need_out(args, "synth")
    os.makedirs(out, exist_ok=True)
    write_event_log(labeled.log, os.path.join(out, "log.csv"),
                    os.path.join(out, "schema.json"))
    write_labels(labeled, os.path.join(out, "labels.json"))
    stats = compute_statistics(labeled)
    _print_stats(stats, labels_known=True)
    print(f"wrote log.csv, schema.json, labels.json under {out}")
    return 0


def _print_stats(stats, labels_known: bool) -> None:
    rows = [("traces", stats.trace_count),
            ("shortest trace", stats.shortest_trace_len),
            ("avg trace", f"{stats.avg_trace_len:.2f}"),
            ("longest trace", stats.longest_trace_len),
            ("trace variants", stats.trace_variant_count),
            ("% positive class", f"{stats.positive_class_ratio:.4f}"
             if labels_known else "n/a"),
            ("event classes", stats.event_class_count),
            ("static cols", stats.static_col_count),
            ("dynamic cols", stats.dynamic_col_count),
            ("categorical cols", stats.categorical_col_count),
            ("numeric cols", stats.numeric_col_count),
            ("cat levels (static)", stats.categorical_levels_static),
            ("cat levels (dynamic)", stats.categorical_levels_dynamic)]
    width = max(len(name) for name, _ in rows)
    for name, value in rows:
        print(f"{name:<{width}}  {value}")


def cmd_stats(args) -> int:
    seed = _resolve_seed(args)
    print(f"master seed: {seed}")
    log = parse_event_log(args.log, args.schema)
    if args.labels:
        labeled = read_labels(log, args.labels)
        labels_known = True
    elif args.rule:
        labeled = apply_labeling(log, LabelingRule.from_json(load_json(args.rule)))
        labels_known = True
    else:
        from .eventlog import LabeledLog, NEGATIVE
        labeled = LabeledLog(log=log, labels={t.case_id: NEGATIVE
                                              for t in log.traces})
        labels_known = False
    _print_stats(compute_statistics(labeled), labels_known)
    return 0


def cmd_prep(args) -> int:
    seed = _resolve_seed(args)
    print(f"master seed: {seed}")
    log = parse_event_log(args.log, args.schema)
    if args.labels:
        labeled = read_labels(log, args.labels)
    elif args.rule:
        labeled = apply_labeling(log, LabelingRule.from_json(load_json(args.rule)))
    else:
        raise UserError("prep requires --labels or --rule")
    out = _need_out(args, "prep")
    os.makedirs(out, exist_ok=True)
    spec = PrefixSpec(max_prefix_len=args.max_prefix_len, gap=args.gap)
    plog = build_prefix_log(labeled, spec)
    blog = assign_buckets(plog, BucketingStrategy(args.bucketing))
    include_temporal = not args.no_temporal_features
    for key in blog.keys():
        bucket = blog.buckets[key]
        k = None
        if args.encoding == "index":
            k = key if key != "ALL" else spec.max_prefix_len
        enc = fit_encoder(bucket, plog.schema, args.encoding, k=k,
                          include_temporal=include_temporal)
        matrix = encode_bucket(enc, bucket)
        stem = os.path.join(out, f"bucket_{key}")
        write_matrix_csv(matrix, stem + ".csv")
        write_features_json(matrix.columns, stem + ".features.json")
        dump_json({"row_ids": [list(r) for r in matrix.row_ids]},
                  stem + ".rows.json")
        print(f"bucket {key}: {matrix.rows.shape[0]} rows x "
              f"{matrix.rows.shape[1]} features -> {stem}.csv")
    return 0


def _read_matrix(args):
    matrix = read_matrix_csv(args.matrix, args.features)
    rows_path = os.path.splitext(args.matrix)[0] + ".rows.json"
    if args.features and os.path.exists(rows_path):
        row_ids = [tuple(r) for r in load_json(rows_path)["row_ids"]]
        if len(row_ids) == len(matrix.row_ids):
            matrix.row_ids = row_ids
    return matrix


def cmd_train(args) -> int:
    seed = _resolve_seed(args)
    print(f"master seed: {seed}")
    matrix = _read_matrix(args)
    if args.budget > 1:
        hp = random_search(matrix, args.model, default_space(args.model),
                           budget=args.budget, seed=seed)
    else:
        hp = GbtParams(seed=derive_seed(seed, "train")) \
            if args.model == "gbt" else LogitParams()
    model = train_gbt(matrix, hp) if args.model == "gbt" \
        else train_logit(matrix, hp)
    report = evaluate(model, matrix.rows, matrix.labels)
    print(f"train AUC {report.auc:.4f}  accuracy {report.accuracy:.4f}")
    out = _need_out(args, "train")
    save_model(model, out)
    print(f"wrote model to {out}")
    return 0


def _load_model_for(args, matrix):
    from .models import check_matrix_schema
    model = load_model(args.model_file)
    if args.features:
        check_matrix_schema(model, matrix.columns)
    elif model.n_features != matrix.rows.shape[1]:
        raise UserError("matrix width does not match the model")
    return model


def cmd_explain_global(args) -> int:
    seed = _resolve_seed(args)
    print(f"master seed: {seed}")
    matrix = _read_matrix(args)
    model = _load_model_for(args, matrix)
    if args.method == "pfi":
        result = pfi(model, matrix.rows, matrix.labels, n_iter=10, seed=seed)
        payload = result.to_json()
    elif args.method == "ale":
        import numpy as np
        live = [j for j in range(matrix.rows.shape[1])
                if len(np.unique(matrix.rows[:, j])) > 1]
        curves = [ale_curve(model, matrix.rows, j) for j in live]
        result = ale_global_rank(curves, all_feature_names=matrix.names)
        payload = {"global": result.to_json(),
                   "curves": [c.to_json() for c in curves]}
    elif args.method == "shap":
        background = shap_background(matrix.rows, seed=derive_seed(seed, "bg"))
        m = matrix.rows.shape[1]
        rows = range(min(10, matrix.rows.shape[0]))
        attrs = [shap_kernel(model, matrix.rows[i], background,
                             n_samples=max(512, 2 * m + 2),
                             seed=derive_seed(seed, "ks", i))
                 for i in rows]
        result = shap_global(attrs)
        payload = {"global": result.to_json(),
                   "attributions": [a.to_json() for a in attrs]}
    else:
        result = intrinsic_importance(model)
        payload = result.to_json()
    _print_ranking(result, matrix.names)
    if args.out:
        dump_json(payload, args.out)
        print(f"wrote {args.out}")
    return 0


def _print_ranking(explanation, names, top=10) -> None:
    print(f"top features ({explanation.method}):")
    for i in explanation.ranking[:top]:
        print(f"  {explanation.feature_names[i]:<32} "
              f"{float(explanation.scores[i]):.6f}")


def cmd_explain_local(args) -> int:
    seed = _resolve_seed(args)
    print(f"master seed: {seed}")
    matrix = _read_matrix(args)
    model = _load_model_for(args, matrix)
    if not 0 <= args.row < matrix.rows.shape[0]:
        raise UserError(f"--row out of range (matrix has "
                        f"{matrix.rows.shape[0]} rows)")
    row = matrix.rows[args.row]
    if args.method == "shap":
        background = shap_background(matrix.rows, seed=derive_seed(seed, "bg"))
        m = matrix.rows.shape[1]
        attr = shap_kernel(model, row, background,
                           n_samples=max(512, 2 * m + 2),
                           seed=derive_seed(seed, "ks", args.row))
        print(f"base {attr.base_value:.4f} -> predicted {attr.predicted:.4f} "
              f"(log odds)")
        order = sorted(range(len(attr.per_feature)),
                       key=lambda j: -abs(attr.per_feature[j]))
        for j in order[:10]:
            print(f"  {matrix.names[j]:<32} {attr.per_feature[j]:+.6f}")
        payload = attr.to_json()
    else:
        expl = lime_explain(model, row, matrix.rows, seed=seed,
                            categorical=categorical_indices(matrix.columns))
        print(f"surrogate R2 {expl.surrogate_r2:.4f}")
        for name, coef in expl.top_features:
            print(f"  {name:<32} {coef:+.6f}")
        payload = expl.to_json()
    if args.out:
        dump_json(payload, args.out)
        print(f"wrote {args.out}")
    return 0


def cmd_stability(args) -> int:
    seed = _resolve_seed(args)
    print(f"master seed: {seed}")
    matrix = _read_matrix(args)
    model = _load_model_for(args, matrix)
    if not 0 <= args.row < matrix.rows.shape[0]:
        raise UserError("--row out of range")
    cat = categorical_indices(matrix.columns)
    runs = [lime_explain(model, matrix.rows[args.row], matrix.rows,
                         k=args.top_k, seed=derive_seed(seed, "run", r),
                         categorical=cat)
            for r in range(args.runs)]
    report = lime_stability_report(runs, k=args.top_k)
    print(f"VSI {report.vsi:.2f}  CSI {report.csi:.2f}  "
          f"({report.runs} runs, top-{report.top_k})")
    if args.out:
        dump_json(report.to_json(), args.out)
        print(f"wrote {args.out}")
    return 0


def cmd_bench(args) -> int:
    if not args.config:
        raise UserError("bench requires --config")
    cfg_obj = load_json(args.config)
    if args.seed is not None:
        cfg_obj["seed"] = args.seed
    if args.out is not None:
        cfg_obj["out_dir"] = args.out
    if args.jobs is not None:
        cfg_obj["jobs"] = args.jobs
    cfg = parse_config(cfg_obj)
    print(f"master seed: {cfg.seed}")
    results = run_grid(cfg)
    os.makedirs(cfg.out_dir, exist_ok=True)
    reports.save_results(results, os.path.join(cfg.out_dir, "results.json"))
    manifest = reports.emit_reports(results, cfg.out_dir)
    ok = sum(1 for c in results["cells"] if c["status"] == "ok")
    print(f"{ok}/{len(results['cells'])} cells ok; "
          f"{len(manifest['files'])} files -> {cfg.out_dir}")
    for cell in results["cells"]:
        if cell["status"] != "ok":
            print(f"  FAILED {cell['dataset']}|{cell['bucketing']}-"
                  f"{cell['encoding']}|{cell['model']}|{cell['method']}: "
                  f"{cell['error']}")
    return 0


def cmd_report(args) -> int:
    seed = _resolve_seed(args)
    results = reports.load_results(args.results)
    print(f"master seed: {results.get('master_seed', seed)}")
    out = _need_out(args, "report")
    manifest = reports.emit_reports(results, out)
    print(f"{len(manifest['files'])} files -> {out}")
    return 0


COMMANDS = {"synth": cmd_synth, "stats": cmd_stats, "prep": cmd_prep,
            "train": cmd_train, "explain-global": cmd_explain_global,
            "explain-local": cmd_explain_local, "stability": cmd_stability,
            "bench": cmd_bench, "report": cmd_report}


def dispatch(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return COMMANDS[args.command](args)
    except SystemExit:
        raise
    except (UserError, ValueError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 2


def main() -> None:
    raise SystemExit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
