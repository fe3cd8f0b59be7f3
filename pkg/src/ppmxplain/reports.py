"""Report emission: timings table, explanation JSONs, plot data, SVGs.

Wall-clock values are confined to timings.csv (and the results file the
bench saves alongside); every other artifact is reproducible byte for byte
from (config, master seed). The manifest lists every emitted file with its
sha256 so a re-run can be diffed mechanically.
"""
from __future__ import annotations

import csv
import json
import os

import numpy as np

from .util import dump_json, sha256_file

TIMINGS_COLUMNS = ("dataset", "variant", "prefix_len", "bucketing", "encoding",
                   "model", "method", "setup_s", "compute_s", "total_s")


def _slug(cell) -> str:
    return (f'{cell["dataset"]}__{cell["bucketing"]}-{cell["encoding"]}'
            f'__{cell["model"]}__{cell["method"]}')


def _pipeline_slug(p) -> str:
    return f'{p["dataset"]}__{p["bucketing"]}-{p["encoding"]}__{p["model"]}'


def emit_reports(results: dict, out_dir) -> dict:
    """Write all report artifacts; returns the manifest mapping."""
    if not results.get("cells"):
        raise ValueError("non-empty results required")
    os.makedirs(out_dir, exist_ok=True)
    for sub in ("explanations", "plotdata", "plots"):
        os.makedirs(os.path.join(out_dir, sub), exist_ok=True)

    written = []

    def emit(path, writer):
        writer(os.path.join(out_dir, path))
        written.append(path)

    emit("timings.csv", lambda p: _write_timings(results, p))
    for pipeline in results["pipelines"]:
        emit(f"explanations/{_pipeline_slug(pipeline)}__eval.json",
             lambda p, rec=pipeline: dump_json(_pipeline_payload(rec), p))
    for cell in results["cells"]:
        emit(f"explanations/{_slug(cell)}.json",
             lambda p, rec=cell: dump_json(_strip_timing(rec), p))
        for path, writer in _plot_artifacts(cell):
            emit(path, writer)

    manifest = {"files": [{"path": path,
                           "sha256": sha256_file(os.path.join(out_dir, path)),
                           "bytes": os.path.getsize(os.path.join(out_dir, path))}
                          for path in sorted(written)]}
    dump_json(manifest, os.path.join(out_dir, "manifest.json"))
    return manifest


def _write_timings(results, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TIMINGS_COLUMNS)
        for cell in results["cells"]:
            for bucket in cell.get("buckets", []):
                t = bucket.get("timing")
                if t is None:
                    continue
                writer.writerow([
                    t["dataset"], t["variant"],
                    "" if t["prefix_len"] is None else t["prefix_len"],
                    t["bucketing"], t["encoding"], t["model"], t["method"],
                    f'{t["setup_s"]:.6f}', f'{t["compute_s"]:.6f}',
                    f'{t["total_s"]:.6f}'])


def _pipeline_payload(pipeline) -> dict:
    return {k: pipeline[k] for k in
            ("dataset", "bucketing", "encoding", "model", "eval", "buckets",
             "prefix_spec", "error")
            if k in pipeline}


def _strip_timing(cell) -> dict:
    out = {k: v for k, v in cell.items() if k != "buckets"}
    out["buckets"] = [{k: v for k, v in bucket.items() if k != "timing"}
                      for bucket in cell.get("buckets", [])]
    return out


# ---------------------------------------------------------------------------
# per-cell plot data + SVG renderings

def _first_with(cell, key):
    return next((b for b in cell["buckets"] if b.get(key)), None)


def _plot_artifacts(cell):
    """(relative path, writer) pairs for one cell's plot outputs."""
    if cell.get("status") != "ok" or not cell.get("buckets"):
        return []
    method = cell["method"]
    slug = _slug(cell)
    jobs = []

    if method == "pfi":
        first = _first_with(cell, "global")
        jobs.append((f"plotdata/{slug}__iterations.csv",
                     lambda p: _pfi_csv(cell, p)))
        if first:
            jobs.append((f"plots/{slug}.svg",
                         lambda p: _pfi_svg(cell, first, p)))
    elif method == "ale":
        first = _first_with(cell, "curves")
        jobs.append((f"plotdata/{slug}__curves.csv",
                     lambda p: _ale_csv(cell, p)))
        if first:
            jobs.append((f"plots/{slug}.svg",
                         lambda p: _ale_svg(cell, first, p)))
    elif method == "shap":
        dep = _first_with(cell, "dependence")
        if dep:
            jobs.append((f"plotdata/{slug}__dependence.csv",
                         lambda p: _dependence_csv(dep, p)))
            jobs.append((f"plots/{slug}__dependence.svg",
                         lambda p: _dependence_svg(cell, dep, p)))
        decision = _first_with(cell, "decision_path")
        if decision:
            jobs.append((f"plotdata/{slug}__decision.csv",
                         lambda p: _decision_csv(decision, p)))
            jobs.append((f"plots/{slug}__decision.svg",
                         lambda p: _decision_svg(cell, decision, p)))
    elif method == "lime":
        first = _first_with(cell, "locals")
        if first:
            jobs.append((f"plotdata/{slug}__bars.csv",
                         lambda p: _lime_csv(first, p)))
            jobs.append((f"plots/{slug}.svg",
                         lambda p: _lime_svg(cell, first, p)))
    elif method == "intrinsic":
        first = _first_with(cell, "global")
        if first:
            jobs.append((f"plots/{slug}.svg",
                         lambda p: _intrinsic_svg(cell, first, p)))
    return jobs


def _pfi_csv(cell, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bucket", "feature", "iteration", "score"])
        for bucket in cell["buckets"]:
            g = bucket["global"]
            for it, row in enumerate(g["per_iteration"]):
                for name, score in zip(g["feature_names"], row):
                    writer.writerow([bucket["key"], name, it, repr(float(score))])


def _pfi_svg(cell, bucket, path):
    from . import svgplot
    g = bucket["global"]
    per_iter = np.asarray(g["per_iteration"], dtype=float)
    top = g["ranking"][:8]
    labels = [g["feature_names"][i] for i in top]
    svgplot.box_plot(path, labels, per_iter[:, top],
                     title=f'PFI {_slug(cell)}', y_label="AUC drop")


def _ale_csv(cell, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bucket", "feature", "edge", "effect", "count"])
        for bucket in cell["buckets"]:
            for curve in bucket.get("curves", []):
                for edge, effect, count in zip(curve["bin_edges"],
                                               curve["effects"],
                                               curve["bin_counts"]):
                    writer.writerow([bucket["key"], curve["feature_name"],
                                     repr(float(edge)), repr(float(effect)),
                                     repr(float(count))])


def _ale_svg(cell, bucket, path):
    from . import svgplot
    g = bucket["global"]
    by_name = {c["feature_name"]: c for c in bucket["curves"]}
    top_name = next((g["feature_names"][i] for i in g["ranking"]
                     if g["feature_names"][i] in by_name), None)
    curve = by_name[top_name] if top_name else bucket["curves"][0]
    svgplot.line_chart(path, curve["bin_edges"], curve["effects"],
                       title=f'ALE {curve["feature_name"]} {_slug(cell)}',
                       x_label=curve["feature_name"], y_label="ALE (log odds)")


def _dependence_csv(bucket, path):
    dep = bucket["dependence"]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["feature_value", "shap_value", "interaction_value"])
        inter = dep["interaction_values"] or [""] * len(dep["feature_values"])
        for x, phi, xi in zip(dep["feature_values"], dep["shap_values"], inter):
            writer.writerow([repr(float(x)), repr(float(phi)),
                             xi if xi == "" else repr(float(xi))])


def _dependence_svg(cell, bucket, path):
    from . import svgplot
    dep = bucket["dependence"]
    svgplot.scatter(path, dep["feature_values"], dep["shap_values"],
                    dep["interaction_values"],
                    title=f'dependence {dep["feature_name"]} {_slug(cell)}',
                    x_label=dep["feature_name"], y_label="shap value")


def _decision_csv(bucket, path):
    dp = bucket["decision_path"]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "feature", "phi", "cumulative"])
        for i, (name, phi, cum) in enumerate(dp["steps"]):
            writer.writerow([i, name, repr(float(phi)), repr(float(cum))])


def _decision_svg(cell, bucket, path):
    from . import svgplot
    dp = bucket["decision_path"]
    svgplot.decision_path(path, [s[0] for s in dp["steps"]],
                          [s[2] for s in dp["steps"]], dp["base_value"],
                          title=f'decision path {_slug(cell)}')


def _lime_csv(bucket, path):
    expl = bucket["locals"][0]["explanation"]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["feature", "coefficient"])
        for name, coef in expl["top_features"]:
            writer.writerow([name, repr(float(coef))])


def _lime_svg(cell, bucket, path):
    from . import svgplot
    expl = bucket["locals"][0]["explanation"]
    labels = [n for n, _ in expl["top_features"]]
    values = [c for _, c in expl["top_features"]]
    svgplot.bar_chart(path, labels, values, title=f'LIME {_slug(cell)}',
                      x_label="surrogate coefficient")


def _intrinsic_svg(cell, bucket, path):
    from . import svgplot
    g = bucket["global"]
    top = g["ranking"][:10]
    svgplot.bar_chart(path, [g["feature_names"][i] for i in top],
                      [g["scores"][i] for i in top],
                      title=f'intrinsic importance {_slug(cell)}',
                      x_label="score")


def save_results(results: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(results, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_results(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
