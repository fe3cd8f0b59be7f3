"""Accumulated local effects over quantile bins, in margin space.

Per bin, the mean prediction difference between the bin's upper and lower
edge (holding everything else at the observed rows) is accumulated, then
the curve is centered by the bin-count-weighted mean. Binary one-hot
columns take a dedicated two-point path evaluated at exactly 0 and 1.
"""
from __future__ import annotations

import numpy as np

from ..explanations import ALECurve, GlobalExplanation, rank_descending
from ..models.core import predict_margin


def _binary_path(model, X, j, name) -> ALECurve:
    x = X[:, j]
    n = X.shape[0]
    hi = X.copy()
    hi[:, j] = 1.0
    lo = X.copy()
    lo[:, j] = 0.0
    delta = float(np.mean(predict_margin(model, hi) - predict_margin(model, lo)))
    n1 = int(np.sum(x == 1.0))
    n0 = n - n1
    center = n1 * delta / n
    return ALECurve(feature_index=j, feature_name=name,
                    bin_edges=np.array([0.0, 1.0]),
                    effects=np.array([-center, delta - center]),
                    bin_counts=np.array([n0, n1]))


def ale_curve(model, X, feature_index: int, n_bins: int = 10,
              feature_name: str | None = None) -> ALECurve:
    X = np.asarray(X, dtype=np.float64)
    j = feature_index
    x = X[:, j]
    distinct = np.unique(x)
    if len(distinct) < 2:
        raise ValueError(f"constant column {j}: no effect to accumulate")
    if n_bins < 2:
        raise ValueError("n_bins must be >= 2")
    name = feature_name if feature_name is not None else \
        model.columns[j].name
    if set(distinct.tolist()) <= {0.0, 1.0}:
        return _binary_path(model, X, j, name)

    edges = np.unique(np.quantile(x, np.linspace(0.0, 1.0, n_bins + 1)))
    n_eff = len(edges) - 1
    # bin k covers (edges[k], edges[k+1]], except bin 0 includes its lower edge
    bin_idx = np.clip(np.searchsorted(edges, x, side="left"), 1, n_eff) - 1

    local = np.zeros(n_eff)
    counts = np.zeros(n_eff, dtype=int)
    for k in range(n_eff):
        rows = np.where(bin_idx == k)[0]
        counts[k] = len(rows)
        if len(rows) == 0:
            continue
        upper = X[rows].copy()
        upper[:, j] = edges[k + 1]
        lower = X[rows].copy()
        lower[:, j] = edges[k]
        local[k] = float(np.mean(predict_margin(model, upper)
                                 - predict_margin(model, lower)))

    accumulated = np.concatenate([[0.0], np.cumsum(local)])
    # trapezoid centering: each bin's rows sit halfway between its edges,
    # so every edge carries half the mass of each adjacent bin
    edge_weights = np.zeros(n_eff + 1)
    edge_weights[:-1] += counts / 2.0
    edge_weights[1:] += counts / 2.0
    center = float(np.sum(edge_weights * accumulated) / X.shape[0])
    return ALECurve(feature_index=j, feature_name=name, bin_edges=edges,
                    effects=accumulated - center, bin_counts=edge_weights)


def ale_entropy(curve: ALECurve, eps: float = 1e-12) -> float:
    """Shannon entropy of the count-weighted, normalized |effect| mass."""
    mass = np.abs(curve.effects) * curve.bin_counts
    total = float(mass.sum())
    if total <= eps:
        return 0.0
    p = mass / total
    p = p[p > eps]
    return float(-np.sum(p * np.log(p)))


def ale_global_rank(curves, all_feature_names: list | None = None) -> GlobalExplanation:
    """Rank features by the entropy of their ALE curves (descending).

    Features without a curve (e.g. constant columns) score 0 and rank last.
    """
    if not curves:
        raise ValueError("need at least one curve")
    by_name = {c.feature_name: ale_entropy(c) for c in curves}
    if all_feature_names is None:
        names = [c.feature_name for c in curves]
    else:
        names = list(all_feature_names)
    scores = np.array([by_name.get(n, 0.0) for n in names])
    return GlobalExplanation(method="ale-entropy", feature_names=names,
                             scores=scores, ranking=rank_descending(scores))
