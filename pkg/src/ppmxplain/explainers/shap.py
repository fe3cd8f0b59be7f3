"""Shapley-value attributions in margin space.

Three routes to the same quantity: brute-force coalition enumeration
(the oracle, guarded to few features), the kernel weighted-least-squares
estimator (exact when every coalition fits the sample budget), and the
closed form for linear models. The coalition value v(S) replaces the
features outside S with background rows and averages the margin.
"""
from __future__ import annotations

from math import comb, factorial

import numpy as np

from ..explanations import (Attribution, DecisionPathData, DependenceData,
                            GlobalExplanation, rank_descending)
from ..models.core import LOGIT, predict_margin

EXACT_LIMIT = 12


def shap_background(X, size: int = 100, seed: int = 0) -> np.ndarray:
    """Seeded subsample of at most `size` training rows."""
    X = np.asarray(X, dtype=np.float64)
    if X.shape[0] <= size:
        return X.copy()
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(X.shape[0], size=size, replace=False))
    return X[idx]


def _names(model):
    return [c.name for c in model.columns]


def _coalition_values(model, row, background, masks) -> np.ndarray:
    """v(S) for each mask: mean margin with features in S taken from row."""
    B, M = background.shape
    values = np.empty(masks.shape[0])
    chunk = max(1, 200_000 // max(B, 1))
    for start in range(0, masks.shape[0], chunk):
        sub = masks[start:start + chunk]
        s = sub.shape[0]
        Z = np.where(sub[:, None, :], row[None, None, :], background[None, :, :])
        margins = predict_margin(model, Z.reshape(-1, M))
        values[start:start + s] = margins.reshape(s, B).mean(axis=1)
    return values


def shap_exact(model, row, background, row_id=None) -> Attribution:
    """Brute-force Shapley values by full coalition enumeration (M <= 12)."""
    row = np.asarray(row, dtype=np.float64).ravel()
    background = np.atleast_2d(np.asarray(background, dtype=np.float64))
    M = row.shape[0]
    if M > EXACT_LIMIT:
        raise ValueError(f"exact enumeration guarded to {EXACT_LIMIT} features")
    if background.shape[0] == 0:
        raise ValueError("background must be non-empty")

    all_masks = ((np.arange(2 ** M)[:, None] >> np.arange(M)) & 1).astype(bool)
    v = _coalition_values(model, row, background, all_masks)
    sizes = all_masks.sum(axis=1)
    weight_by_size = np.array([factorial(s) * factorial(M - s - 1) / factorial(M)
                               for s in range(M)])
    phi = np.empty(M)
    for j in range(M):
        without = ~all_masks[:, j]
        idx = np.where(without)[0]
        phi[j] = float(np.sum(weight_by_size[sizes[idx]]
                              * (v[idx + (1 << j)] - v[idx])))
    predicted = float(predict_margin(model, row[None, :])[0])
    return Attribution(per_feature=phi, base_value=float(v[0]),
                       predicted=predicted, row_id=row_id,
                       feature_names=_names(model))


def _kernel_weight(M: int, s: int) -> float:
    return (M - 1) / (comb(M, s) * s * (M - s))


def _sampled_masks(M: int, n_samples: int, rng):
    """Coalition masks and weights: small/large sizes enumerated outright
    while they fit the budget, the rest sampled proportionally to the
    Shapley kernel mass of their size."""
    size_weight = {s: (M - 1) / (s * (M - s)) for s in range(1, M)}
    order = sorted(size_weight, key=lambda s: (min(s, M - s), s))
    remaining = n_samples
    masks, weights = [], []
    enumerated = set()
    for s in order:
        count = comb(M, s)
        if count > remaining:
            continue
        for mask_bits in _subsets_of_size(M, s):
            masks.append(mask_bits)
            weights.append(_kernel_weight(M, s))
        enumerated.add(s)
        remaining -= count
    leftover_sizes = [s for s in order if s not in enumerated]
    if leftover_sizes and remaining > 0:
        probs = np.array([size_weight[s] for s in leftover_sizes])
        probs = probs / probs.sum()
        leftover_mass = sum(size_weight[s] for s in leftover_sizes)
        counts = {}
        for _ in range(remaining):
            s = leftover_sizes[int(rng.choice(len(leftover_sizes), p=probs))]
            chosen = np.zeros(M, dtype=bool)
            chosen[rng.permutation(M)[:s]] = True
            entry = counts.setdefault(chosen.tobytes(), [0, chosen])
            entry[0] += 1
        for key in sorted(counts):
            c, chosen = counts[key]
            masks.append(chosen)
            weights.append(leftover_mass * c / remaining)
    return np.asarray(masks, dtype=bool), np.asarray(weights, dtype=float)


def _subsets_of_size(M: int, s: int):
    from itertools import combinations
    for combo in combinations(range(M), s):
        mask = np.zeros(M, dtype=bool)
        mask[list(combo)] = True
        yield mask


def shap_kernel(model, row, background, n_samples: int = 2048,
                seed: int = 0, row_id=None) -> Attribution:
    """Kernel estimator: WLS over coalition indicators with Shapley kernel
    weights; the empty/full coalitions are enforced exactly by eliminating
    one unknown, so local accuracy holds by construction. When every
    coalition fits in n_samples the estimate equals the exact values."""
    row = np.asarray(row, dtype=np.float64).ravel()
    background = np.atleast_2d(np.asarray(background, dtype=np.float64))
    M = row.shape[0]
    predicted = float(predict_margin(model, row[None, :])[0])
    base = float(predict_margin(model, background).mean())
    names = _names(model)
    if M == 1:
        return Attribution(per_feature=np.array([predicted - base]),
                           base_value=base, predicted=predicted,
                           row_id=row_id, feature_names=names)

    full = 2 ** M <= n_samples
    if not full and n_samples < 2 * M + 2:
        raise ValueError("insufficient samples: need at least 2M+2")
    rng = np.random.default_rng(seed)
    if full:
        masks, weights = [], []
        for s in range(1, M):
            w = _kernel_weight(M, s)
            for mask in _subsets_of_size(M, s):
                masks.append(mask)
                weights.append(w)
        masks = np.asarray(masks, dtype=bool)
        weights = np.asarray(weights, dtype=float)
    else:
        masks, weights = _sampled_masks(M, n_samples, rng)

    v = _coalition_values(model, row, background, masks)
    Z = masks.astype(np.float64)
    ey = v - base
    # eliminate the last column to hard-enforce sum(phi) = predicted - base
    y2 = ey - Z[:, -1] * (predicted - base)
    Z2 = Z[:, :-1] - Z[:, -1:]
    sw = np.sqrt(weights)
    coef, *_ = np.linalg.lstsq(Z2 * sw[:, None], y2 * sw, rcond=None)
    phi = np.empty(M)
    phi[:-1] = coef
    phi[-1] = (predicted - base) - coef.sum()
    return Attribution(per_feature=phi, base_value=base, predicted=predicted,
                       row_id=row_id, feature_names=names)


def shap_linear(model, row, background, row_id=None) -> Attribution:
    """Closed form for logistic models: phi_j = w_j (x_j - mean background)."""
    if model.kind != LOGIT:
        raise ValueError("shap_linear applies to logit models only")
    row = np.asarray(row, dtype=np.float64).ravel()
    background = np.atleast_2d(np.asarray(background, dtype=np.float64))
    mean = background.mean(axis=0)
    phi = model.weights * (row - mean)
    base = float(model.weights @ mean + model.intercept)
    predicted = float(predict_margin(model, row[None, :])[0])
    return Attribution(per_feature=phi, base_value=base, predicted=predicted,
                       row_id=row_id, feature_names=_names(model))


def shap_global(attributions) -> GlobalExplanation:
    """Aggregate local attributions: mean |phi| per feature, ranked."""
    if not attributions:
        raise ValueError("need at least one attribution")
    names = attributions[0].feature_names
    for a in attributions:
        if a.feature_names != names:
            raise ValueError("attributions use mismatched feature schemas")
    stacked = np.vstack([np.abs(a.per_feature) for a in attributions])
    scores = stacked.mean(axis=0)
    return GlobalExplanation(method="shap-global", feature_names=names,
                             scores=scores, ranking=rank_descending(scores))


# ---------------------------------------------------------------------------
# plot data

def shap_dependence_data(attributions, X, feature_index: int,
                         interaction_index: int | None = None) -> DependenceData:
    """Per-row (x_j, phi_j) pairs colored by the interacting feature.

    Unless given, the interaction feature is the one whose values correlate
    most with the phi_j residuals left after binning on x_j.
    """
    X = np.asarray(X, dtype=np.float64)
    j = feature_index
    x = X[:, j]
    if len(np.unique(x)) < 2:
        raise ValueError(f"constant explained feature {j}")
    phi = np.array([a.per_feature[j] for a in attributions])
    if len(phi) != X.shape[0]:
        raise ValueError("attributions must cover every row of X")
    names = attributions[0].feature_names

    if interaction_index is None:
        edges = np.unique(np.quantile(x, np.linspace(0, 1, 11)))
        bins = np.clip(np.searchsorted(edges, x, side="left"), 1,
                       len(edges) - 1) - 1
        residual = phi.copy()
        for b in np.unique(bins):
            rows = bins == b
            residual[rows] -= phi[rows].mean()
        best, best_r = None, 0.0
        r_std = residual.std()
        for c in range(X.shape[1]):
            if c == j or X[:, c].std() == 0 or r_std == 0:
                continue
            r = abs(float(np.corrcoef(residual, X[:, c])[0, 1]))
            if r > best_r + 1e-12:
                best, best_r = c, r
        interaction_index = best

    interaction_values = None if interaction_index is None \
        else X[:, interaction_index]
    return DependenceData(
        feature_index=j,
        feature_name=names[j] if names else f"f{j}",
        interaction_index=interaction_index,
        interaction_name=(names[interaction_index]
                          if interaction_index is not None and names else None),
        feature_values=x, shap_values=phi,
        interaction_values=interaction_values)


def decision_path_data(attribution: Attribution, top_n: int = 10) -> DecisionPathData:
    """Cumulative path from the base value to the prediction, features
    ordered ascending by |phi|; everything beyond the top_n largest is
    merged into a single 'others' step taken first."""
    phi = attribution.per_feature
    names = attribution.feature_names or [f"f{j}" for j in range(len(phi))]
    order = sorted(range(len(phi)), key=lambda j: (abs(phi[j]), j))
    steps = []
    cumulative = attribution.base_value
    if len(order) > top_n:
        merged = order[:len(order) - top_n]
        others = float(np.sum(phi[merged]))
        cumulative += others
        steps.append(("others", others, cumulative))
        order = order[len(merged):]
    for j in order:
        cumulative += float(phi[j])
        steps.append((names[j], float(phi[j]), cumulative))
    return DecisionPathData(base_value=attribution.base_value,
                            predicted=attribution.predicted, steps=steps)
