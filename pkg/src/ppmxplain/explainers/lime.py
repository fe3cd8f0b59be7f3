"""Local surrogate explanations: perturb, weight by proximity, fit ridge.

Perturbations draw each feature independently, numeric features from a
normal with the training mean/std and one-hot/count features by resampling
the training column. The weighted ridge surrogate is fit on probabilities;
the K features with the largest |coefficient * train std| are kept and
refit to produce the reported explanation.
"""
from __future__ import annotations

import numpy as np

from ..explanations import LimeExplanation
from ..models.core import predict_proba
from ..encoding import CATEGORICAL_KINDS


def categorical_indices(columns) -> list:
    """Column indices that encode categorical levels (one-hots and counts)."""
    return [i for i, c in enumerate(columns) if c.kind in CATEGORICAL_KINDS]


def _weighted_ridge(X, y, weights, alpha):
    """Ridge with unpenalized intercept via weighted centering."""
    wsum = weights.sum()
    x_mean = (weights[:, None] * X).sum(axis=0) / wsum
    y_mean = float((weights * y).sum() / wsum)
    Xc = X - x_mean
    yc = y - y_mean
    sw = np.sqrt(weights)
    A = (Xc * sw[:, None]).T @ (Xc * sw[:, None]) + alpha * np.eye(X.shape[1])
    b = (Xc * sw[:, None]).T @ (yc * sw)
    coef = np.linalg.solve(A, b)
    intercept = y_mean - float(coef @ x_mean)
    return coef, intercept


def _weighted_r2(y, y_hat, weights):
    wsum = weights.sum()
    y_mean = float((weights * y).sum() / wsum)
    ss_res = float((weights * (y - y_hat) ** 2).sum())
    ss_tot = float((weights * (y - y_mean) ** 2).sum())
    if ss_tot == 0.0:
        return 1.0 if ss_res == 0.0 else 0.0
    return 1.0 - ss_res / ss_tot


def lime_explain(model, row, X_train, k: int = 10, n_samples: int = 5000,
                 kernel_width: float | None = None, seed: int = 0,
                 categorical: list | None = None,
                 feature_names: list | None = None,
                 alpha: float = 1.0) -> LimeExplanation:
    if n_samples < 10 * k:
        raise ValueError("n_samples must be at least 10*K")
    X_train = np.asarray(X_train, dtype=np.float64)
    row = np.asarray(row, dtype=np.float64).ravel()
    n_train, m = X_train.shape
    if feature_names is None:
        feature_names = [c.name for c in model.columns]
    categorical = set(categorical or [])
    rng = np.random.default_rng(seed)

    mean = X_train.mean(axis=0)
    std = X_train.std(axis=0)
    if not np.any(std > 0):
        raise ValueError("degenerate training matrix: all columns constant")

    perturbed = np.empty((n_samples, m))
    for j in range(m):
        if j in categorical:
            perturbed[:, j] = X_train[rng.integers(0, n_train, size=n_samples), j]
        else:
            perturbed[:, j] = rng.normal(mean[j], std[j], size=n_samples)

    proba = predict_proba(model, perturbed)
    std_safe = np.where(std > 0, std, 1.0)
    distances = np.linalg.norm((perturbed - row) / std_safe, axis=1)
    width = kernel_width if kernel_width is not None else 0.75 * np.sqrt(m)
    weights = np.exp(-(distances ** 2) / width ** 2)
    if weights.sum() <= 0 or np.allclose(perturbed, perturbed[0]):
        raise ValueError("degenerate perturbations: surrogate cannot be fit")

    coef, _ = _weighted_ridge(perturbed, proba, weights, alpha)
    importance = np.abs(coef) * std
    k_eff = min(k, m)
    selected = sorted(sorted(range(m), key=lambda j: (-importance[j], j))[:k_eff])

    sub = perturbed[:, selected]
    coef_k, intercept = _weighted_ridge(sub, proba, weights, alpha)
    r2 = _weighted_r2(proba, sub @ coef_k + intercept, weights)

    order = sorted(range(len(selected)),
                   key=lambda i: (-abs(coef_k[i]) * std[selected[i]], selected[i]))
    pairs = [(feature_names[selected[i]], float(coef_k[i])) for i in order]
    return LimeExplanation(top_features=pairs, intercept=intercept,
                           surrogate_r2=r2, seed=seed)
