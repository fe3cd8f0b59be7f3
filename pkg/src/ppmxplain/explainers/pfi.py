"""Permutation feature importance, scored as AUC drop.

Each iteration shuffles one column in place with a fresh seeded permutation
(breaking its ties to the other features) and measures how much the model's
ranking quality degrades.
"""
from __future__ import annotations

import numpy as np

from ..explanations import GlobalExplanation, rank_descending
from ..models.core import predict_margin
from ..models.metrics import evaluate_auc


def pfi(model, X, labels, n_iter: int = 10, seed: int = 0) -> GlobalExplanation:
    if n_iter < 1:
        raise ValueError("n_iter must be >= 1")
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(labels, dtype=int)
    base_auc = evaluate_auc(predict_margin(model, X), y)  # raises if one class

    n, m = X.shape
    rng = np.random.default_rng(seed)
    per_iteration = np.empty((n_iter, m))
    work = X.copy()
    for j in range(m):
        original = X[:, j].copy()
        for it in range(n_iter):
            work[:, j] = original[rng.permutation(n)]
            per_iteration[it, j] = base_auc - evaluate_auc(
                predict_margin(model, work), y)
        work[:, j] = original

    scores = per_iteration.mean(axis=0)
    names = [c.name for c in model.columns]
    return GlobalExplanation(method="pfi", feature_names=names, scores=scores,
                             ranking=rank_descending(scores),
                             per_iteration=per_iteration)
