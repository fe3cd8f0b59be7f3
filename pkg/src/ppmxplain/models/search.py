"""Random hyperparameter search with a temporal validation split."""
from __future__ import annotations

import math

import numpy as np

from ..util import derive_seed
from .core import GBT, LOGIT
from .metrics import evaluate_auc
from .gbt import GbtParams, train_gbt
from .logit import LogitParams, train_logit


def default_space(kind: str) -> dict:
    if kind == LOGIT:
        return {"l2_strength": {"log_uniform": [1e-4, 10.0]}}
    if kind == GBT:
        return {"n_trees": {"int_range": [50, 300]},
                "max_depth": {"int_range": [2, 6]},
                "learning_rate": {"uniform": [0.05, 0.3]}}
    raise ValueError(f"unknown model kind {kind!r}")


def _sample_value(rng, spec):
    if "log_uniform" in spec:
        lo, hi = spec["log_uniform"]
        return float(np.exp(rng.uniform(np.log(lo), np.log(hi))))
    if "uniform" in spec:
        lo, hi = spec["uniform"]
        return float(rng.uniform(lo, hi))
    if "int_range" in spec:
        lo, hi = spec["int_range"]
        return int(rng.integers(lo, hi + 1))
    if "choice" in spec:
        opts = spec["choice"]
        return opts[int(rng.integers(len(opts)))]
    raise ValueError(f"bad search-space entry: {spec!r}")


def sample_space(kind: str, space: dict, budget: int, seed: int) -> list:
    """The budget configurations a search with this seed will evaluate."""
    if not space:
        raise ValueError("empty search space")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    rng = np.random.default_rng(seed)
    configs = []
    for i in range(budget):
        drawn = {name: _sample_value(rng, spec)
                 for name, spec in sorted(space.items())}
        if kind == GBT:
            drawn.setdefault("seed", derive_seed(seed, "gbt", i))
            configs.append(GbtParams(**drawn))
        else:
            configs.append(LogitParams(**drawn))
    return configs


def temporal_validation_split(row_ids, val_ratio: float):
    """Case-aware positional split: the last val_ratio share of cases
    (in row order, which downstream keeps temporal) become validation.
    No case contributes rows to both sides."""
    cases_in_order = []
    seen = set()
    for cid, _ in row_ids:
        if cid not in seen:
            seen.add(cid)
            cases_in_order.append(cid)
    n_cases = len(cases_in_order)
    n_train = max(1, min(n_cases - 1, math.ceil((1.0 - val_ratio) * n_cases)))
    train_cases = set(cases_in_order[:n_train])
    train_idx = [i for i, (cid, _) in enumerate(row_ids) if cid in train_cases]
    val_idx = [i for i, (cid, _) in enumerate(row_ids) if cid not in train_cases]
    return np.asarray(train_idx), np.asarray(val_idx)


def random_search(matrix, kind: str, space: dict | None = None,
                  budget: int = 10, val_ratio: float = 0.2, seed: int = 0):
    """Sample budget configs, return the one with the best validation AUC
    (ties keep the first sampled)."""
    from ..encoding import FeatureMatrix
    from .core import predict_proba

    space = space if space is not None else default_space(kind)
    configs = sample_space(kind, space, budget, seed)
    train_idx, val_idx = temporal_validation_split(matrix.row_ids, val_ratio)
    sub_train = FeatureMatrix(columns=matrix.columns,
                              rows=matrix.rows[train_idx],
                              row_ids=[matrix.row_ids[i] for i in train_idx],
                              labels=matrix.labels[train_idx])
    X_val = matrix.rows[val_idx]
    y_val = matrix.labels[val_idx]
    if len(np.unique(sub_train.labels)) < 2 or len(np.unique(y_val)) < 2:
        # validation protocol cannot score: fall back to the first config
        return configs[0]

    best_hp, best_auc = None, -np.inf
    for hp in configs:
        model = train_gbt(sub_train, hp) if kind == GBT \
            else train_logit(sub_train, hp)
        auc = evaluate_auc(predict_proba(model, X_val), y_val)
        if auc > best_auc:
            best_hp, best_auc = hp, auc
    return best_hp
