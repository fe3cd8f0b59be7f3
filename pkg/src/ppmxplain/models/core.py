"""Model container, prediction, intrinsic importance, JSON serialization."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from ..encoding import FeatureColumn
from ..explanations import GlobalExplanation, rank_descending

LOGIT = "logit"
GBT = "gbt"


@dataclass
class Tree:
    """One regression tree as parallel node arrays (index 0 = root)."""
    feature: np.ndarray  # split column, -1 at leaves
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray  # leaf output (learning rate already applied)
    gain: np.ndarray  # split gain, 0.0 at leaves

    def predict(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(X.shape[0], dtype=int)
        while True:
            internal = self.feature[node] >= 0
            if not internal.any():
                break
            idx = np.where(internal)[0]
            cur = node[idx]
            go_left = X[idx, self.feature[cur]] <= self.threshold[cur]
            node[idx] = np.where(go_left, self.left[cur], self.right[cur])
        return self.value[node]

    def to_json(self) -> dict:
        return {"feature": self.feature.tolist(),
                "threshold": self.threshold.tolist(),
                "left": self.left.tolist(), "right": self.right.tolist(),
                "value": self.value.tolist(), "gain": self.gain.tolist()}

    @staticmethod
    def from_json(obj: dict) -> "Tree":
        return Tree(feature=np.asarray(obj["feature"], dtype=int),
                    threshold=np.asarray(obj["threshold"], dtype=float),
                    left=np.asarray(obj["left"], dtype=int),
                    right=np.asarray(obj["right"], dtype=int),
                    value=np.asarray(obj["value"], dtype=float),
                    gain=np.asarray(obj["gain"], dtype=float))


@dataclass
class Model:
    kind: str  # logit | gbt
    columns: list  # training schema, list of FeatureColumn
    # logit
    weights: np.ndarray | None = None  # original feature units
    intercept: float = 0.0
    converged: bool = True
    n_iter: int = 0
    loss_path: list = field(default_factory=list)
    # gbt
    trees: list = field(default_factory=list)
    base_score: float = 0.0
    params: dict = field(default_factory=dict)

    @property
    def n_features(self) -> int:
        return len(self.columns)

    def schema_hash(self) -> str:
        return columns_hash(self.columns)


def columns_hash(columns) -> str:
    payload = json.dumps([c.to_json() for c in columns], sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def check_matrix_schema(model: Model, columns) -> None:
    if columns_hash(columns) != model.schema_hash():
        raise ValueError("schema hash mismatch: refusing to predict on a "
                         "matrix with a different feature schema")


def _as_rows(model: Model, rows) -> np.ndarray:
    X = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    if X.shape[1] != model.n_features:
        raise ValueError(f"row width {X.shape[1]} does not match the "
                         f"training schema ({model.n_features})")
    return X


def predict_margin(model: Model, rows) -> np.ndarray:
    X = _as_rows(model, rows)
    if model.kind == LOGIT:
        return X @ model.weights + model.intercept
    margin = np.full(X.shape[0], model.base_score, dtype=np.float64)
    for tree in model.trees:
        margin += tree.predict(X)
    return margin


def predict_proba(model: Model, rows) -> np.ndarray:
    return expit(predict_margin(model, rows))


@dataclass
class EvalReport:
    auc: float
    accuracy: float
    tp: int
    fp: int
    tn: int
    fn: int

    def to_json(self) -> dict:
        return {"auc": self.auc, "accuracy": self.accuracy, "tp": self.tp,
                "fp": self.fp, "tn": self.tn, "fn": self.fn}


def evaluate(model: Model, X, labels) -> EvalReport:
    from .metrics import evaluate_auc
    y = np.asarray(labels, dtype=int)
    proba = predict_proba(model, X)
    pred = (proba >= 0.5).astype(int)
    return EvalReport(
        auc=evaluate_auc(proba, y),
        accuracy=float(np.mean(pred == y)),
        tp=int(np.sum((pred == 1) & (y == 1))),
        fp=int(np.sum((pred == 1) & (y == 0))),
        tn=int(np.sum((pred == 0) & (y == 0))),
        fn=int(np.sum((pred == 0) & (y == 1))))


def intrinsic_importance(model: Model) -> GlobalExplanation:
    """Model's own ranking: |coefficient| for logit, total split gain for gbt."""
    if model.kind == LOGIT:
        scores = np.abs(model.weights)
    else:
        scores = np.zeros(model.n_features)
        for tree in model.trees:
            for node in range(len(tree.feature)):
                f = tree.feature[node]
                if f >= 0:
                    scores[f] += tree.gain[node]
    names = [c.name for c in model.columns]
    return GlobalExplanation(method="intrinsic", feature_names=names,
                             scores=scores, ranking=rank_descending(scores))


# ---------------------------------------------------------------------------
# serialization

def model_to_json(model: Model) -> dict:
    out = {"kind": model.kind, "schema_hash": model.schema_hash(),
           "columns": [c.to_json() for c in model.columns],
           "params": model.params}
    if model.kind == LOGIT:
        out["weights"] = model.weights.tolist()
        out["intercept"] = model.intercept
        out["converged"] = model.converged
        out["n_iter"] = model.n_iter
    else:
        out["base_score"] = model.base_score
        out["trees"] = [t.to_json() for t in model.trees]
    return out


def model_from_json(obj: dict) -> Model:
    columns = [FeatureColumn.from_json(c) for c in obj["columns"]]
    if columns_hash(columns) != obj["schema_hash"]:
        raise ValueError("schema hash mismatch in serialized model")
    if obj["kind"] == LOGIT:
        return Model(kind=LOGIT, columns=columns,
                     weights=np.asarray(obj["weights"], dtype=float),
                     intercept=float(obj["intercept"]),
                     converged=bool(obj["converged"]),
                     n_iter=int(obj["n_iter"]), params=obj.get("params", {}))
    return Model(kind=GBT, columns=columns,
                 base_score=float(obj["base_score"]),
                 trees=[Tree.from_json(t) for t in obj["trees"]],
                 params=obj.get("params", {}))


def save_model(model: Model, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_json(model), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path) -> Model:
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_json(json.load(fh))
