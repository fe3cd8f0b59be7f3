"""Explanation artifacts shared by the explainers, the models, and the bench."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class Attribution:
    """Additive per-feature attribution of one prediction, in log-odds."""
    per_feature: np.ndarray  # phi, aligned to feature columns
    base_value: float  # phi_0
    predicted: float  # explained row's margin
    row_id: object = None
    feature_names: list | None = None

    def local_accuracy_gap(self) -> float:
        return abs(self.base_value + float(np.sum(self.per_feature))
                   - self.predicted)

    def to_json(self) -> dict:
        return {"per_feature": [float(v) for v in self.per_feature],
                "base_value": self.base_value, "predicted": self.predicted,
                "row_id": list(self.row_id) if isinstance(self.row_id, tuple)
                else self.row_id,
                "feature_names": self.feature_names}


@dataclass
class GlobalExplanation:
    method: str  # pfi | shap-global | ale-entropy | intrinsic
    feature_names: list
    scores: np.ndarray
    ranking: list  # feature indices, descending score, stable ties
    per_iteration: np.ndarray | None = None  # (n_iter, n_features), PFI only

    def __post_init__(self):
        if sorted(self.ranking) != list(range(len(self.feature_names))):
            raise ValueError("ranking must be a permutation of all features")
        if self.per_iteration is not None and \
                self.per_iteration.shape[1] != len(self.feature_names):
            raise ValueError("per-iteration width must match feature count")

    def top_k_names(self, k: int) -> list:
        return [self.feature_names[i] for i in self.ranking[:k]]

    def to_json(self) -> dict:
        out = {"method": self.method, "feature_names": self.feature_names,
               "scores": [float(v) for v in self.scores],
               "ranking": [int(i) for i in self.ranking]}
        if self.per_iteration is not None:
            out["per_iteration"] = [[float(v) for v in row]
                                    for row in self.per_iteration]
        return out


def rank_descending(scores) -> list:
    """Indices by descending score; ties keep original (stable) order."""
    scores = np.asarray(scores, dtype=float)
    return sorted(range(len(scores)), key=lambda i: (-scores[i], i))


@dataclass
class ALECurve:
    feature_index: int
    feature_name: str
    bin_edges: np.ndarray  # non-decreasing; [0, 1] on the binary path
    effects: np.ndarray  # centered accumulated effect at each edge
    bin_counts: np.ndarray  # data mass carried by each edge (half of each
    #                         adjacent quantile bin; exact counts when binary)

    def to_json(self) -> dict:
        return {"feature_index": self.feature_index,
                "feature_name": self.feature_name,
                "bin_edges": [float(v) for v in self.bin_edges],
                "effects": [float(v) for v in self.effects],
                "bin_counts": [float(v) for v in self.bin_counts]}


@dataclass
class LimeExplanation:
    top_features: list  # (feature name, coefficient) pairs, at most K
    intercept: float
    surrogate_r2: float
    seed: int

    def feature_set(self) -> set:
        return {name for name, _ in self.top_features}

    def coefficient_of(self, name: str):
        for n, c in self.top_features:
            if n == name:
                return c
        return None

    def to_json(self) -> dict:
        return {"top_features": [[n, float(c)] for n, c in self.top_features],
                "intercept": self.intercept, "surrogate_r2": self.surrogate_r2,
                "seed": self.seed}


@dataclass
class DependenceData:
    feature_index: int
    feature_name: str
    interaction_index: int | None
    interaction_name: str | None
    feature_values: np.ndarray
    shap_values: np.ndarray
    interaction_values: np.ndarray | None

    def to_json(self) -> dict:
        return {"feature_index": self.feature_index,
                "feature_name": self.feature_name,
                "interaction_index": self.interaction_index,
                "interaction_name": self.interaction_name,
                "feature_values": [float(v) for v in self.feature_values],
                "shap_values": [float(v) for v in self.shap_values],
                "interaction_values": None if self.interaction_values is None
                else [float(v) for v in self.interaction_values]}


@dataclass
class DecisionPathData:
    base_value: float
    predicted: float
    steps: list = field(default_factory=list)
    # steps: (feature name or "others", phi, cumulative after step),
    # ordered ascending |phi| so the plot climbs toward the prediction.

    def to_json(self) -> dict:
        return {"base_value": self.base_value, "predicted": self.predicted,
                "steps": [[n, float(p), float(c)] for n, p, c in self.steps]}
