"""Gradient-boosted trees: second-order logistic boosting, exact greedy splits.

Leaf weight -G/(H+lambda); split gain
0.5*[G_L^2/(H_L+lambda) + G_R^2/(H_R+lambda) - G^2/(H+lambda)] - gamma.
Splits with non-positive gain are not taken, so stored gains are positive
whenever gamma = 0.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .core import GBT, Model, Tree


@dataclass
class GbtParams:
    n_trees: int = 100
    learning_rate: float = 0.1
    max_depth: int = 3
    min_child_weight: float = 1.0
    l2_leaf: float = 1.0
    gain_threshold: float = 0.0
    subsample_ratio: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.learning_rate <= 1.0:
            raise ValueError("learning_rate must lie in (0, 1]")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if not 0.0 < self.subsample_ratio <= 1.0:
            raise ValueError("subsample_ratio must lie in (0, 1]")
        if self.l2_leaf < 0 or self.gain_threshold < 0:
            raise ValueError("l2_leaf and gain_threshold must be >= 0")

    def to_json(self) -> dict:
        return {"n_trees": self.n_trees, "learning_rate": self.learning_rate,
                "max_depth": self.max_depth,
                "min_child_weight": self.min_child_weight,
                "l2_leaf": self.l2_leaf, "gain_threshold": self.gain_threshold,
                "subsample_ratio": self.subsample_ratio, "seed": self.seed}


class _TreeBuilder:
    def __init__(self, X, g, h, hp: GbtParams):
        self.X = X
        self.g = g
        self.h = h
        self.hp = hp
        self.feature = []
        self.threshold = []
        self.left = []
        self.right = []
        self.value = []
        self.gain = []

    def _new_node(self):
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(0.0)
        self.gain.append(0.0)
        return len(self.feature) - 1

    def _best_split(self, idx):
        """Exact greedy split over all features at once (vectorized scan)."""
        lam = self.hp.l2_leaf
        if len(idx) < 2:
            return None
        Xn = self.X[idx]
        g = self.g[idx]
        h = self.h[idx]
        order = np.argsort(Xn, axis=0, kind="stable")
        Xs = np.take_along_axis(Xn, order, axis=0)
        Gl = np.cumsum(g[order], axis=0)[:-1]  # left sums at cut after row i
        Hl = np.cumsum(h[order], axis=0)[:-1]
        Gt, Ht = g.sum(), h.sum()
        Gr, Hr = Gt - Gl, Ht - Hl
        gains = 0.5 * (Gl**2 / (Hl + lam) + Gr**2 / (Hr + lam)
                       - Gt**2 / (Ht + lam)) - self.hp.gain_threshold
        valid = (Xs[:-1] < Xs[1:]) \
            & (Hl >= self.hp.min_child_weight) \
            & (Hr >= self.hp.min_child_weight)
        gains = np.where(valid, gains, -np.inf)
        flat = int(np.argmax(gains))
        cut, feat = np.unravel_index(flat, gains.shape)
        best = gains[cut, feat]
        if not np.isfinite(best) or best <= 0.0:
            return None
        thr = 0.5 * (Xs[cut, feat] + Xs[cut + 1, feat])
        mask = Xn[:, feat] <= thr
        return feat, float(thr), float(best), idx[mask], idx[~mask]

    def build(self, idx, depth) -> int:
        node = self._new_node()
        split = self._best_split(idx) if depth < self.hp.max_depth else None
        if split is None:
            G = self.g[idx].sum()
            H = self.h[idx].sum()
            self.value[node] = float(-G / (H + self.hp.l2_leaf)
                                     * self.hp.learning_rate)
            return node
        feat, thr, gain, left_idx, right_idx = split
        self.feature[node] = int(feat)
        self.threshold[node] = thr
        self.gain[node] = gain
        self.left[node] = self.build(left_idx, depth + 1)
        self.right[node] = self.build(right_idx, depth + 1)
        return node

    def tree(self) -> Tree:
        return Tree(feature=np.asarray(self.feature, dtype=int),
                    threshold=np.asarray(self.threshold, dtype=float),
                    left=np.asarray(self.left, dtype=int),
                    right=np.asarray(self.right, dtype=int),
                    value=np.asarray(self.value, dtype=float),
                    gain=np.asarray(self.gain, dtype=float))


def train_gbt(matrix, hp: GbtParams | None = None) -> Model:
    hp = hp or GbtParams()
    X = np.asarray(matrix.rows, dtype=np.float64)
    y = np.asarray(matrix.labels, dtype=np.float64)
    if X.shape[0] < 2:
        raise ValueError("need at least 2 rows")
    if len(np.unique(y)) < 2:
        raise ValueError("single-class labels: cannot fit a classifier")
    if not np.any(X.std(axis=0) > 0):
        raise ValueError("degenerate all-constant matrix")

    prior = float(np.clip(y.mean(), 1e-6, 1.0 - 1e-6))
    base = float(np.log(prior / (1.0 - prior)))
    rng = np.random.default_rng(hp.seed)
    n = X.shape[0]
    margin = np.full(n, base)
    trees = []
    for _ in range(hp.n_trees):
        if hp.subsample_ratio < 1.0:
            size = max(2, int(round(hp.subsample_ratio * n)))
            sub = np.sort(rng.choice(n, size=size, replace=False))
        else:
            sub = np.arange(n)
        p = expit(margin[sub])
        g = p - y[sub]
        h = p * (1.0 - p)
        builder = _TreeBuilder(X[sub], g, h, hp)
        builder.build(np.arange(len(sub)), 0)
        tree = builder.tree()
        trees.append(tree)
        margin += tree.predict(X)

    return Model(kind=GBT, columns=list(matrix.columns), trees=trees,
                 base_score=base, params=hp.to_json())
