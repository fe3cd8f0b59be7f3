"""Stability of explanations across repeated runs.

VSI: how much the top-K feature sets of repeated LIME runs overlap
(mean pairwise Jaccard, as a percentage). CSI: share of features common
to every run whose coefficients keep their sign and a bounded coefficient
of variation. Global two-run consistency: Jaccard of top-K sets plus
Spearman rank correlation over their union.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.stats import spearmanr

from .explanations import GlobalExplanation, LimeExplanation


@dataclass
class StabilityReport:
    vsi: float  # percentage [0, 100]
    csi: float  # percentage [0, 100]
    runs: int
    top_k: int
    per_feature_coefficient_stats: dict  # common feature -> (mean, std)

    def to_json(self) -> dict:
        return {"vsi": self.vsi, "csi": self.csi, "runs": self.runs,
                "top_k": self.top_k,
                "per_feature_coefficient_stats": {
                    n: [float(m), float(s)]
                    for n, (m, s) in
                    sorted(self.per_feature_coefficient_stats.items())}}


@dataclass
class ConsistencyReport:
    jaccard_top_k: float  # [0, 1]
    spearman_union: float  # [-1, 1]
    top_k: int

    def to_json(self) -> dict:
        return {"jaccard_top_k": self.jaccard_top_k,
                "spearman_union": self.spearman_union, "top_k": self.top_k}


def _jaccard(a: set, b: set) -> float:
    union = a | b
    if not union:
        return 1.0
    return len(a & b) / len(union)


def vsi(runs, k: int) -> float:
    """Mean pairwise Jaccard similarity of top-K feature sets, x100."""
    if len(runs) < 2:
        raise ValueError("need at least 2 runs")
    sets = []
    for run in runs:
        names = [n for n, _ in run.top_features][:k]
        if len(run.top_features) < k:
            raise ValueError(f"run offers {len(run.top_features)} features, "
                             f"fewer than K={k}")
        sets.append(set(names))
    sims = [_jaccard(a, b) for a, b in combinations(sets, 2)]
    return 100.0 * float(np.mean(sims))


def csi(runs, cv_threshold: float = 0.5) -> float:
    """Share of always-selected features with sign-stable, low-variance
    coefficients; 0 when no feature is common to every run."""
    if len(runs) < 2:
        raise ValueError("need at least 2 runs")
    common = set.intersection(*[run.feature_set() for run in runs])
    if not common:
        return 0.0
    stable = 0
    for name in common:
        coefs = np.array([run.coefficient_of(name) for run in runs])
        signs = np.sign(coefs)
        same_sign = np.all(signs == signs[0]) and signs[0] != 0
        cv = coefs.std() / (abs(coefs.mean()) + 1e-12)
        if same_sign and cv <= cv_threshold:
            stable += 1
    return 100.0 * stable / len(common)


def coefficient_stats(runs) -> dict:
    common = set.intersection(*[run.feature_set() for run in runs])
    out = {}
    for name in sorted(common):
        coefs = np.array([run.coefficient_of(name) for run in runs])
        out[name] = (float(coefs.mean()), float(coefs.std()))
    return out


def lime_stability_report(runs, k: int, cv_threshold: float = 0.5) -> StabilityReport:
    return StabilityReport(vsi=vsi(runs, k), csi=csi(runs, cv_threshold),
                           runs=len(runs), top_k=k,
                           per_feature_coefficient_stats=coefficient_stats(runs))


def global_run_consistency(a: GlobalExplanation, b: GlobalExplanation,
                           top_k: int) -> ConsistencyReport:
    """Two-run agreement of a global method: top-K Jaccard plus Spearman
    over the union of both top-K sets (absent features rank |union|+1)."""
    if set(a.feature_names) != set(b.feature_names):
        raise ValueError("explanations cover different feature universes")
    top_a = a.top_k_names(top_k)
    top_b = b.top_k_names(top_k)
    union = sorted(set(top_a) | set(top_b))
    absent = len(union) + 1

    def ranks(top):
        position = {name: i + 1 for i, name in enumerate(top)}
        return [position.get(name, absent) for name in union]

    ra, rb = ranks(top_a), ranks(top_b)
    if len(union) < 2:
        rho = 1.0 if ra == rb else 0.0
    else:
        rho = float(spearmanr(ra, rb).statistic)
        if np.isnan(rho):  # constant rank vector (identical sets of size K=1 etc.)
            rho = 1.0 if ra == rb else 0.0
    return ConsistencyReport(jaccard_top_k=_jaccard(set(top_a), set(top_b)),
                             spearman_union=rho, top_k=top_k)
