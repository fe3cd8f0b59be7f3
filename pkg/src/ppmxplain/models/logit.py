"""L2-regularized logistic regression via damped Newton iterations."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .core import LOGIT, Model


@dataclass
class LogitParams:
    l2_strength: float = 1e-2
    max_iters: int = 100
    tolerance: float = 1e-6

    def __post_init__(self):
        if self.l2_strength < 0:
            raise ValueError("l2_strength must be >= 0")

    def to_json(self) -> dict:
        return {"l2_strength": self.l2_strength, "max_iters": self.max_iters,
                "tolerance": self.tolerance}


def _loss(margin, y, w, lam):
    # sum logloss + (lam/2)||w||^2; logaddexp keeps large margins stable
    nll = np.sum(np.logaddexp(0.0, margin) - y * margin)
    return nll + 0.5 * lam * float(w @ w)


def train_logit(matrix, hp: LogitParams | None = None) -> Model:
    """Full-batch Newton fit with step halving (loss never increases).

    Columns are standardized internally with the training mean/std and the
    weights de-standardized afterwards, so the reported coefficients refer
    to the original feature units.
    """
    hp = hp or LogitParams()
    X = np.asarray(matrix.rows, dtype=np.float64)
    y = np.asarray(matrix.labels, dtype=np.float64)
    if X.shape[0] < 2:
        raise ValueError("need at least 2 rows")
    if len(np.unique(y)) < 2:
        raise ValueError("single-class labels: cannot fit a classifier")

    mu = X.mean(axis=0)
    sd = X.std(axis=0)
    live = sd > 0
    if not live.any():
        raise ValueError("degenerate all-constant matrix")
    sd_safe = np.where(live, sd, 1.0)
    Z = (X - mu) / sd_safe

    n, m = Z.shape
    lam = hp.l2_strength
    w = np.zeros(m)
    b = 0.0
    loss_path = [_loss(Z @ w + b, y, w, lam)]
    converged = False
    it = 0
    for it in range(1, hp.max_iters + 1):
        margin = Z @ w + b
        p = expit(margin)
        grad_w = Z.T @ (p - y) + lam * w
        grad_b = float(np.sum(p - y))
        if max(np.max(np.abs(grad_w)), abs(grad_b)) < hp.tolerance:
            converged = True
            it -= 1
            break
        weight = p * (1.0 - p)
        Zw = Z * weight[:, None]
        H = np.empty((m + 1, m + 1))
        H[:m, :m] = Z.T @ Zw + lam * np.eye(m)
        H[:m, m] = Zw.sum(axis=0)
        H[m, :m] = H[:m, m]
        H[m, m] = weight.sum()
        H[np.diag_indices_from(H)] += 1e-10
        grad = np.concatenate([grad_w, [grad_b]])
        try:
            step = np.linalg.solve(H, grad)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(H, grad, rcond=None)[0]
        scale = 1.0
        current = loss_path[-1]
        for _ in range(60):
            w_new = w - scale * step[:m]
            b_new = b - scale * step[m]
            new_loss = _loss(Z @ w_new + b_new, y, w_new, lam)
            if new_loss <= current + 1e-12:
                break
            scale *= 0.5
        else:
            converged = True  # no descent direction left: at the optimum
            it -= 1
            break
        w, b = w_new, b_new
        loss_path.append(new_loss)
    else:
        margin = Z @ w + b
        p = expit(margin)
        grad_w = Z.T @ (p - y) + lam * w
        grad_b = float(np.sum(p - y))
        converged = max(np.max(np.abs(grad_w)), abs(grad_b)) < hp.tolerance

    w_orig = np.where(live, w / sd_safe, 0.0)
    b_orig = b - float(np.sum(w_orig * mu))
    return Model(kind=LOGIT, columns=list(matrix.columns), weights=w_orig,
                 intercept=b_orig, converged=converged, n_iter=it,
                 loss_path=loss_path, params=hp.to_json())
