from .core import (GBT, LOGIT, Model, EvalReport, predict_margin,
                   predict_proba, evaluate, intrinsic_importance, save_model,
                   load_model, check_matrix_schema)
from .logit import LogitParams, train_logit
from .gbt import GbtParams, train_gbt
from .metrics import evaluate_auc
from .search import random_search, sample_space, default_space

__all__ = [
    "GBT", "LOGIT",
    "Model", "EvalReport", "predict_margin", "predict_proba", "evaluate",
    "intrinsic_importance", "save_model", "load_model", "check_matrix_schema",
    "LogitParams", "train_logit", "GbtParams", "train_gbt", "evaluate_auc",
    "random_search", "sample_space", "default_space",
]
