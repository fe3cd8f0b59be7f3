from .pfi import pfi
from .ale import ale_curve, ale_global_rank
from .shap import (shap_exact, shap_kernel, shap_linear, shap_global,
                   shap_background, shap_dependence_data, decision_path_data)
from .lime import lime_explain, categorical_indices

__all__ = [
    "pfi", "ale_curve", "ale_global_rank",
    "shap_exact", "shap_kernel", "shap_linear", "shap_global",
    "shap_background", "shap_dependence_data", "decision_path_data",
    "lime_explain", "categorical_indices",
]
