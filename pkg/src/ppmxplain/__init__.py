"""Workbench for comparing model-agnostic XAI methods (PFI, ALE, SHAP, LIME)
over outcome-oriented predictive-process-monitoring pipelines.

The offline chain mirrors the usual PPM workflow: event log -> prefix log
-> buckets -> encoded feature matrices -> per-bucket model; the online path
routes a running instance to its bucket and encodes it identically. On top
sit the four explainers, stability metrics, and a seeded benchmark grid.
"""

from .eventlog import (AttributeSpec, Event, EventLog, LabeledLog,
                       LabelingRule, LogStatistics, SynthConfig, Trace,
                       apply_labeling, compute_statistics,
                       generate_synthetic_log, parse_event_log,
                       temporal_split, write_event_log)
from .prefixing import Prefix, PrefixLog, PrefixSpec, build_prefix_log, prefix_lengths
from .bucketing import BucketedLog, BucketingStrategy, assign_buckets, lookup_bucket
from .encoding import (EncoderModel, FeatureColumn, FeatureMatrix,
                       encode_bucket, encode_instance, fit_encoder)
from .explanations import (ALECurve, Attribution, DecisionPathData,
                           DependenceData, GlobalExplanation, LimeExplanation)
from .models import (GbtParams, LogitParams, Model, evaluate, evaluate_auc,
                     intrinsic_importance, load_model, predict_margin,
                     predict_proba, random_search, save_model, train_gbt,
                     train_logit)
from .explainers import (ale_curve, ale_global_rank, decision_path_data,
                         lime_explain, pfi, shap_background,
                         shap_dependence_data, shap_exact, shap_global,
                         shap_kernel, shap_linear)
from .stability import (ConsistencyReport, StabilityReport, csi,
                        global_run_consistency, lime_stability_report, vsi)
from .bench import ExperimentConfig, parse_config, run_grid, time_explainer
from .reports import emit_reports

__version__ = "0.1.0"
