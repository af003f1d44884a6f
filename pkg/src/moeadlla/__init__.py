"""MOEA/D with a group-sparse local linear model of the Pareto set.

The common entry points are re-exported here; the submodules hold the
rest (``moeadlla.metrics``, ``moeadlla.harness``, ...).
"""

from .errors import ConfigurationError, MetricUndefinedError, UnsupportedProblemError
from .linmodel import LinearModel, RegressionDataset, fit, load_model, predict, save_model, vsd
from .lla import LlaConfig, LlaResult, metric_estimate, predictions, run_lla
from .metrics import MetricReport, RMetricSetup, hypervolume, igd, r_hv, r_igd
from .moead import MoeadConfig, Population, run_moead_de
from .preference import PreferenceSet, project_to_simplex, sample_preference_set
from .problems import MopDefinition, make_problem, true_subproblem_optimum
from .scalarize import chebyshev

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "LinearModel",
    "LlaConfig",
    "LlaResult",
    "MetricReport",
    "MetricUndefinedError",
    "MoeadConfig",
    "MopDefinition",
    "Population",
    "PreferenceSet",
    "RMetricSetup",
    "RegressionDataset",
    "UnsupportedProblemError",
    "chebyshev",
    "fit",
    "hypervolume",
    "igd",
    "load_model",
    "make_problem",
    "metric_estimate",
    "predict",
    "predictions",
    "project_to_simplex",
    "r_hv",
    "r_igd",
    "run_lla",
    "run_moead_de",
    "sample_preference_set",
    "save_model",
    "true_subproblem_optimum",
    "vsd",
]
