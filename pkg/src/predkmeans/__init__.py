"""Predictor-seeded k-means clustering with PCA reduction.

The package provides dense-matrix primitives with a Jacobi eigensolver,
PCA fitting and projection, k-means++/Lloyd clustering, label predictors,
the predictor-seeded clustering pipeline, dataset loaders, and a
benchmark harness for label-corruption sweeps.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DegenerateDataError,
    DomainError,
    FormatError,
    NumericalError,
)

__all__ = [
    "__version__",
    "ConfigError",
    "DegenerateDataError",
    "DomainError",
    "FormatError",
    "NumericalError",
    "EigenPairs",
    "sym_eigen",
    "PcaModel",
    "PcaPolicy",
    "LloydConfig",
    "ClusteringResult",
    "kmeanspp_seed",
    "lloyd",
    "best_of_kmeans",
    "SeedingMode",
    "PipelineConfig",
    "PipelineResult",
    "predictor_clustering",
    "coordinate_trimmed_mean",
    "ExperimentConfig",
    "run_experiment",
    "emit_results",
]

from .bench import ExperimentConfig, emit_results, run_experiment
from .kmeans import ClusteringResult, LloydConfig, best_of_kmeans, kmeanspp_seed, lloyd
from .linalg import EigenPairs, sym_eigen
from .pca import PcaModel, PcaPolicy
from .pipeline import (
    PipelineConfig,
    PipelineResult,
    SeedingMode,
    coordinate_trimmed_mean,
    predictor_clustering,
)
