"""Predictor-seeded clustering pipeline.

Flow: optionally reduce the data with PCA, ask a predictor for initial
labels, turn each label group into a seed center by a (possibly trimmed)
coordinate-wise mean, optionally refine with Lloyd iterations, then report
labels, centers and cost back in the original coordinate space so runs
with and without reduction stay comparable.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from . import pca as pca_mod
from .errors import DomainError
from .kmeans import (
    ClusteringResult,
    LloydConfig,
    cost,
    lloyd,
    update_centers,
    validate_labels,
)
from .linalg import Matrix, Vector, as_matrix, mean_rows
from .pca import PcaPolicy
from .predictors import NearestNeighborPredictor, nn_predictor_build


@dataclass(frozen=True)
class SeedingMode:
    """How label groups become seed centers: plain or trimmed means."""

    trim_alpha: float | None = None

    def __post_init__(self):
        if self.trim_alpha is not None and not 0.0 <= self.trim_alpha < 0.5:
            raise DomainError(
                f"trim fraction must lie in [0, 0.5), got {self.trim_alpha}"
            )

    @classmethod
    def coordinate_mean(cls) -> "SeedingMode":
        return cls(trim_alpha=None)

    @classmethod
    def trimmed_mean(cls, alpha: float = 0.1) -> "SeedingMode":
        return cls(trim_alpha=alpha)


@dataclass(frozen=True)
class PipelineConfig:
    k: int
    pca: PcaPolicy | None = None
    seeding: SeedingMode = field(default_factory=SeedingMode.coordinate_mean)
    lloyd: LloydConfig = field(default_factory=LloydConfig)
    refine: bool = True

    def __post_init__(self):
        if self.k < 1:
            raise DomainError(f"k must be >= 1, got {self.k}")


@dataclass(frozen=True)
class PipelineResult:
    """Final clustering in original coordinates plus run diagnostics."""

    result: ClusteringResult
    reduced_dim: int | None
    cost_ratio: float | None
    iterations: int
    lloyd_seconds: float = 0.0


def coordinate_trimmed_mean(points: Matrix, alpha: float) -> Vector:
    """Per-coordinate mean after dropping ceil(alpha*n) values off each tail.

    With alpha=0 this is exactly the plain coordinate-wise mean.  If the
    trim removes everything (small groups, alpha near 0.5) the
    per-coordinate median is used instead.
    """
    points = as_matrix(points, "points")
    n = points.shape[0]
    if n < 1:
        raise DomainError("trimmed mean of an empty point set")
    if not 0.0 <= alpha < 0.5:
        raise DomainError(f"alpha must lie in [0, 0.5), got {alpha}")
    t = int(np.ceil(alpha * n))
    if t == 0:
        return points.mean(axis=0)
    if n - 2 * t <= 0:
        return np.median(points, axis=0)
    ordered = np.sort(points, axis=0)
    return ordered[t : n - t].mean(axis=0)


def centers_from_labels(X: Matrix, labels, k: int, mode: SeedingMode) -> Matrix:
    """Seed centers from a labeling: one (trimmed) mean per label group.

    Label values never used get a deterministic fallback center: the point
    farthest from the global mean, each empty group taking a distinct
    point in ascending group order.
    """
    X = as_matrix(X)
    n = X.shape[0]
    labels = validate_labels(labels, k, n)
    alpha = mode.trim_alpha if mode.trim_alpha is not None else 0.0

    centers = np.zeros((k, X.shape[1]))
    counts = np.bincount(labels, minlength=k)
    for j in range(k):
        if counts[j] > 0:
            centers[j] = coordinate_trimmed_mean(X[labels == j], alpha)

    empty = np.flatnonzero(counts == 0)
    if empty.size:
        dist = ((X - mean_rows(X)) ** 2).sum(axis=1)
        for j in empty:
            far = int(np.argmax(dist))
            centers[j] = X[far]
            dist[far] = -np.inf
    return centers


def cost_ratio(method_cost: float, baseline_cost: float) -> float:
    if method_cost < 0.0:
        raise DomainError(f"method cost must be >= 0, got {method_cost}")
    if baseline_cost <= 0.0:
        raise DomainError(f"baseline cost must be > 0, got {baseline_cost}")
    return method_cost / baseline_cost


def predictor_clustering(X: Matrix, predictor, cfg: PipelineConfig) -> PipelineResult:
    """Run the predictor-seeded pipeline on X.

    When PCA is configured, a nearest-neighbor predictor is rebuilt with
    its reference points projected by the same fitted model, so queries
    and references live in one space; label-replay predictors are
    space-agnostic and used as-is.  Whatever space the clustering ran in,
    the returned labels are scored by recomputing centers and cost on the
    original points.
    """
    X = as_matrix(X)
    n = X.shape[0]
    if n < 1:
        raise DomainError("cannot cluster an empty matrix")
    if cfg.k > n:
        raise DomainError(f"k={cfg.k} exceeds point count {n}")

    work = X
    reduced_dim = None
    if cfg.pca is not None:
        model = pca_mod.fit(X, cfg.pca)
        work = pca_mod.transform(model, X)
        reduced_dim = model.retained
        if isinstance(predictor, NearestNeighborPredictor):
            predictor = nn_predictor_build(
                pca_mod.transform(model, predictor.reference_points),
                predictor.reference_labels,
            )

    predicted = predictor.predict(work)
    predicted = validate_labels(predicted, cfg.k, n)

    seeds = centers_from_labels(work, predicted, cfg.k, cfg.seeding)

    lloyd_seconds = 0.0
    if cfg.refine:
        t0 = time.perf_counter()
        refined = lloyd(work, seeds, cfg.lloyd)
        lloyd_seconds = time.perf_counter() - t0
        final_labels = refined.labels
        iterations = refined.iterations
        converged = refined.converged
        centers_orig = update_centers(X, final_labels, cfg.k)
    else:
        final_labels = predicted
        iterations = 0
        converged = True
        centers_orig = (
            seeds if cfg.pca is None
            else centers_from_labels(X, final_labels, cfg.k, cfg.seeding)
        )

    final_cost = cost(X, centers_orig)
    result = ClusteringResult(
        centers=centers_orig,
        labels=final_labels,
        cost=final_cost,
        iterations=iterations,
        converged=converged,
        cost_history=(final_cost,),
    )
    return PipelineResult(
        result=result,
        reduced_dim=reduced_dim,
        cost_ratio=None,
        iterations=iterations,
        lloyd_seconds=lloyd_seconds,
    )
