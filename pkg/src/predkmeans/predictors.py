"""Label predictors: every variant maps a point matrix to cluster labels.

Three families are provided:

* ``NearestNeighborPredictor`` labels a query with the label of its closest
  reference point (exact brute-force search, lowest index on ties);
* ``NoisyPredictor`` corrupts a fixed base labeling, independently
  replacing each label with a uniform draw over all k labels (which may
  repeat the original) at a configured error rate;
* ``FileOraclePredictor`` replays labels produced by some external model,
  loaded from a plain text file with one integer per line.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FormatError
from .kmeans import _sq_distances, validate_labels
from .linalg import Matrix, as_matrix
from .rng import make_rng


def noisy_labels(base, error_rate: float, k: int, seed: int) -> np.ndarray:
    """Corrupt each label independently with probability ``error_rate``.

    A corrupted position receives a uniform draw over {0..k-1}, so the
    expected disagreement with the base labeling is error_rate * (k-1)/k.
    Deterministic for a given seed.
    """
    if not 0.0 <= error_rate <= 1.0:
        raise DomainError(f"error_rate must lie in [0, 1], got {error_rate}")
    base = validate_labels(base, k, len(base))
    rng = make_rng(seed)
    n = base.shape[0]
    flip = rng.random(n) < error_rate
    draws = rng.integers(0, k, size=n)
    return np.where(flip, draws, base)


@dataclass(frozen=True)
class NearestNeighborPredictor:
    reference_points: Matrix
    reference_labels: np.ndarray
    k: int

    def predict(self, X: Matrix) -> np.ndarray:
        X = as_matrix(X)
        if X.shape[1] != self.reference_points.shape[1]:
            raise DomainError(
                f"query has {X.shape[1]} columns, references have "
                f"{self.reference_points.shape[1]}"
            )
        nearest = _sq_distances(X, self.reference_points).argmin(axis=1)
        return self.reference_labels[nearest]


@dataclass(frozen=True)
class NoisyPredictor:
    base_labels: np.ndarray
    error_rate: float
    k: int
    seed: int

    def predict(self, X: Matrix) -> np.ndarray:
        X = as_matrix(X)
        if X.shape[0] != self.base_labels.shape[0]:
            raise DomainError(
                f"{X.shape[0]} rows but {self.base_labels.shape[0]} base labels"
            )
        return noisy_labels(self.base_labels, self.error_rate, self.k, self.seed)


@dataclass(frozen=True)
class FileOraclePredictor:
    labels: np.ndarray
    k: int

    def predict(self, X: Matrix) -> np.ndarray:
        X = as_matrix(X)
        if X.shape[0] != self.labels.shape[0]:
            raise DomainError(
                f"{X.shape[0]} rows but {self.labels.shape[0]} stored labels"
            )
        return self.labels.copy()


def nn_predictor_build(ref_X: Matrix, ref_labels) -> NearestNeighborPredictor:
    """Capture a reference set for nearest-neighbor labeling."""
    ref_X = as_matrix(ref_X, "reference points")
    if ref_X.shape[0] < 1:
        raise DomainError("reference set must be nonempty")
    k = int(np.max(ref_labels)) + 1
    ref_labels = validate_labels(ref_labels, k, ref_X.shape[0])
    return NearestNeighborPredictor(ref_X, ref_labels, k)


def file_oracle_load(path, expected_n: int, k: int) -> FileOraclePredictor:
    """Load one integer label per line; strict count and range checks.

    LF or CRLF endings are accepted and a single trailing newline is fine;
    empty lines are a format error.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        text = fh.read()
    labels = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            raise FormatError(f"{path}: empty line at line {lineno}")
        try:
            value = int(line)
        except ValueError:
            raise FormatError(
                f"{path}: non-integer label {line!r} at line {lineno}"
            ) from None
        if not 0 <= value < k:
            raise FormatError(
                f"{path}: label {value} out of range [0, {k}) at line {lineno}"
            )
        labels.append(value)
    if len(labels) != expected_n:
        raise FormatError(
            f"{path}: expected {expected_n} labels, found {len(labels)}"
        )
    return FileOraclePredictor(np.asarray(labels, dtype=np.int64), k)
