"""Principal component analysis on top of the Jacobi eigensolver.

The fit pipeline is: column means -> centering -> scatter matrix ->
eigendecomposition -> component selection.  Selection is governed by a
PcaPolicy: either keep a fixed number of leading components or keep the
smallest prefix whose cumulative explained-variance ratio reaches a
threshold.
"""

import json
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDataError, DomainError
from .linalg import Matrix, Vector, as_matrix, as_vector, center, mean_rows, scatter, sym_eigen

_MODEL_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class PcaPolicy:
    """Component retention rule: exactly one of the two fields is set."""

    fixed_dim: int | None = None
    evr_threshold: float | None = None

    def __post_init__(self):
        if (self.fixed_dim is None) == (self.evr_threshold is None):
            raise DomainError("set exactly one of fixed_dim or evr_threshold")
        if self.fixed_dim is not None and self.fixed_dim < 1:
            raise DomainError(f"fixed_dim must be >= 1, got {self.fixed_dim}")
        if self.evr_threshold is not None and not 0.0 < self.evr_threshold <= 1.0:
            raise DomainError(
                f"evr_threshold must lie in (0, 1], got {self.evr_threshold}"
            )

    @classmethod
    def fixed(cls, r: int) -> "PcaPolicy":
        return cls(fixed_dim=r)

    @classmethod
    def threshold(cls, t: float) -> "PcaPolicy":
        return cls(evr_threshold=t)


@dataclass(frozen=True)
class PcaModel:
    """Fitted transform: column means plus retained eigenvector columns.

    ``eigenvalues_all`` and ``evr`` cover all input dimensions (descending);
    ``components`` keeps only the ``retained`` leading eigenvectors as
    columns.  ``scale`` holds per-column standard deviations when the model
    was fitted with standardization, else None.  ``degenerate`` flags data
    with zero total variance, where the components fall back to the leading
    canonical axes.
    """

    mean: Vector
    components: Matrix
    eigenvalues_all: Vector
    retained: int
    evr: Vector
    degenerate: bool = False
    scale: Vector | None = None


def fit(X: Matrix, policy: PcaPolicy, standardize: bool = False) -> PcaModel:
    """Fit a PCA model on the rows of X.

    With ``standardize`` each column is divided by its sample standard
    deviation after centering (columns with deviation below 1e-12 are left
    unscaled).  Under an evr_threshold policy, data with zero total
    variance raises DegenerateDataError; under fixed_dim it yields a
    degenerate model whose components are canonical axes.
    """
    X = as_matrix(X)
    n, d = X.shape
    if n < 2:
        raise DomainError(f"PCA needs at least 2 rows, got {n}")
    if d < 1:
        raise DomainError("PCA needs at least 1 column")

    mu = mean_rows(X)
    Xc = center(X, mu)

    scale = None
    if standardize:
        sigma = Xc.std(axis=0, ddof=1)
        scale = np.where(sigma < 1e-12, 1.0, sigma)
        Xc = Xc / scale

    pairs = sym_eigen(scatter(Xc))
    eigenvalues = pairs.eigenvalues
    positive = np.clip(eigenvalues, 0.0, None)
    total = float(positive.sum())

    if total <= 0.0:
        if policy.evr_threshold is not None:
            raise DegenerateDataError(
                "total variance is zero; no component explains anything"
            )
        r = policy.fixed_dim
        if r > d:
            raise DomainError(f"fixed_dim {r} exceeds data dimension {d}")
        return PcaModel(
            mean=mu,
            components=np.eye(d)[:, :r].copy(),
            eigenvalues_all=np.zeros(d),
            retained=r,
            evr=np.zeros(d),
            degenerate=True,
            scale=scale,
        )

    evr = positive / total
    if policy.fixed_dim is not None:
        r = policy.fixed_dim
        if r > d:
            raise DomainError(f"fixed_dim {r} exceeds data dimension {d}")
    else:
        cumulative = np.cumsum(evr)
        idx = int(np.searchsorted(cumulative, policy.evr_threshold, side="left"))
        r = min(idx + 1, d)

    return PcaModel(
        mean=mu,
        components=pairs.eigenvectors[:, :r].copy(),
        eigenvalues_all=eigenvalues,
        retained=r,
        evr=evr,
        scale=scale,
    )


def transform(model: PcaModel, X: Matrix) -> Matrix:
    """Project rows of X onto the retained components."""
    X = as_matrix(X)
    if X.shape[1] != model.mean.shape[0]:
        raise DomainError(
            f"data has {X.shape[1]} columns, model expects {model.mean.shape[0]}"
        )
    Xc = X - model.mean
    if model.scale is not None:
        Xc = Xc / model.scale
    return Xc @ model.components


def inverse_transform(model: PcaModel, Y: Matrix) -> Matrix:
    """Map projected rows back into the original coordinate system."""
    Y = as_matrix(Y, "Y")
    if Y.shape[1] != model.retained:
        raise DomainError(
            f"projected data has {Y.shape[1]} columns, model retained {model.retained}"
        )
    X = Y @ model.components.T
    if model.scale is not None:
        X = X * model.scale
    return X + model.mean


def explained_variance_ratio(model: PcaModel) -> Vector:
    """Per-component share of the total variance (descending, sums to 1)."""
    return model.evr.copy()


def model_to_dict(model: PcaModel) -> dict:
    d = model.mean.shape[0]
    return {
        "schema_version": _MODEL_SCHEMA_VERSION,
        "kind": "pca-model",
        "dim": d,
        "retained": model.retained,
        "degenerate": model.degenerate,
        "mean": model.mean.tolist(),
        "eigenvalues": model.eigenvalues_all.tolist(),
        "evr": model.evr.tolist(),
        "components": model.components.tolist(),
        "scale": None if model.scale is None else model.scale.tolist(),
    }


def model_from_dict(doc: dict) -> PcaModel:
    if doc.get("kind") != "pca-model":
        raise DomainError("document is not a pca-model")
    if doc.get("schema_version") != _MODEL_SCHEMA_VERSION:
        raise DomainError(f"unsupported schema_version {doc.get('schema_version')}")
    scale = doc.get("scale")
    return PcaModel(
        mean=as_vector(doc["mean"], "mean"),
        components=as_matrix(doc["components"], "components"),
        eigenvalues_all=as_vector(doc["eigenvalues"], "eigenvalues"),
        retained=int(doc["retained"]),
        evr=as_vector(doc["evr"], "evr"),
        degenerate=bool(doc["degenerate"]),
        scale=None if scale is None else as_vector(scale, "scale"),
    )


def save_model(model: PcaModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path) -> PcaModel:
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
