"""Lloyd's algorithm with k-means++ seeding.

Conventions used throughout:

* centers are a (k, d) float array; labels are a (n,) int64 array with
  values in {0..k-1},
* distance ties always resolve to the lowest center index,
* the clustering objective is the sum of squared Euclidean distances from
  each point to its nearest center,
* empty clusters during an update are re-seeded with the point farthest
  from its currently assigned center (distinct points when several
  clusters empty at once), which never increases the objective.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .linalg import Matrix, as_matrix
from .rng import derive_seed, make_rng


@dataclass(frozen=True)
class LloydConfig:
    max_iters: int = 100
    tol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.max_iters < 1:
            raise DomainError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.tol < 0.0:
            raise DomainError(f"tol must be >= 0, got {self.tol}")


@dataclass(frozen=True)
class ClusteringResult:
    """Outcome of one Lloyd run.

    ``cost_history`` records the objective of the initial centers followed
    by the objective after every center update, so monotonicity is
    checkable after the fact.
    """

    centers: Matrix
    labels: np.ndarray
    cost: float
    iterations: int
    converged: bool
    cost_history: tuple = ()


def _check_dims(X: Matrix, centers: Matrix) -> None:
    if X.shape[1] != centers.shape[1]:
        raise DomainError(
            f"points have {X.shape[1]} columns, centers have {centers.shape[1]}"
        )


def _sq_distances(X: Matrix, centers: Matrix) -> Matrix:
    """(n, k) squared Euclidean distances, clipped at zero."""
    d2 = (
        (X * X).sum(axis=1)[:, None]
        + (centers * centers).sum(axis=1)[None, :]
        - 2.0 * (X @ centers.T)
    )
    return np.clip(d2, 0.0, None, out=d2)


def cost(X: Matrix, centers: Matrix) -> float:
    """Sum of squared distances from each row of X to its nearest center."""
    X = as_matrix(X)
    centers = as_matrix(centers, "centers")
    _check_dims(X, centers)
    if X.shape[0] == 0:
        return 0.0
    return float(_sq_distances(X, centers).min(axis=1).sum())


def assign(X: Matrix, centers: Matrix) -> np.ndarray:
    """Label each row of X with its nearest center (ties: lowest index)."""
    X = as_matrix(X)
    centers = as_matrix(centers, "centers")
    _check_dims(X, centers)
    return _sq_distances(X, centers).argmin(axis=1)


def validate_labels(labels, k: int, n: int) -> np.ndarray:
    labels = np.asarray(labels)
    if labels.ndim != 1 or labels.shape[0] != n:
        raise DomainError(f"expected {n} labels, got shape {labels.shape}")
    labels = labels.astype(np.int64)
    if labels.size and (labels.min() < 0 or labels.max() >= k):
        raise DomainError(f"labels must lie in [0, {k}), got range "
                          f"[{labels.min()}, {labels.max()}]")
    return labels


def kmeanspp_seed(X: Matrix, k: int, seed: int) -> Matrix:
    """Pick k distinct rows of X by squared-distance weighted sampling.

    The first center is uniform; each subsequent one is drawn with
    probability proportional to its squared distance from the nearest
    already-chosen center.  If every remaining distance is zero (duplicate
    rows), the draw falls back to uniform over unchosen indices so the
    selected indices stay distinct.
    """
    X = as_matrix(X)
    n = X.shape[0]
    if not 1 <= k <= n:
        raise DomainError(f"k must lie in [1, {n}], got {k}")
    rng = make_rng(seed)

    chosen = np.empty(k, dtype=np.int64)
    chosen[0] = rng.integers(n)
    d2 = ((X - X[chosen[0]]) ** 2).sum(axis=1)
    taken = np.zeros(n, dtype=bool)
    taken[chosen[0]] = True

    for i in range(1, k):
        total = float(d2.sum())
        if total > 0.0:
            nxt = int(rng.choice(n, p=d2 / total))
        else:
            nxt = int(rng.choice(np.flatnonzero(~taken)))
        chosen[i] = nxt
        taken[nxt] = True
        np.minimum(d2, ((X - X[nxt]) ** 2).sum(axis=1), out=d2)

    return X[chosen].copy()


def uniform_seed(X: Matrix, k: int, seed: int) -> Matrix:
    """Ablation seeding: k distinct rows chosen uniformly at random."""
    X = as_matrix(X)
    n = X.shape[0]
    if not 1 <= k <= n:
        raise DomainError(f"k must lie in [1, {n}], got {k}")
    idx = make_rng(seed).choice(n, size=k, replace=False)
    return X[idx].copy()


def update_centers(X: Matrix, labels, k: int) -> Matrix:
    """Mean of each labeled group; empty groups re-seeded deterministically.

    An empty cluster is moved onto the point farthest from the center it is
    currently assigned to (lowest index on ties); with several empty
    clusters each takes a distinct point, in ascending cluster order.
    """
    X = as_matrix(X)
    n = X.shape[0]
    labels = validate_labels(labels, k, n)
    centers = np.zeros((k, X.shape[1]))
    counts = np.bincount(labels, minlength=k)
    for j in range(k):
        if counts[j] > 0:
            centers[j] = X[labels == j].mean(axis=0)

    empty = np.flatnonzero(counts == 0)
    if empty.size:
        dist_own = ((X - centers[labels]) ** 2).sum(axis=1)
        for j in empty:
            far = int(np.argmax(dist_own))
            centers[j] = X[far]
            dist_own[far] = -np.inf
    return centers


def lloyd(X: Matrix, init: Matrix, cfg: LloydConfig = LloydConfig()) -> ClusteringResult:
    """Alternate assignment and center updates from the given initial centers.

    Stops when the labels repeat, when every center moves less than
    ``tol * (1 + ||center||)``, or after ``max_iters`` iterations; only the
    last case reports ``converged=False``.
    """
    X = as_matrix(X)
    init = as_matrix(init, "init")
    _check_dims(X, init)
    k = init.shape[0]
    if not 1 <= k <= X.shape[0]:
        raise DomainError(f"need 1 <= k <= n, got k={k}, n={X.shape[0]}")

    centers = init.copy()
    history = [cost(X, centers)]
    prev_labels = None
    labels = None
    converged = False
    iterations = 0

    for it in range(1, cfg.max_iters + 1):
        iterations = it
        labels = assign(X, centers)
        if prev_labels is not None and np.array_equal(labels, prev_labels):
            converged = True
            break
        new_centers = update_centers(X, labels, k)
        shifts = np.sqrt(((new_centers - centers) ** 2).sum(axis=1))
        limits = cfg.tol * (1.0 + np.sqrt((new_centers ** 2).sum(axis=1)))
        centers = new_centers
        history.append(cost(X, centers))
        prev_labels = labels
        if np.all(shifts < limits):
            converged = True
            break

    return ClusteringResult(
        centers=centers,
        labels=labels,
        cost=history[-1],
        iterations=iterations,
        converged=converged,
        cost_history=tuple(history),
    )


def best_of_kmeans(
    X: Matrix,
    k: int,
    restarts: int,
    cfg: LloydConfig = LloydConfig(),
    init: str = "kmeanspp",
) -> ClusteringResult:
    """Best of several seeded k-means runs by final cost (first on ties).

    Restart seeds are derived from ``cfg.seed`` so the individual runs are
    independent of one another and of any other consumer of that seed.
    """
    if restarts < 1:
        raise DomainError(f"restarts must be >= 1, got {restarts}")
    seeder = {"kmeanspp": kmeanspp_seed, "uniform": uniform_seed}.get(init)
    if seeder is None:
        raise DomainError(f"unknown init {init!r}")
    best = None
    for i in range(restarts):
        centers0 = seeder(X, k, derive_seed(cfg.seed, i))
        result = lloyd(X, centers0, cfg)
        if best is None or result.cost < best.cost:
            best = result
    return best
