"""Dense matrix helpers and a symmetric eigensolver.

Matrices are plain float64 numpy arrays (rows = samples, columns =
coordinates); vectors are 1-D arrays.  ``as_matrix``/``as_vector`` are the
construction boundary: everything downstream may assume finite entries and
the right rank.  The eigensolver is a cyclic Jacobi iteration, which is
simple, unconditionally stable for symmetric input, and fast enough for
the matrix sizes this package targets (a few hundred columns).
"""

import numpy as np

from .errors import DomainError, NumericalError

Matrix = np.ndarray
Vector = np.ndarray


def as_matrix(values, name: str = "matrix") -> Matrix:
    """Coerce to a finite 2-D float64 array, copying only if needed."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 2:
        raise DomainError(f"{name} must be 2-dimensional, got ndim={arr.ndim}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains non-finite entries")
    return arr


def as_vector(values, name: str = "vector") -> Vector:
    """Coerce to a finite 1-D float64 array."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise DomainError(f"{name} must be 1-dimensional, got ndim={arr.ndim}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains non-finite entries")
    return arr


def mean_rows(X: Matrix) -> Vector:
    """Column-wise mean over the rows of X."""
    X = as_matrix(X)
    if X.shape[0] < 1:
        raise DomainError("mean_rows requires at least one row")
    return X.mean(axis=0)


def center(X: Matrix, mu: Vector) -> Matrix:
    """Subtract ``mu`` from every row of X."""
    X = as_matrix(X)
    mu = as_vector(mu, "mu")
    if mu.shape[0] != X.shape[1]:
        raise DomainError(
            f"mean length {mu.shape[0]} does not match column count {X.shape[1]}"
        )
    return X - mu


def scatter(Xc: Matrix) -> Matrix:
    """Scatter matrix of centered rows: (1/m) Xc^T Xc, symmetrized exactly.

    Normalization is by the row count m, so the result is the (biased)
    covariance when Xc is mean-centered.
    """
    Xc = as_matrix(Xc, "Xc")
    m = Xc.shape[0]
    if m < 1:
        raise DomainError("scatter requires at least one row")
    C = Xc.T @ Xc / m
    # BLAS products are symmetric only up to rounding; enforce it exactly so
    # downstream symmetry checks never trip on ulp noise.
    return (C + C.T) / 2.0


class EigenPairs:
    """Eigendecomposition of a symmetric matrix.

    ``eigenvalues`` are sorted descending; ``eigenvectors`` holds the
    matching unit eigenvectors as columns.
    """

    __slots__ = ("eigenvalues", "eigenvectors")

    def __init__(self, eigenvalues: Vector, eigenvectors: Matrix):
        self.eigenvalues = eigenvalues
        self.eigenvectors = eigenvectors


_SYMMETRY_TOL = 1e-9
_OFFDIAG_STOP_FACTOR = 1e-10
_MAX_SWEEPS = 100


def _offdiag_norm(A: Matrix) -> float:
    # Summing off-diagonal squares directly avoids the cancellation that a
    # full-norm-minus-diagonal formula hits once the off-diagonal is tiny.
    off = A.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.sqrt(np.sum(off * off)))


def sym_eigen(C: Matrix, max_sweeps: int = _MAX_SWEEPS) -> EigenPairs:
    """Full eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.

    The input must be square and symmetric to within 1e-9 entrywise; it is
    symmetrized as (C + C^T)/2 before iterating.  Rotations stop once the
    off-diagonal Frobenius norm falls below 1e-10 times the Frobenius norm
    of the input.  Each eigenvector is sign-normalized so its
    largest-magnitude entry (lowest index on ties) is positive.

    Raises NumericalError (carrying the final off-diagonal norm) if the
    sweep budget is exhausted first.
    """
    C = as_matrix(C, "C")
    n, m = C.shape
    if n != m:
        raise DomainError(f"sym_eigen requires a square matrix, got {n}x{m}")
    if n == 0:
        raise DomainError("sym_eigen requires at least a 1x1 matrix")
    if float(np.max(np.abs(C - C.T), initial=0.0)) > _SYMMETRY_TOL:
        raise DomainError("matrix is not symmetric within 1e-9")

    A = (C + C.T) / 2.0
    V = np.eye(n)
    stop = _OFFDIAG_STOP_FACTOR * float(np.sqrt(np.sum(A * A)))

    for _ in range(max_sweeps):
        if _offdiag_norm(A) <= stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                app = A[p, p]
                aqq = A[q, q]
                diff = aqq - app
                if abs(apq) < 1e-36 * abs(diff):
                    t = apq / diff
                else:
                    tau = diff / (2.0 * apq)
                    t = 1.0 / (abs(tau) + np.sqrt(1.0 + tau * tau))
                    if tau < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c

                rp = A[p, :].copy()
                rq = A[q, :]
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                cp = A[:, p].copy()
                cq = A[:, q]
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                # The rotation zeroes (p,q) analytically; write the exact
                # updates rather than keeping the rounded ones.
                A[p, p] = app - t * apq
                A[q, q] = aqq + t * apq
                A[p, q] = 0.0
                A[q, p] = 0.0

                vp = V[:, p].copy()
                vq = V[:, q]
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    else:
        off = _offdiag_norm(A)
        if off > stop:
            raise NumericalError(
                f"Jacobi iteration did not converge in {max_sweeps} sweeps; "
                f"off-diagonal norm {off:.6e} (target {stop:.6e})",
                off_diagonal_norm=off,
            )

    eigenvalues = np.diag(A).copy()
    order = np.argsort(-eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    V = V[:, order]

    # Deterministic sign: largest-|entry| coordinate (first on ties) positive.
    pivot = np.argmax(np.abs(V), axis=0)
    flip = V[pivot, np.arange(n)] < 0.0
    V[:, flip] *= -1.0

    return EigenPairs(eigenvalues, V)
