"""Data ingestion: CSV matrices, CIFAR-10 binary batches, graph edge lists
with spectral embedding, and a synthetic Gaussian-mixture generator.

Loaders accept local files only and raise FormatError with a line or
record position on malformed input.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError, FormatError
from .linalg import Matrix, as_matrix, sym_eigen
from .rng import make_rng

_CIFAR_RECORD_BYTES = 3073
_CIFAR_PIXELS = 3072
_CIFAR_CLASSES = 10


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with ids compacted to 0..node_count-1.

    Edges are stored with u < v, deduplicated, in first-appearance order.
    """

    node_count: int
    edges: tuple

    def __post_init__(self):
        for u, v in self.edges:
            if not (0 <= u < v < self.node_count):
                raise DomainError(f"edge ({u}, {v}) violates graph invariants")


@dataclass(frozen=True)
class LabeledDataset:
    points: Matrix
    labels: np.ndarray | None
    name: str
    provenance: str

    def __post_init__(self):
        if self.labels is not None and len(self.labels) != self.points.shape[0]:
            raise DomainError("label count does not match point count")


def load_csv(path, has_header: bool = False) -> Matrix:
    """Parse a comma-separated numeric matrix (LF or CRLF, '.' decimals)."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        lines = fh.read().splitlines()
    start = 1 if has_header else 0
    rows = []
    width = None
    for lineno, line in enumerate(lines[start:], start=start + 1):
        fields = line.split(",")
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise FormatError(
                f"{path}: ragged row at line {lineno} "
                f"({len(fields)} fields, expected {width})"
            )
        try:
            row = [float(f) for f in fields]
        except ValueError:
            raise FormatError(f"{path}: unparseable number at line {lineno}") from None
        if not all(np.isfinite(row)):
            raise FormatError(f"{path}: non-finite value at line {lineno}")
        rows.append(row)
    if not rows:
        raise FormatError(f"{path}: no data rows")
    return as_matrix(rows)


def load_cifar10(path, scale: bool = True) -> LabeledDataset:
    """Parse CIFAR-10 binary batches: 3073-byte records, label byte first.

    Pixels arrive as a 32x32 red plane, then green, then blue; by default
    they are scaled to [0, 1] by dividing by 255 (``scale=False`` keeps raw
    byte values).
    """
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) % _CIFAR_RECORD_BYTES != 0:
        raise FormatError(
            f"{path}: size {len(blob)} is not a multiple of {_CIFAR_RECORD_BYTES}"
        )
    n = len(blob) // _CIFAR_RECORD_BYTES
    raw = np.frombuffer(blob, dtype=np.uint8).reshape(n, _CIFAR_RECORD_BYTES)
    labels = raw[:, 0].astype(np.int64)
    bad = np.flatnonzero(labels >= _CIFAR_CLASSES)
    if bad.size:
        raise FormatError(
            f"{path}: label byte {labels[bad[0]]} out of range at record {bad[0]}"
        )
    points = raw[:, 1:].astype(np.float64)
    if scale:
        points /= 255.0
    if n == 0:
        points = points.reshape(0, _CIFAR_PIXELS)
    return LabeledDataset(points=points, labels=labels, name="cifar10",
                          provenance=str(path))


def load_edge_list(path) -> Graph:
    """Parse whitespace-separated integer pairs; '#' lines are comments.

    Node ids are compacted to 0..n-1 in order of first appearance (a
    self-loop still registers its id); self-loops and duplicate edges are
    dropped.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        lines = fh.read().splitlines()
    ids: dict[int, int] = {}
    edges = []
    seen = set()
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        if len(tokens) != 2:
            raise FormatError(
                f"{path}: expected two node ids at line {lineno}, got {len(tokens)}"
            )
        try:
            a, b = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise FormatError(f"{path}: non-integer node id at line {lineno}") from None
        u = ids.setdefault(a, len(ids))
        v = ids.setdefault(b, len(ids))
        if u == v:
            continue
        if u > v:
            u, v = v, u
        if (u, v) not in seen:
            seen.add((u, v))
            edges.append((u, v))
    return Graph(node_count=len(ids), edges=tuple(edges))


def save_edge_list(graph: Graph, path) -> None:
    """Write a graph so that load_edge_list reproduces it exactly.

    Every node id is registered first via a self-loop line (ascending, so
    the loader's first-appearance compaction is the identity), then the
    edges follow in stored order.
    """
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# nodes registered below; self-loops are ignored by the loader\n")
        for i in range(graph.node_count):
            fh.write(f"{i} {i}\n")
        for u, v in graph.edges:
            fh.write(f"{u} {v}\n")


def normalized_laplacian(graph: Graph) -> Matrix:
    """Dense symmetric normalized Laplacian I - D^-1/2 A D^-1/2."""
    n = graph.node_count
    A = np.zeros((n, n))
    for u, v in graph.edges:
        A[u, v] = 1.0
        A[v, u] = 1.0
    deg = A.sum(axis=1)
    inv_sqrt = np.where(deg > 0, 1.0 / np.sqrt(np.where(deg > 0, deg, 1.0)), 0.0)
    return np.eye(n) - A * np.outer(inv_sqrt, inv_sqrt)


def spectral_embed(graph: Graph, dim: int) -> Matrix:
    """Embed nodes with low-frequency normalized-Laplacian eigenvectors.

    Coordinates are the eigenvectors at ascending eigenvalue positions
    1..dim (position 0, the flattest mode, is skipped).
    """
    if dim < 1:
        raise DomainError(f"embedding dim must be >= 1, got {dim}")
    if graph.node_count < dim + 1:
        raise DomainError(
            f"graph with {graph.node_count} nodes cannot embed into {dim} dims"
        )
    pairs = sym_eigen(normalized_laplacian(graph))
    ascending = np.argsort(pairs.eigenvalues, kind="stable")
    cols = ascending[1 : dim + 1]
    return pairs.eigenvectors[:, cols].copy()


def synth_gmm(
    k: int,
    n_per: int,
    dim: int,
    separation: float,
    sigma: float,
    seed: int,
) -> LabeledDataset:
    """Sample k isotropic Gaussian blobs with true labels recorded.

    Blob means sit at ``separation`` times random unit directions,
    rejection-sampled until all pairwise mean distances reach
    separation/2; a ConfigError is raised if 10000 draws cannot place
    them (separation infeasible for the dimension).
    """
    if k < 1 or n_per < 1 or dim < 1:
        raise DomainError("k, n_per and dim must all be >= 1")
    if separation <= 0.0 or sigma <= 0.0:
        raise DomainError("separation and sigma must be positive")
    rng = make_rng(seed)

    means = np.zeros((k, dim))
    placed = 0
    attempts = 0
    while placed < k:
        attempts += 1
        if attempts > 10000:
            raise ConfigError(
                f"could not place {k} blob means at separation {separation} "
                f"in {dim} dims within 10000 draws"
            )
        direction = rng.normal(size=dim)
        norm = float(np.sqrt((direction ** 2).sum()))
        if norm == 0.0:
            continue
        candidate = separation * direction / norm
        gaps = np.sqrt(((means[:placed] - candidate) ** 2).sum(axis=1))
        if placed == 0 or float(gaps.min()) >= separation / 2.0:
            means[placed] = candidate
            placed += 1

    points = np.empty((k * n_per, dim))
    labels = np.repeat(np.arange(k, dtype=np.int64), n_per)
    for j in range(k):
        block = rng.normal(size=(n_per, dim))
        points[j * n_per : (j + 1) * n_per] = means[j] + sigma * block

    name = f"synth-gmm-k{k}"
    provenance = (
        f"synth_gmm(k={k}, n_per={n_per}, dim={dim}, "
        f"separation={separation}, sigma={sigma}, seed={seed})"
    )
    return LabeledDataset(points=points, labels=labels, name=name,
                          provenance=provenance)
