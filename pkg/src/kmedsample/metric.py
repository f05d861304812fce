"""Distance oracles over Euclidean, graph shortest-path, and explicit-matrix spaces.

All three backends answer the same two queries:

  * ``distances_from(ref)`` -- distances from one point to every indexed point,
    the workhorse for cost evaluation and local search;
  * ``point_distance(a, b)`` -- a single pairwise distance.

Backends are immutable after construction and safe to share across threads.
The graph backend computes single-source shortest paths lazily (one Dijkstra
run per queried source) and memoizes rows in a small LRU cache; inserts are
serialized by a lock so concurrent readers stay consistent.

Points are addressed by integer ids ``0..n-1``.  On the Euclidean backend a
reference may instead be a free coordinate vector, which is how non-data
centers are expressed; graph and matrix backends only accept ids.
"""
from __future__ import annotations

import threading
from collections import OrderedDict
from typing import Iterable, Sequence, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

from .errors import InvalidInputError

__all__ = [
    "PointRef",
    "MetricBackend",
    "EuclideanBackend",
    "GraphBackend",
    "MatrixBackend",
    "distance",
    "distance_to_set",
    "load_points_csv",
    "load_edge_list",
    "load_matrix_csv",
    "write_points_csv",
    "write_edge_list",
    "write_matrix_csv",
]

#: A point reference: an index into the backend, or (Euclidean only) a free
#: coordinate vector.
PointRef = Union[int, np.integer, Sequence[float], np.ndarray]

# Relative tolerance for validating matrix-backend symmetry and triangle
# inequality on load.
MATRIX_VALIDATION_RTOL = 1e-9


def _is_index(ref: PointRef) -> bool:
    return isinstance(ref, (int, np.integer))


class MetricBackend:
    """Common interface of the three distance oracles."""

    kind: str = "abstract"

    @property
    def n_points(self) -> int:
        raise NotImplementedError

    def distances_from(self, ref: PointRef) -> np.ndarray:
        """Distances from ``ref`` to every indexed point, as a float array."""
        raise NotImplementedError

    def distances_to(self, ref: PointRef, ids: np.ndarray) -> np.ndarray:
        """Distances from ``ref`` to the given point ids only.

        Backends override this when they can beat compute-all-then-gather;
        the values are elementwise identical to ``distances_from(ref)[ids]``.
        """
        return self.distances_from(ref)[ids]

    def point_distance(self, a: PointRef, b: PointRef) -> float:
        raise NotImplementedError

    def _check_index(self, ref: PointRef) -> int:
        i = int(ref)
        if i < 0 or i >= self.n_points:
            raise InvalidInputError(
                f"point index {i} out of range for backend with {self.n_points} points"
            )
        return i


class EuclideanBackend(MetricBackend):
    """Points in R^d under the Euclidean metric."""

    kind = "euclidean"

    def __init__(self, points: np.ndarray):
        # Copy so freezing below never touches a caller-owned array.
        points = np.array(points, dtype=np.float64)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        if points.ndim != 2 or points.shape[0] < 1:
            raise InvalidInputError("expected a non-empty (n, d) coordinate array")
        if not np.all(np.isfinite(points)):
            raise InvalidInputError("coordinates must be finite")
        self.points = points
        self.points.setflags(write=False)

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def _coords(self, ref: PointRef) -> np.ndarray:
        if _is_index(ref):
            return self.points[self._check_index(ref)]
        c = np.asarray(ref, dtype=np.float64).ravel()
        if c.shape[0] != self.dim:
            raise InvalidInputError(
                f"free coordinates have dimension {c.shape[0]}, backend has {self.dim}"
            )
        return c

    def distances_from(self, ref: PointRef) -> np.ndarray:
        c = self._coords(ref)
        diff = self.points - c
        if self.dim == 1:
            return np.abs(diff[:, 0])
        return np.sqrt(np.einsum("ij,ij->i", diff, diff))

    def distances_to(self, ref: PointRef, ids: np.ndarray) -> np.ndarray:
        c = self._coords(ref)
        diff = self.points[ids] - c
        if self.dim == 1:
            return np.abs(diff[:, 0])
        return np.sqrt(np.einsum("ij,ij->i", diff, diff))

    def point_distance(self, a: PointRef, b: PointRef) -> float:
        return float(np.linalg.norm(self._coords(a) - self._coords(b)))


class GraphBackend(MetricBackend):
    """Shortest-path metric of a connected, undirected, weighted graph.

    Rows of the distance matrix are computed on demand by Dijkstra and kept
    in an LRU cache keyed by source vertex; local search queries distances
    from a few candidate centers against many points, so this caching policy
    makes repeated center evaluations cheap.
    """

    kind = "graph"

    def __init__(self, n_vertices: int, edges: Iterable[tuple], cache_size: int = 256):
        n_vertices = int(n_vertices)
        if n_vertices < 1:
            raise InvalidInputError("graph needs at least one vertex")
        rows, cols, vals = [], [], []
        for u, v, w in edges:
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise InvalidInputError(f"edge ({u},{v}) references a missing vertex")
            if w < 0 or not np.isfinite(w):
                raise InvalidInputError(f"edge ({u},{v}) has invalid weight {w}")
            rows += [u, v]
            cols += [v, u]
            vals += [w, w]
        self.n_vertices = n_vertices
        self._adj = csr_matrix(
            (np.array(vals), (np.array(rows, dtype=int), np.array(cols, dtype=int))),
            shape=(n_vertices, n_vertices),
        )
        if n_vertices > 1:
            ncomp, _ = connected_components(self._adj, directed=False)
            if ncomp != 1:
                raise InvalidInputError(
                    f"graph is disconnected ({ncomp} components); all pairwise "
                    "distances must be finite"
                )
        self._cache: OrderedDict[int, np.ndarray] = OrderedDict()
        self._cache_size = cache_size
        self._lock = threading.Lock()

    @property
    def n_points(self) -> int:
        return self.n_vertices

    def distances_from(self, ref: PointRef) -> np.ndarray:
        if not _is_index(ref):
            raise InvalidInputError("graph backend points are vertex ids, not coordinates")
        src = self._check_index(ref)
        row = self._cache.get(src)
        if row is not None:
            return row
        row = dijkstra(self._adj, directed=False, indices=src)
        if np.any(np.isinf(row)):
            raise InvalidInputError(f"vertex {src} cannot reach the whole graph")
        row.setflags(write=False)
        with self._lock:
            self._cache[src] = row
            self._cache.move_to_end(src)
            while len(self._cache) > self._cache_size:
                self._cache.popitem(last=False)
        return row

    def point_distance(self, a: PointRef, b: PointRef) -> float:
        if not _is_index(a) or not _is_index(b):
            raise InvalidInputError("graph backend points are vertex ids, not coordinates")
        ai, bi = self._check_index(a), self._check_index(b)
        # Prefer whichever endpoint already has a cached row.
        if bi in self._cache and ai not in self._cache:
            ai, bi = bi, ai
        return float(self.distances_from(ai)[bi])


class MatrixBackend(MetricBackend):
    """Metric given by an explicit symmetric nonnegative distance table."""

    kind = "matrix"

    def __init__(self, matrix: np.ndarray, validate_triangle: bool = True):
        m = np.array(matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise InvalidInputError("distance table must be square and non-empty")
        scale = float(m.max(initial=0.0))
        tol = MATRIX_VALIDATION_RTOL * max(scale, 1.0)
        if np.any(m < 0) or not np.all(np.isfinite(m)):
            raise InvalidInputError("distances must be finite and nonnegative")
        if np.any(np.abs(np.diag(m)) > tol):
            raise InvalidInputError("diagonal of a distance table must be zero")
        if np.any(np.abs(m - m.T) > tol):
            raise InvalidInputError("distance table must be symmetric")
        if validate_triangle:
            for k in range(m.shape[0]):
                if np.any(m > m[:, [k]] + m[[k], :] + tol):
                    raise InvalidInputError(
                        f"triangle inequality violated through point {k}"
                    )
        self.matrix = m
        self.matrix.setflags(write=False)

    @property
    def n_points(self) -> int:
        return self.matrix.shape[0]

    def distances_from(self, ref: PointRef) -> np.ndarray:
        if not _is_index(ref):
            raise InvalidInputError("matrix backend points are row ids, not coordinates")
        return self.matrix[self._check_index(ref)]

    def point_distance(self, a: PointRef, b: PointRef) -> float:
        if not _is_index(a) or not _is_index(b):
            raise InvalidInputError("matrix backend points are row ids, not coordinates")
        return float(self.matrix[self._check_index(a), self._check_index(b)])


def distance(backend: MetricBackend, a: PointRef, b: PointRef) -> float:
    """Metric distance between two point references."""
    return backend.point_distance(a, b)


def distance_to_set(backend: MetricBackend, x: PointRef, centers) -> tuple[float, int]:
    """Distance from ``x`` to the nearest member of ``centers``.

    Returns ``(distance, winner)`` where ``winner`` is the position of the
    nearest center in ``centers``; ties go to the lowest position.
    """
    best, winner = np.inf, -1
    for i, c in enumerate(centers):
        d = backend.point_distance(x, c)
        if d < best:
            best, winner = d, i
    if winner < 0:
        raise InvalidInputError("center set is empty")
    return best, winner


# ---------------------------------------------------------------------------
# Ingestion / emission.
# ---------------------------------------------------------------------------

def _has_header(first_line: str, delimiter: str = ",") -> bool:
    for tok in first_line.strip().split(delimiter):
        try:
            float(tok)
        except ValueError:
            return True
    return False


def load_points_csv(path) -> EuclideanBackend:
    """Read points from CSV, one row per point, numeric columns, optional header."""
    with open(path) as fh:
        first = fh.readline()
        if not first.strip():
            raise InvalidInputError(f"{path}: empty file")
        skip = 1 if _has_header(first) else 0
    data = np.loadtxt(path, delimiter=",", skiprows=skip, ndmin=2)
    return EuclideanBackend(data)


def load_edge_list(path) -> GraphBackend:
    """Read an undirected graph from whitespace-separated ``u v w`` lines."""
    data = np.loadtxt(path, ndmin=2)
    if data.shape[1] != 3:
        raise InvalidInputError(f"{path}: expected three columns 'u v w'")
    u = data[:, 0].astype(int)
    v = data[:, 1].astype(int)
    w = data[:, 2]
    if np.any(w <= 0):
        raise InvalidInputError(f"{path}: edge weights must be positive")
    n = int(max(u.max(), v.max())) + 1
    return GraphBackend(n, zip(u, v, w))


def load_matrix_csv(path, validate_triangle: bool = True) -> MatrixBackend:
    """Read an explicit n-by-n distance table from CSV."""
    with open(path) as fh:
        first = fh.readline()
        skip = 1 if _has_header(first) else 0
    data = np.loadtxt(path, delimiter=",", skiprows=skip, ndmin=2)
    return MatrixBackend(data, validate_triangle=validate_triangle)


def write_points_csv(backend: EuclideanBackend, path) -> None:
    np.savetxt(path, backend.points, delimiter=",", fmt="%.17g")


def write_edge_list(backend: GraphBackend, path) -> None:
    coo = backend._adj.tocoo()
    with open(path, "w") as fh:
        for u, v, w in zip(coo.row, coo.col, coo.data):
            if u < v:
                fh.write(f"{u} {v} {float(w)!r}\n")


def write_matrix_csv(backend: MatrixBackend, path) -> None:
    np.savetxt(path, backend.matrix, delimiter=",", fmt="%.17g")
