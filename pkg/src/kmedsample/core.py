"""Datasets, center sets, clustering cost, and balancedness.

The objective throughout is k-median: the sum over data points of the
distance to the nearest chosen center.  Balancedness of a solution is the
size of its smallest induced cluster relative to the average cluster size
``n/k``; a value of 1 means perfectly balanced, and a solution whose every
cluster holds at least ``beta * n / k`` points is called beta-balanced.

Nearest-center ties are broken toward the lowest position in the center
list, everywhere, so clusterings are reproducible.  All types are immutable
after construction and the functions here are pure.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import InvalidInputError, UndefinedErrorMeasure
from .metric import EuclideanBackend, MetricBackend, PointRef, _is_index

__all__ = [
    "Dataset",
    "CenterSet",
    "Clustering",
    "cost",
    "cluster",
    "solution_balancedness",
    "dataset_balancedness",
    "relative_error",
]


@dataclass(frozen=True, eq=False)
class Dataset:
    """An indexed point collection bound to a metric backend.

    Point ids are ``0..n-1`` and map directly onto backend indices.  The
    optional ``descriptor`` records how a generated instance was built.
    """

    backend: MetricBackend
    n: int = 0
    descriptor: object = None

    def __post_init__(self):
        object.__setattr__(self, "n", self.backend.n_points)
        if self.n < 1:
            raise InvalidInputError("dataset must contain at least one point")

    @classmethod
    def from_points(cls, points, descriptor=None) -> "Dataset":
        return cls(EuclideanBackend(np.asarray(points)), descriptor=descriptor)

    @property
    def is_euclidean(self) -> bool:
        return self.backend.kind == "euclidean"

    def coords(self) -> np.ndarray:
        if not self.is_euclidean:
            raise InvalidInputError("only Euclidean datasets expose coordinates")
        return self.backend.points

    def distinct_position_ids(self) -> np.ndarray:
        """Lowest point id of each distinct position.

        Graph and matrix points are identified by their index; Euclidean
        points with identical coordinates collapse to the first occurrence.
        """
        if not self.is_euclidean:
            return np.arange(self.n)
        _, first = np.unique(self.coords(), axis=0, return_index=True)
        return np.sort(first)


class CenterSet:
    """An ordered list of k candidate centers.

    Entries are dataset point ids, or free coordinate vectors on Euclidean
    backends.  Duplicate ids (and duplicate free vectors) are rejected;
    helpers that build center sets from data dedupe by position first.
    """

    def __init__(self, centers: Sequence[PointRef]):
        centers = list(centers)
        if len(centers) < 1:
            raise InvalidInputError("center set must contain at least one center")
        seen_ids = set()
        frees = []
        norm = []
        for c in centers:
            if _is_index(c):
                i = int(c)
                if i in seen_ids:
                    raise InvalidInputError(f"duplicate center index {i}")
                seen_ids.add(i)
                norm.append(i)
            else:
                v = np.array(c, dtype=np.float64).ravel()
                v.setflags(write=False)
                for u in frees:
                    if u.shape == v.shape and np.array_equal(u, v):
                        raise InvalidInputError("duplicate free-coordinate center")
                frees.append(v)
                norm.append(v)
        self.centers = tuple(norm)

    @classmethod
    def from_indices(cls, ids) -> "CenterSet":
        return cls([int(i) for i in ids])

    @property
    def k(self) -> int:
        return len(self.centers)

    @property
    def all_indices(self) -> bool:
        return all(_is_index(c) for c in self.centers)

    def indices(self) -> np.ndarray:
        if not self.all_indices:
            raise InvalidInputError("center set contains free-coordinate centers")
        return np.array([int(c) for c in self.centers], dtype=int)

    def __len__(self) -> int:
        return len(self.centers)

    def __iter__(self) -> Iterator[PointRef]:
        return iter(self.centers)

    def __getitem__(self, i):
        return self.centers[i]

    def __repr__(self) -> str:
        parts = [str(int(c)) if _is_index(c) else np.array2string(c) for c in self.centers]
        return "CenterSet([" + ", ".join(parts) + "])"


@dataclass(frozen=True, eq=False)
class Clustering:
    """Nearest-center assignment with per-cluster sizes and total cost.

    ``assignment[i]`` is the position in the center list of the nearest
    center to point ``i`` (lowest position on ties); ``cluster_sizes`` sums
    to the number of clustered points.
    """

    assignment: np.ndarray
    cluster_sizes: np.ndarray
    total_cost: float
    k: int

    @property
    def has_empty_cluster(self) -> bool:
        return bool(np.any(self.cluster_sizes == 0))


def nearest_two(X: Dataset, centers: Sequence[PointRef], ids: Optional[np.ndarray] = None):
    """Distances/positions of the nearest and second-nearest center.

    Streams one backend row per center, so memory stays O(points).  Returns
    ``(d1, a1, d2, a2)``; with a single center ``d2`` is +inf and ``a2`` -1.
    Ties resolve to the lowest center position, matching ``cluster``.
    """
    rows_idx = None if ids is None else np.asarray(ids, dtype=int)
    npts = X.n if rows_idx is None else rows_idx.shape[0]
    d1 = np.full(npts, np.inf)
    d2 = np.full(npts, np.inf)
    a1 = np.full(npts, -1, dtype=int)
    a2 = np.full(npts, -1, dtype=int)
    for pos, c in enumerate(centers):
        if rows_idx is None:
            d = X.backend.distances_from(c)
        else:
            d = X.backend.distances_to(c, rows_idx)
        better = d < d1
        second = ~better & (d < d2)
        d2[better] = d1[better]
        a2[better] = a1[better]
        d1[better] = d[better]
        a1[better] = pos
        d2[second] = d[second]
        a2[second] = pos
    return d1, a1, d2, a2


def cluster_ids(
    X: Dataset,
    C: CenterSet,
    ids: Optional[np.ndarray] = None,
    weights: Optional[np.ndarray] = None,
) -> Clustering:
    """Cluster an id multiset of ``X`` under ``C``.

    ``ids`` defaults to every point once.  ``cluster_sizes`` counts entries
    (not weights); ``total_cost`` is weighted when weights are given.
    """
    d1, a1, _, _ = nearest_two(X, C, ids=ids)
    sizes = np.bincount(a1, minlength=len(C))
    if weights is None:
        total = float(d1.sum())
    else:
        total = float(np.dot(np.asarray(weights, dtype=np.float64), d1))
    return Clustering(assignment=a1, cluster_sizes=sizes, total_cost=total, k=len(C))


def cost(X: Dataset, C: CenterSet) -> float:
    """Exact k-median objective: sum of nearest-center distances."""
    d1, _, _, _ = nearest_two(X, C)
    return float(d1.sum())


def cluster(X: Dataset, C: CenterSet) -> Clustering:
    """Assign every point of ``X`` to its nearest center in ``C``."""
    return cluster_ids(X, C)


def solution_balancedness(X: Dataset, C: CenterSet) -> float:
    """Smallest cluster size of ``C`` on ``X`` relative to ``n/k``.

    Returns the raw ratio ``min_i |X_i| * k / n`` without capping; it is 0
    exactly when some cluster is empty, and may slightly exceed 1 when n is
    not divisible by k.
    """
    cl = cluster(X, C)
    return float(cl.cluster_sizes.min() * len(C) / X.n)


def dataset_balancedness(X: Dataset, k: int, opt: CenterSet) -> float:
    """Balancedness of ``X`` given an optimal (or proxy-optimal) k-center solution.

    The caller is responsible for ``opt`` being optimal; with multiple optima
    this reports the balance of the solution handed in.
    """
    if len(opt) != k:
        raise InvalidInputError(f"expected a {k}-center solution, got {len(opt)}")
    return solution_balancedness(X, opt)


def relative_error(X: Dataset, C: CenterSet, C_apx: CenterSet) -> float:
    """Signed relative error of ``C`` against the baseline solution ``C_apx``.

    Negative values mean ``C`` beats the baseline.  Raises when the baseline
    cost is zero, where the measure is undefined.
    """
    base = cost(X, C_apx)
    if base <= 0.0:
        raise UndefinedErrorMeasure("baseline solution has zero cost")
    return (cost(X, C) - base) / base
