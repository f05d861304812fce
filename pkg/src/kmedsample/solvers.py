"""Local-search k-median, with an optional balance constraint.

The solver performs best-improvement single swaps: every (center, candidate)
exchange is scored, and the cheapest admissible one is taken while the
relative improvement exceeds the threshold ``delta``.  Candidate centers are
input points (discrete k-median).  With ``beta_min > 0`` a swap is admissible
only if the swapped solution keeps every nearest-assignment cluster at least
``beta_min * n / k`` large, which searches over balanced center sets without
relaxing the nearest-assignment rule.

Inputs may be a plain dataset or a weighted sample; weighted inputs optimize
the weighted objective sum(w_x * dist(x, C)).  Everything is deterministic
given the seed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .core import CenterSet, Clustering, Dataset, cluster_ids, nearest_two
from .errors import InfeasibleConstraintError, InvalidInputError
from .sampling import WeightedSample

__all__ = [
    "LocalSearchConfig",
    "LocalSearchResult",
    "dsample_init",
    "local_search",
    "weighted_cost",
    "cluster_sample",
    "sample_balancedness",
]

SolverInput = Union[Dataset, WeightedSample]

# Initialization attempts before declaring a balance-constrained start
# infeasible: distance-proportional seeding first, then uniform k-subsets
# (distance seeding chases outliers, which a tight balance bound forbids).
INIT_DSAMPLE_RETRIES = 10
INIT_UNIFORM_RETRIES = 20
INIT_RETRIES = INIT_DSAMPLE_RETRIES + INIT_UNIFORM_RETRIES


def _as_multiset(X: SolverInput):
    """Normalize solver input to ``(dataset, ids, weights)``."""
    if isinstance(X, WeightedSample):
        return X.dataset, X.ids, X.weights
    if isinstance(X, Dataset):
        return X, np.arange(X.n), np.ones(X.n)
    raise InvalidInputError(f"expected Dataset or WeightedSample, got {type(X).__name__}")


def _distinct_among(dataset: Dataset, ids: np.ndarray) -> np.ndarray:
    """Dedupe a set of point ids by position, keeping the lowest id each."""
    ids = np.unique(ids)
    if not dataset.is_euclidean:
        return ids
    _, first = np.unique(dataset.coords()[ids], axis=0, return_index=True)
    return np.sort(ids[first])


def _multiset_balance(dataset: Dataset, centers: Sequence, ids: np.ndarray, k: int) -> float:
    d1, a1, _, _ = nearest_two(dataset, centers, ids=ids)
    sizes = np.bincount(a1, minlength=k)
    return float(sizes.min() * k / ids.shape[0])


def dsample_init(X: SolverInput, k: int, seed: int) -> CenterSet:
    """Distance-proportional seeding over (weighted) input points.

    The first center is drawn with probability proportional to weight, each
    subsequent one proportional to weight times the distance to the centers
    chosen so far.  The k chosen centers always occupy distinct positions.
    """
    dataset, ids, weights = _as_multiset(X)
    if k < 1:
        raise InvalidInputError("k must be at least 1")
    if _distinct_among(dataset, ids).shape[0] < k:
        raise InvalidInputError(f"input has fewer than {k} distinct points")
    rng = np.random.default_rng(seed)
    probs = weights / weights.sum()
    chosen = [int(ids[rng.choice(ids.shape[0], p=probs)])]
    d_cur = dataset.backend.distances_to(chosen[0], ids)
    for _ in range(1, k):
        mass = weights * d_cur
        total = mass.sum()
        # Positive mass is guaranteed while distinct positions remain.
        pick = int(ids[rng.choice(ids.shape[0], p=mass / total)])
        chosen.append(pick)
        d_cur = np.minimum(d_cur, dataset.backend.distances_to(pick, ids))
    return CenterSet.from_indices(chosen)


@dataclass(frozen=True)
class LocalSearchConfig:
    """Knobs of the swap search.

    ``max_iterations`` defaults to ``10 * k * log2(n)``; ``candidates`` of
    None means every distinct input point is a swap candidate; ``beta_min``
    of 0 runs the unconstrained problem.
    """

    k: int
    max_iterations: Optional[int] = None
    delta: float = 1e-4
    candidates: Optional[Sequence[int]] = None
    seed: int = 0
    beta_min: float = 0.0

    def __post_init__(self):
        if self.k < 1:
            raise InvalidInputError("k must be at least 1")
        if self.delta < 0:
            raise InvalidInputError("improvement threshold must be nonnegative")
        if not (0.0 <= self.beta_min <= 1.0):
            raise InvalidInputError("beta_min must lie in [0, 1]")


@dataclass(frozen=True, eq=False)
class LocalSearchResult:
    centers: CenterSet
    clustering: Clustering
    cost_trace: tuple
    swaps: int

    @property
    def cost(self) -> float:
        return self.clustering.total_cost


def local_search(
    X: SolverInput, cfg: LocalSearchConfig, init: Optional[CenterSet] = None
) -> LocalSearchResult:
    """Best-improvement single-swap local search.

    Swaps are scored against the weighted objective; the best strict
    improvement beyond ``cfg.delta`` (relative) is applied each round until
    none remains or ``max_iterations`` is hit.  The returned cost never
    exceeds the initialization's.
    """
    dataset, ids, weights = _as_multiset(X)
    k = cfg.k
    npts = ids.shape[0]
    pool = (
        np.asarray(cfg.candidates, dtype=int)
        if cfg.candidates is not None
        else _distinct_among(dataset, ids)
    )
    if pool.shape[0] < k:
        raise InvalidInputError("candidate pool is smaller than k")

    if init is not None:
        if len(init) != k:
            raise InvalidInputError(f"initialization has {len(init)} centers, expected {k}")
        centers = list(init.centers)
        if cfg.beta_min > 0 and _multiset_balance(dataset, centers, ids, k) < cfg.beta_min:
            raise InfeasibleConstraintError(
                "provided initialization violates the balance constraint"
            )
    else:
        centers = None
        for attempt in range(INIT_RETRIES):
            if attempt < INIT_DSAMPLE_RETRIES:
                trial = list(dsample_init(X, k, cfg.seed + attempt).centers)
            else:
                rng = np.random.default_rng(cfg.seed + attempt)
                trial = [int(c) for c in rng.choice(pool, size=k, replace=False)]
            if cfg.beta_min <= 0 or _multiset_balance(dataset, trial, ids, k) >= cfg.beta_min:
                centers = trial
                break
        if centers is None:
            raise InfeasibleConstraintError(
                f"no balance-feasible initialization found after {INIT_RETRIES} attempts"
            )

    max_iter = cfg.max_iterations
    if max_iter is None:
        max_iter = int(math.ceil(10 * k * math.log2(max(npts, 2))))

    d1, a1, d2, _ = nearest_two(dataset, centers, ids=ids)
    cur_cost = float(np.dot(weights, d1))
    trace = [cur_cost]
    swaps = 0

    center_ids = {int(c) for c in centers if isinstance(c, (int, np.integer))}
    for _ in range(max_iter):
        if cur_cost <= 0.0:
            break
        # drop[i, j]: distance of point j once center i is removed (d2 is
        # +inf when k == 1, so dropping the only center forces the swap-in).
        drop = np.tile(d1, (k, 1))
        drop[a1, np.arange(npts)] = d2
        threshold = cur_cost * (1.0 - cfg.delta)

        swap_costs = np.empty((pool.shape[0], k))
        for ci, cand in enumerate(pool):
            if int(cand) in center_ids:
                swap_costs[ci, :] = np.inf
                continue
            dc = dataset.backend.distances_to(int(cand), ids)
            swap_costs[ci, :] = np.minimum(drop, dc[None, :]) @ weights

        best = None
        if cfg.beta_min <= 0:
            flat = int(np.argmin(swap_costs))
            ci, slot = divmod(flat, k)
            if swap_costs[ci, slot] < threshold:
                best = (ci, slot)
        else:
            # Walk improving swaps from cheapest up; take the first one whose
            # swapped solution still satisfies the balance constraint.
            order = np.argsort(swap_costs, axis=None, kind="stable")
            for flat in order:
                ci, slot = divmod(int(flat), k)
                if not swap_costs[ci, slot] < threshold:
                    break
                trial = list(centers)
                trial[slot] = int(pool[ci])
                if _multiset_balance(dataset, trial, ids, k) >= cfg.beta_min:
                    best = (ci, slot)
                    break

        if best is None:
            break
        ci, slot = best
        old = centers[slot]
        if isinstance(old, (int, np.integer)):
            center_ids.discard(int(old))
        centers[slot] = int(pool[ci])
        center_ids.add(int(pool[ci]))
        d1, a1, d2, _ = nearest_two(dataset, centers, ids=ids)
        cur_cost = float(np.dot(weights, d1))
        trace.append(cur_cost)
        swaps += 1

    final = CenterSet(centers)
    clustering = cluster_ids(dataset, final, ids=ids, weights=weights)
    return LocalSearchResult(
        centers=final, clustering=clustering, cost_trace=tuple(trace), swaps=swaps
    )


def weighted_cost(S: WeightedSample, C: CenterSet) -> float:
    """Weighted objective sum(w_x * dist(x, C)) over the sample's entries."""
    if S.size == 0:
        return 0.0
    d1, _, _, _ = nearest_two(S.dataset, C, ids=S.ids)
    return float(np.dot(S.weights, d1))


def cluster_sample(S: WeightedSample, C: CenterSet) -> Clustering:
    """Cluster the sample multiset; sizes count entries, cost is weighted."""
    return cluster_ids(S.dataset, C, ids=S.ids, weights=S.weights)


def sample_balancedness(S: WeightedSample, C: CenterSet) -> float:
    """Balance of ``C`` on the sample multiset (entry counts, not weights)."""
    cl = cluster_sample(S, C)
    return float(cl.cluster_sizes.min() * len(C) / S.size)
