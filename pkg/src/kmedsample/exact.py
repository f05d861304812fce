"""Desk-scale exact oracles: brute-force and 1D dynamic-programming k-median.

Both solvers restrict centers to data points, which is lossless in 1D (a
median of any cluster is a data point) and is the discrete problem elsewhere.
``brute_force_kmedian`` enumerates every k-subset of distinct positions,
optionally filtered by a minimum balance, and is guarded by an enumeration
budget.  ``dp_1d_kmedian`` solves sorted 1D instances by interval partition
DP in O(n^2 k) and must agree with brute force wherever both run.

Returned optima are recomputed with the canonical cost function so the two
oracles (and any other cost evaluation in the package) agree bit-for-bit.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Optional

import numpy as np

from .core import CenterSet, Dataset, cluster_ids, nearest_two
from .errors import BudgetExceededError, InfeasibleConstraintError, InvalidInputError

__all__ = ["ExactResult", "brute_force_kmedian", "dp_1d_kmedian", "ENUMERATION_BUDGET"]

ENUMERATION_BUDGET = 10**7


@dataclass(frozen=True, eq=False)
class ExactResult:
    """Optimal cost with one optimal center set.

    ``all_optima`` lists every cost-tied optimum when requested (tiny
    instances only); ``max_balance`` is the best balancedness among the
    enumerated optima, or the balance of the single returned one.
    """

    cost: float
    centers: CenterSet
    max_balance: float
    all_optima: Optional[tuple] = None


def _evaluation_ids(X: Dataset, ids) -> np.ndarray:
    if ids is None:
        return np.arange(X.n)
    ids = np.asarray(ids, dtype=int)
    if ids.size == 0:
        raise InvalidInputError("evaluation multiset is empty")
    if ids.min() < 0 or ids.max() >= X.n:
        raise InvalidInputError("evaluation ids outside the dataset")
    return ids


def _distinct_pool(X: Dataset, candidate_ids) -> np.ndarray:
    pool = np.unique(np.asarray(candidate_ids, dtype=int))
    if not X.is_euclidean:
        return pool
    _, first = np.unique(X.coords()[pool], axis=0, return_index=True)
    return np.sort(pool[first])


def brute_force_kmedian(
    X: Dataset,
    k: int,
    beta_min: float = 0.0,
    ids=None,
    candidate_ids=None,
    collect_all: bool = False,
    budget: int = ENUMERATION_BUDGET,
) -> ExactResult:
    """Exhaustive discrete k-median over k-subsets of distinct positions.

    ``ids`` restricts the evaluated point multiset (defaults to the whole
    dataset, each point once); ``candidate_ids`` restricts the center pool
    (defaults to the evaluated points).  ``beta_min`` keeps only solutions
    whose every cluster holds at least ``beta_min * n / k`` of the evaluated
    points; k is capped at the number of distinct candidate positions, since
    duplicate centers never reduce the cost.
    """
    if k < 1:
        raise InvalidInputError("k must be at least 1")
    eval_ids = _evaluation_ids(X, ids)
    pool = _distinct_pool(X, eval_ids if candidate_ids is None else candidate_ids)
    k_eff = min(k, pool.shape[0])
    n_subsets = comb(pool.shape[0], k_eff)
    if n_subsets > budget:
        raise BudgetExceededError(
            f"C({pool.shape[0]},{k_eff}) = {n_subsets} subsets exceeds budget {budget}"
        )

    # Distance rows from every candidate to the evaluated multiset.
    D = np.stack([X.backend.distances_to(int(c), eval_ids) for c in pool])
    npts = eval_ids.shape[0]

    best_cost = np.inf
    best_combo = None
    optima: list[tuple] = []
    for combo in combinations(range(pool.shape[0]), k_eff):
        rows = D[list(combo)]
        d1 = rows.min(axis=0)
        if beta_min > 0 or collect_all:
            sizes = np.bincount(rows.argmin(axis=0), minlength=k_eff)
            bal = sizes.min() * k / npts
            if beta_min > 0 and bal < beta_min:
                continue
        c = float(d1.sum())
        if c < best_cost:
            best_cost = c
            best_combo = combo
            if collect_all:
                optima = [combo]
        elif collect_all and c == best_cost:
            optima.append(combo)

    if best_combo is None:
        raise InfeasibleConstraintError(
            f"no {k_eff}-subset satisfies balance >= {beta_min}"
        )

    def to_centers(combo) -> CenterSet:
        return CenterSet.from_indices(pool[list(combo)])

    best = to_centers(best_combo)
    if collect_all:
        all_sets = tuple(to_centers(c) for c in optima)
        balances = [
            _multiset_balance_of(X, cs, eval_ids, k) for cs in all_sets
        ]
        return ExactResult(
            cost=best_cost,
            centers=best,
            max_balance=max(balances),
            all_optima=all_sets,
        )
    return ExactResult(
        cost=best_cost,
        centers=best,
        max_balance=_multiset_balance_of(X, best, eval_ids, k),
    )


def _multiset_balance_of(X: Dataset, C: CenterSet, eval_ids: np.ndarray, k: int) -> float:
    cl = cluster_ids(X, C, ids=eval_ids)
    return float(cl.cluster_sizes.min() * k / eval_ids.shape[0])


def dp_1d_kmedian(X: Dataset, k: int, ids=None) -> ExactResult:
    """Exact 1D k-median by contiguous-interval dynamic programming.

    Sorted optimal clusters are contiguous, and each interval's optimal
    center is its (lower) median point; the DP picks the best partition into
    at most k intervals.  The reported cost is recomputed canonically from
    the chosen centers, so it matches ``brute_force_kmedian`` exactly.
    """
    if not (X.is_euclidean and X.backend.dim == 1):
        raise InvalidInputError("the DP oracle needs a 1-dimensional Euclidean dataset")
    if k < 1:
        raise InvalidInputError("k must be at least 1")
    eval_ids = _evaluation_ids(X, ids)
    values = X.coords()[eval_ids, 0]
    order = np.argsort(values, kind="stable")
    v = values[order]
    n = v.shape[0]
    k_eff = min(k, int(np.unique(v).shape[0]))

    pref = np.concatenate(([0.0], np.cumsum(v)))
    i_idx = np.arange(n)[:, None]
    j_idx = np.arange(n)[None, :]
    mid = (i_idx + j_idx) // 2
    # Sum of |v - v[mid]| over v[i..j], via prefix sums around the median.
    left = v[mid] * (mid - i_idx + 1) - (pref[mid + 1] - pref[i_idx])
    right = (pref[j_idx + 1] - pref[mid + 1]) - v[mid] * (j_idx - mid)
    interval = np.where(i_idx <= j_idx, left + right, np.inf)

    # dp[j] = optimal cost of covering v[0..j] with the current number of
    # intervals; choice[t][j] = start index of the last interval.
    dp = interval[0].copy()
    choices = []
    for _ in range(1, k_eff):
        cand = np.full((n, n), np.inf)
        starts = j_idx.T  # reuse as column of start indices
        prev = dp[:-1]
        # cand[s, j] = dp[s-1] + interval[s, j] for 1 <= s <= j.
        cand[1:, :] = prev[:, None] + interval[1:, :]
        cand = np.where(starts <= j_idx, cand, np.inf)
        choice = cand.argmin(axis=0)
        dp = cand[choice, np.arange(n)]
        choices.append(choice)

    # Backtrack interval boundaries, then place each interval's median.
    boundaries = []
    j = n - 1
    for choice in reversed(choices):
        s = int(choice[j])
        boundaries.append((s, j))
        j = s - 1
        if j < 0:
            break
    if j >= 0:
        boundaries.append((0, j))
    boundaries.reverse()

    center_entries = [(i + j) // 2 for i, j in boundaries]
    center_ids = [int(eval_ids[order[e]]) for e in center_entries]
    # Boundary duplicates can make two interval medians coincide; duplicates
    # are cost-free, so drop them.
    seen, dedup = set(), []
    for cid in center_ids:
        key = float(X.coords()[cid, 0])
        if key not in seen:
            seen.add(key)
            dedup.append(cid)
    centers = CenterSet.from_indices(dedup)
    canonical = _multiset_cost(X, centers, eval_ids)
    return ExactResult(
        cost=canonical,
        centers=centers,
        max_balance=_multiset_balance_of(X, centers, eval_ids, k),
    )


def _multiset_cost(X: Dataset, C: CenterSet, eval_ids: np.ndarray) -> float:
    d1, _, _, _ = nearest_two(X, C, ids=eval_ids)
    return float(d1.sum())
