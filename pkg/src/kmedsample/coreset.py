"""Importance-sampling (sensitivity) coreset baseline.

Sensitivities follow the standard bicriteria recipe: run distance-seeded
initialization plus a few local-search rounds to get a k-center solution A,
then score each point by its share of A's cost plus the inverse size of its
cluster under A:

    s(x) = dist(x, A) / cost(X, A) + 1 / |cluster_A(x)|

(when cost(X, A) is zero only the cluster term remains).  A coreset of size
m draws m points i.i.d. with probability p(x) = s(x) / sum(s) and weights
each drawn point 1 / (m * p(x)), making the weighted objective an unbiased
estimator of the true objective for every fixed center set.

On large datasets the local-search refinement runs on a bounded uniform
subsample so construction time stays linear; the sensitivities themselves
are always computed against the full dataset.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import CenterSet, Dataset, nearest_two
from .errors import InvalidInputError
from .sampling import WeightedSample, uniform_sample
from .solvers import LocalSearchConfig, dsample_init, local_search

__all__ = ["SensitivityProfile", "sensitivities", "build_coreset"]

# Above this size the bicriteria refinement runs on a uniform subsample.
REFINE_SUBSAMPLE_CAP = 2048
BICRITERIA_LS_ROUNDS = 5


@dataclass(frozen=True, eq=False)
class SensitivityProfile:
    """Per-point sensitivity upper bounds and the bicriteria solution behind them."""

    bicriteria: CenterSet
    s: np.ndarray
    total: float

    @property
    def probabilities(self) -> np.ndarray:
        return self.s / self.total


def sensitivities(
    X: Dataset, k: int, seed: int = 0, bicriteria: Optional[CenterSet] = None
) -> SensitivityProfile:
    """Compute sensitivity scores for every point of ``X``.

    A precomputed ``bicriteria`` solution skips the internal construction,
    which is handy for tests that pin A explicitly.
    """
    if X.n < k:
        raise InvalidInputError(f"need at least k={k} points, dataset has {X.n}")
    if bicriteria is None:
        A0 = dsample_init(X, k, seed)
        if X.n <= REFINE_SUBSAMPLE_CAP:
            refine_on = X
        else:
            refine_on = uniform_sample(X, REFINE_SUBSAMPLE_CAP, seed + 1)
        try:
            result = local_search(
                refine_on,
                LocalSearchConfig(k=k, max_iterations=BICRITERIA_LS_ROUNDS, seed=seed),
                init=A0,
            )
            bicriteria = result.centers
        except InvalidInputError:
            # Subsample can hold fewer than k distinct points; A0 is enough.
            bicriteria = A0

    d1, a1, _, _ = nearest_two(X, bicriteria)
    sizes = np.bincount(a1, minlength=len(bicriteria))
    if np.any(sizes == 0):
        raise InvalidInputError("bicriteria solution induces an empty cluster")
    total_cost = float(d1.sum())
    inv_size = 1.0 / sizes[a1]
    if total_cost <= 0.0:
        s = inv_size
    else:
        s = d1 / total_cost + inv_size
    return SensitivityProfile(bicriteria=bicriteria, s=s, total=float(s.sum()))


def build_coreset(
    X: Dataset,
    k: int,
    m: int,
    seed: int = 0,
    profile: Optional[SensitivityProfile] = None,
) -> WeightedSample:
    """Draw an m-point importance-sampling coreset of ``X``.

    Passing a precomputed ``profile`` reuses the sensitivity scores across
    draws; otherwise they are built here with the same seed.
    """
    if m < 1:
        raise InvalidInputError("coreset size must be at least 1")
    if profile is None:
        profile = sensitivities(X, k, seed)
    p = profile.probabilities
    rng = np.random.default_rng(seed)
    ids = rng.choice(X.n, size=m, replace=True, p=p)
    weights = 1.0 / (m * p[ids])
    return WeightedSample(X, ids, weights, origin="coreset", seed=seed)
