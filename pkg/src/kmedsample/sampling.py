"""Uniform samplers and closed-form sample-size calculators.

``uniform_sample`` draws point ids i.i.d. with replacement; a fixed seed
makes the draw bit-reproducible.  ``sample_size`` evaluates the closed-form
sample sizes that make such a uniform sample a weak coreset for balanced
k-median, one formula per metric class:

  euclidean   k^2/(b e^3) * log2^2(k/(b e)) * log2^2(1/e)
  doubling    k^2/(b e^2) * ddim * log2(k/(b e))
  finite      k^2/(b e^2) * log2(|X|) * log2(k/(b e))
  treewidth   k^2/(b e^2) * tw * log2(k/(b e))

with b the balancedness, e the accuracy, every logarithm base 2 and clamped
below at 1.  The asymptotic constant is exposed as the multiplier ``c``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .core import Dataset
from .errors import InvalidInputError

__all__ = [
    "WeightedSample",
    "uniform_sample",
    "SampleSizeSpec",
    "sample_size",
    "sample_size_raw",
    "write_sample_csv",
    "load_sample_csv",
]

METRIC_CLASSES = ("euclidean", "doubling", "finite", "treewidth")


@dataclass(frozen=True, eq=False)
class WeightedSample:
    """Point ids with multiplicities/weights drawn from a dataset.

    Uniform samples carry unit weights and may repeat ids (sampling is with
    replacement); coreset samples carry inverse-probability weights.
    """

    dataset: Dataset
    ids: np.ndarray
    weights: np.ndarray
    origin: str = "uniform"
    seed: Optional[int] = None

    def __post_init__(self):
        # Copies: the arrays are frozen below and must not alias caller data.
        ids = np.array(self.ids, dtype=int)
        weights = np.array(self.weights, dtype=np.float64)
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "weights", weights)
        if ids.shape != weights.shape:
            raise InvalidInputError("ids and weights must have equal length")
        if ids.size and (ids.min() < 0 or ids.max() >= self.dataset.n):
            raise InvalidInputError("sample references point ids outside the dataset")
        if np.any(weights <= 0):
            raise InvalidInputError("sample weights must be positive")
        if self.origin == "uniform" and not np.all(weights == 1.0):
            raise InvalidInputError("uniform samples must have unit weights")
        ids.setflags(write=False)
        weights.setflags(write=False)

    @property
    def size(self) -> int:
        return int(self.ids.shape[0])

    def entries(self) -> Iterator[tuple[int, float]]:
        return zip(self.ids.tolist(), self.weights.tolist())

    def distinct_ids(self) -> np.ndarray:
        return np.unique(self.ids)


def uniform_sample(X: Dataset, m: int, seed: int) -> WeightedSample:
    """Draw ``m`` point ids i.i.d. uniformly with replacement."""
    if m < 0:
        raise InvalidInputError("sample size must be nonnegative")
    rng = np.random.default_rng(seed)
    ids = rng.integers(0, X.n, size=m)
    return WeightedSample(X, ids, np.ones(m), origin="uniform", seed=seed)


@dataclass(frozen=True)
class SampleSizeSpec:
    """Inputs to the closed-form sample-size formulas.

    ``class_param`` is the doubling dimension, the metric-space cardinality,
    or the treewidth, depending on ``metric_class``; it is unused for the
    Euclidean formula.
    """

    metric_class: str
    k: int
    beta: float
    epsilon: float
    class_param: Optional[float] = None
    c: float = 1.0

    def __post_init__(self):
        if self.metric_class not in METRIC_CLASSES:
            raise InvalidInputError(
                f"unsupported metric class {self.metric_class!r}; "
                f"expected one of {METRIC_CLASSES}"
            )
        if self.k < 1:
            raise InvalidInputError("k must be at least 1")
        if not (0.0 < self.beta <= 1.0):
            raise InvalidInputError("beta must lie in (0, 1]")
        if not (0.0 < self.epsilon < 1.0):
            raise InvalidInputError("epsilon must lie in (0, 1)")
        if self.c <= 0:
            raise InvalidInputError("constant multiplier c must be positive")
        if self.metric_class != "euclidean":
            if self.class_param is None:
                raise InvalidInputError(
                    f"metric class {self.metric_class!r} needs its class parameter"
                )
            if self.class_param < 1:
                raise InvalidInputError("class parameter must be at least 1")


def _log2_clamped(x: float) -> float:
    return max(1.0, math.log2(x))


def sample_size_raw(spec: SampleSizeSpec) -> float:
    """The formula value before rounding; exactly linear in ``spec.c``."""
    k, beta, eps = spec.k, spec.beta, spec.epsilon
    log_kbe = _log2_clamped(k / (beta * eps))
    if spec.metric_class == "euclidean":
        val = k * k / (beta * eps**3) * log_kbe**2 * _log2_clamped(1.0 / eps) ** 2
    elif spec.metric_class == "doubling":
        val = k * k / (beta * eps**2) * spec.class_param * log_kbe
    elif spec.metric_class == "finite":
        val = k * k / (beta * eps**2) * _log2_clamped(spec.class_param) * log_kbe
    else:  # treewidth
        val = k * k / (beta * eps**2) * spec.class_param * log_kbe
    return spec.c * val


def sample_size(spec: SampleSizeSpec) -> int:
    """Ceiling of the closed-form sample size for the given metric class."""
    return int(math.ceil(sample_size_raw(spec)))


# ---------------------------------------------------------------------------
# Serialization: CSV rows ``point_id,weight``.
# ---------------------------------------------------------------------------

def write_sample_csv(sample: WeightedSample, path) -> None:
    with open(path, "w") as fh:
        fh.write("point_id,weight\n")
        for pid, w in sample.entries():
            fh.write(f"{pid},{w!r}\n")


def load_sample_csv(X: Dataset, path, origin: str = "auto") -> WeightedSample:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.size == 0:
        return WeightedSample(X, np.array([], dtype=int), np.array([]), origin="uniform")
    weights = data[:, 1]
    if origin == "auto":
        origin = "uniform" if np.all(weights == 1.0) else "coreset"
    return WeightedSample(X, data[:, 0].astype(int), weights, origin=origin)
