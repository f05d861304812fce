"""Checkers for the analysis events behind uniform-sampling guarantees.

Three diagnostics, all taking an optimal (or proxy-optimal) solution
``C_star`` whose cost stands in for the balanced optimum ``OPT``:

  * ``check_xi_s`` -- the well-behaved-sample event: the sample's average
    cost to ``C_star`` is at most ``lam * OPT / n``, and every cluster of
    ``C_star`` receives a sample share within a factor [1/2, 3/2] of its
    population share.

  * ``check_good_center`` -- whether a solution C is close to ``C_star`` in
    the aggregate sense (mean distance from each optimal center's location
    to C at most ``6 lam OPT / n``) and the pointwise sense (every
    |dist(x,C) - dist(x,C_star)| at most ``6 lam k OPT / (beta n)``).

  * ``verify_weak_coreset`` -- exhaustive desk-scale check that every
    (beta/2)-balanced, (1+eps)-near-optimal solution on the sample stays
    (1 + factor*eps)-near-optimal on the full dataset.  A sample on which no
    balanced candidate exists at all is reported as a failure: such a sample
    cannot host the balanced optimum and is useless for downstream solving.

Samples are treated as unweighted multisets throughout (uniform-sample
semantics); coreset weights are ignored here.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, fields
from itertools import combinations
from math import comb
from typing import Optional

import numpy as np

from .core import CenterSet, Dataset, cluster, nearest_two
from .errors import BudgetExceededError, InfeasibleConstraintError, InvalidInputError
from .sampling import WeightedSample

__all__ = [
    "DEFAULT_LAMBDA",
    "XiSReport",
    "check_xi_s",
    "GoodCenterReport",
    "check_good_center",
    "CostVectorDiag",
    "cost_vectors",
    "WeakCoresetReport",
    "verify_weak_coreset",
    "proof_factor",
]

DEFAULT_LAMBDA = 1001.0


class _JsonLineMixin:
    """Serialize a report as one JSON line (arrays become lists)."""

    def as_dict(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, np.ndarray):
                v = v.tolist()
            elif isinstance(v, CenterSet):
                v = [int(c) if isinstance(c, (int, np.integer)) else np.asarray(c).tolist()
                     for c in v]
            out[f.name] = v
        return out

    def json_line(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


@dataclass(frozen=True, eq=False)
class XiSReport(_JsonLineMixin):
    """Outcome of the well-behaved-sample event check."""

    lam: float
    beta: float
    avg_sample_cost: float
    avg_cost_bound: float
    condition1: bool
    expected_fractions: np.ndarray
    observed_fractions: np.ndarray
    condition2: bool

    @property
    def holds(self) -> bool:
        return self.condition1 and self.condition2


def check_xi_s(
    X: Dataset,
    S: WeightedSample,
    C_star: CenterSet,
    beta: float,
    lam: float = DEFAULT_LAMBDA,
) -> XiSReport:
    """Evaluate both sample conditions exactly against ``C_star``."""
    if S.size == 0:
        raise InvalidInputError("cannot check an empty sample")
    cl = cluster(X, C_star)
    opt = cl.total_cost
    d1, _, _, _ = nearest_two(X, C_star)
    avg_sample = float(d1[S.ids].mean())
    bound = lam * opt / X.n
    cond1 = avg_sample <= bound
    expected = cl.cluster_sizes / X.n
    observed = np.bincount(cl.assignment[S.ids], minlength=len(C_star)) / S.size
    cond2 = bool(np.all((observed >= 0.5 * expected) & (observed <= 1.5 * expected)))
    return XiSReport(
        lam=lam,
        beta=beta,
        avg_sample_cost=avg_sample,
        avg_cost_bound=bound,
        condition1=cond1,
        expected_fractions=expected,
        observed_fractions=observed,
        condition2=cond2,
    )


@dataclass(frozen=True, eq=False)
class GoodCenterReport(_JsonLineMixin):
    """Both closeness conditions with their measured sides."""

    aggregate_lhs: float
    aggregate_rhs: float
    condition_aggregate: bool
    pointwise_lhs: float
    pointwise_rhs: float
    condition_pointwise: bool

    @property
    def good(self) -> bool:
        return self.condition_aggregate and self.condition_pointwise


def check_good_center(
    X: Dataset,
    C: CenterSet,
    C_star: CenterSet,
    beta: float,
    lam: float = DEFAULT_LAMBDA,
) -> GoodCenterReport:
    """Check aggregate and pointwise closeness of ``C`` to ``C_star``."""
    if not (0.0 < beta <= 1.0):
        raise InvalidInputError("beta must lie in (0, 1]")
    cl_star = cluster(X, C_star)
    d_star, _, _, _ = nearest_two(X, C_star)
    opt = float(d_star.sum())
    k = len(C_star)

    # Aggregate: mean over x of dist(C_star(x), C) -- group by optimal cluster.
    dists = []
    for c_star in C_star:
        best = np.inf
        for c in C:
            d = X.backend.point_distance(c_star, c)
            best = min(best, d)
        dists.append(best)
    agg_lhs = float(np.dot(np.array(dists), cl_star.cluster_sizes) / X.n)
    agg_rhs = 6.0 * lam * opt / X.n

    d_C, _, _, _ = nearest_two(X, C)
    pw_lhs = float(np.abs(d_C - d_star).max())
    pw_rhs = 6.0 * lam * k * opt / (beta * X.n)

    return GoodCenterReport(
        aggregate_lhs=agg_lhs,
        aggregate_rhs=agg_rhs,
        condition_aggregate=agg_lhs <= agg_rhs,
        pointwise_lhs=pw_lhs,
        pointwise_rhs=pw_rhs,
        condition_pointwise=pw_lhs <= pw_rhs,
    )


@dataclass(frozen=True, eq=False)
class CostVectorDiag(_JsonLineMixin):
    """Per-point cost-difference vector and its error scale.

    ``v[x] = dist(x, C) - dist(x, C_star)``; ``err[x] = dist(x, C) +
    dist(x, C_star) + OPT/n`` (so ``err = v + 2 dist(.,C_star) + OPT/n``
    identically); ``gamma = 12 lam k OPT / (beta n)`` bounds ``|v|`` for
    solutions that pass the closeness check.
    """

    v: np.ndarray
    err: np.ndarray
    gamma: float

    @property
    def within_gamma(self) -> bool:
        return bool(np.abs(self.v).max() <= self.gamma)


def cost_vectors(
    X: Dataset,
    C: CenterSet,
    C_star: CenterSet,
    beta: float,
    lam: float = DEFAULT_LAMBDA,
) -> CostVectorDiag:
    d_C, _, _, _ = nearest_two(X, C)
    d_star, _, _, _ = nearest_two(X, C_star)
    opt = float(d_star.sum())
    v = d_C - d_star
    err = d_C + d_star + opt / X.n
    gamma = 12.0 * lam * len(C_star) * opt / (beta * X.n)
    return CostVectorDiag(v=v, err=err, gamma=gamma)


def proof_factor(lam: float = DEFAULT_LAMBDA) -> float:
    """The analysis' own (very loose) weak-coreset slack constant, 10*lam^2."""
    return 10.0 * lam * lam


@dataclass(frozen=True, eq=False)
class WeakCoresetReport(_JsonLineMixin):
    passes: bool
    reason: str
    witness: Optional[CenterSet]
    opt_x: float
    opt_s: Optional[float]
    candidates: int
    near_optimal_on_s: int


def verify_weak_coreset(
    X: Dataset,
    S: WeightedSample,
    k: int,
    beta: float,
    epsilon: float,
    factor: float = 3.0,
    budget: int = 10**7,
) -> WeakCoresetReport:
    """Exhaustively verify the weak-coreset property of ``S`` for ``X``.

    Candidate centers are the k-subsets of distinct dataset positions.  The
    check enumerates every candidate that is (beta/2)-balanced on the sample
    multiset and within (1+epsilon) of the best such candidate on S, and
    demands each one cost at most (1 + factor*epsilon) times the balanced
    optimum on X.  Returns a failing report with a witness on violation.
    """
    if S.size == 0:
        raise InvalidInputError("cannot verify an empty sample")
    if not (0.0 < beta <= 1.0):
        raise InvalidInputError("beta must lie in (0, 1]")
    pool = X.distinct_position_ids()
    k_eff = min(k, pool.shape[0])
    n_subsets = comb(pool.shape[0], k_eff)
    if n_subsets > budget:
        raise BudgetExceededError(
            f"C({pool.shape[0]},{k_eff}) = {n_subsets} subsets exceeds budget {budget}"
        )

    D_x = np.stack([X.backend.distances_from(int(c)) for c in pool])
    D_s = D_x[:, S.ids]
    m = S.size

    combos = list(combinations(range(pool.shape[0]), k_eff))
    cost_x = np.empty(len(combos))
    cost_s = np.empty(len(combos))
    bal_x = np.empty(len(combos))
    bal_s = np.empty(len(combos))
    for idx, combo in enumerate(combos):
        rows_x = D_x[list(combo)]
        rows_s = D_s[list(combo)]
        cost_x[idx] = rows_x.min(axis=0).sum()
        cost_s[idx] = rows_s.min(axis=0).sum()
        bal_x[idx] = np.bincount(rows_x.argmin(axis=0), minlength=k_eff).min() * k / X.n
        bal_s[idx] = np.bincount(rows_s.argmin(axis=0), minlength=k_eff).min() * k / m

    feasible_x = bal_x >= beta
    if not feasible_x.any():
        raise InfeasibleConstraintError(
            f"no candidate is {beta}-balanced on the dataset itself"
        )
    opt_x = float(cost_x[feasible_x].min())

    feasible_s = bal_s >= beta / 2
    if not feasible_s.any():
        return WeakCoresetReport(
            passes=False,
            reason="no candidate is beta/2-balanced on the sample",
            witness=None,
            opt_x=opt_x,
            opt_s=None,
            candidates=len(combos),
            near_optimal_on_s=0,
        )
    opt_s = float(cost_s[feasible_s].min())

    near = feasible_s & (cost_s <= (1.0 + epsilon) * opt_s * (1.0 + 1e-12))
    x_bound = (1.0 + factor * epsilon) * opt_x * (1.0 + 1e-12)
    for idx in np.nonzero(near)[0]:
        if cost_x[idx] > x_bound:
            witness = CenterSet.from_indices(pool[list(combos[idx])])
            return WeakCoresetReport(
                passes=False,
                reason=(
                    f"near-optimal-on-sample solution costs {cost_x[idx]:.6g} on the "
                    f"dataset, above the bound {x_bound:.6g}"
                ),
                witness=witness,
                opt_x=opt_x,
                opt_s=opt_s,
                candidates=len(combos),
                near_optimal_on_s=int(near.sum()),
            )
    return WeakCoresetReport(
        passes=True,
        reason="all near-optimal-on-sample solutions stay near-optimal on the dataset",
        witness=None,
        opt_x=opt_x,
        opt_s=opt_s,
        candidates=len(combos),
        near_optimal_on_s=int(near.sum()),
    )
