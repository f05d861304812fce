from itertools import combinations

import numpy as np
import pytest

from kmedsample import (
    CenterSet,
    Dataset,
    InfeasibleConstraintError,
    InvalidInputError,
    LocalSearchConfig,
    WeightedSample,
    cluster_sample,
    dsample_init,
    local_search,
    sample_balancedness,
    solution_balancedness,
    weighted_cost,
)


def test_dsample_all_distinct_chosen():
    X = Dataset.from_points([[0.0], [0.0], [5.0], [5.0], [9.0]])
    C = dsample_init(X, 3, seed=2)
    coords = sorted(float(X.coords()[i, 0]) for i in C.indices())
    assert coords == [0.0, 5.0, 9.0]


def test_dsample_requires_distinct_points():
    X = Dataset.from_points([[1.0], [1.0], [1.0]])
    with pytest.raises(InvalidInputError):
        dsample_init(X, 2, seed=0)


def test_dsample_k1_uniform_frequency():
    X = Dataset.from_points(np.arange(10, dtype=float).reshape(-1, 1))
    counts = np.zeros(10)
    trials = 10_000
    for seed in range(trials):
        counts[dsample_init(X, 1, seed).indices()[0]] += 1
    freq = counts / trials
    sigma = np.sqrt(0.1 * 0.9 / trials)
    assert np.all(np.abs(freq - 0.1) <= 3 * sigma + 1e-12)


def test_dsample_hits_both_far_clusters():
    # 4-point instance, separation ratio >= 100.  Exact probability that the
    # two seeds land in the same cluster, by direct enumeration:
    pts = [0.0, 1.0, 1000.0, 1001.0]
    p_same = 0.0
    for first in range(4):
        d = [abs(p - pts[first]) for p in pts]
        total = sum(d)
        same = {0, 1} if first in (0, 1) else {2, 3}
        p_same += 0.25 * sum(d[j] for j in same) / total
    assert 1.0 - p_same >= 0.995

    X = Dataset.from_points(np.array(pts).reshape(-1, 1))
    hits = 0
    trials = 1000
    for seed in range(trials):
        ids = set(int(i) for i in dsample_init(X, 2, seed).indices())
        if ids & {0, 1} and ids & {2, 3}:
            hits += 1
    assert hits / trials >= 0.99


def test_local_search_converges_to_optimum(four_points_1d):
    # Exhaustive oracle over all C(4,2)=6 center pairs.
    vals = [0.0, 1.0, 10.0, 11.0]
    best = min(
        sum(min(abs(x - vals[i]), abs(x - vals[j])) for x in vals)
        for i, j in combinations(range(4), 2)
    )
    assert best == 2.0
    cfg = LocalSearchConfig(k=2, seed=0)
    out = local_search(four_points_1d, cfg, init=CenterSet.from_indices([0, 1]))
    assert out.cost == best


def test_local_search_keeps_optimal_init(four_points_1d):
    cfg = LocalSearchConfig(k=2, seed=0)
    out = local_search(four_points_1d, cfg, init=CenterSet.from_indices([1, 2]))
    assert out.cost == 2.0
    assert out.swaps == 0


def test_local_search_trace_strictly_decreases():
    rng = np.random.default_rng(8)
    X = Dataset.from_points(rng.uniform(0, 100, size=(30, 2)))
    out = local_search(X, LocalSearchConfig(k=3, seed=1))
    trace = out.cost_trace
    assert all(b < a for a, b in zip(trace, trace[1:]))
    assert out.cost == trace[-1]
    assert out.cost <= trace[0]


def test_local_search_deterministic():
    rng = np.random.default_rng(5)
    X = Dataset.from_points(rng.uniform(0, 10, size=(25, 2)))
    cfg = LocalSearchConfig(k=3, seed=7)
    a = local_search(X, cfg)
    b = local_search(X, cfg)
    assert a.cost == b.cost
    assert [int(c) for c in a.centers.indices()] == [int(c) for c in b.centers.indices()]


def test_local_search_balance_constraint_holds():
    # One outlier: unconstrained local search parks a center on it, which
    # leaves a singleton cluster; beta_min forbids that.
    pts = [[0.0], [1.0], [2.0], [3.0], [4.0], [5.0], [100.0]]
    X = Dataset.from_points(pts)
    unconstrained = local_search(X, LocalSearchConfig(k=2, seed=0))
    assert solution_balancedness(X, unconstrained.centers) < 0.8
    constrained = local_search(X, LocalSearchConfig(k=2, seed=0, beta_min=0.8))
    assert solution_balancedness(X, constrained.centers) >= 0.8
    assert constrained.cost >= unconstrained.cost


def test_local_search_infeasible_constraint_raises():
    X = Dataset.from_points([[0.0], [0.0], [0.0], [9.0]])
    with pytest.raises(InfeasibleConstraintError):
        local_search(X, LocalSearchConfig(k=2, seed=0, beta_min=1.0))


def test_local_search_on_weighted_sample():
    X = Dataset.from_points([[0.0], [1.0], [10.0], [11.0]])
    S = WeightedSample(X, np.array([0, 0, 2, 3]), np.array([5.0, 5.0, 1.0, 1.0]), origin="coreset")
    out = local_search(S, LocalSearchConfig(k=2, seed=0))
    # Weighted objective: duplicated heavy point forces a center at 0.
    ids = sorted(int(i) for i in out.centers.indices())
    assert 0 in ids
    assert out.cost <= 1.0


def test_weighted_cost_examples():
    X = Dataset.from_points([[0.0], [3.0]])
    S_unit = WeightedSample(X, np.array([0, 1]), np.array([1.0, 1.0]))
    assert weighted_cost(S_unit, CenterSet.from_indices([0])) == 3.0
    S = WeightedSample(X, np.array([0, 1]), np.array([2.0, 1.0]), origin="coreset")
    assert weighted_cost(S, CenterSet.from_indices([0])) == 3.0  # 2*0 + 1*3
    S_single = WeightedSample(X, np.array([0]), np.array([2.0]), origin="coreset")
    assert weighted_cost(S_single, CenterSet.from_indices([0])) == 0.0


def test_sample_balancedness_counts_entries():
    X = Dataset.from_points([[0.0], [10.0]])
    S = WeightedSample(X, np.array([0, 0, 0, 1]), np.ones(4))
    C = CenterSet.from_indices([0, 1])
    assert sample_balancedness(S, C) == pytest.approx(1 * 2 / 4)
    cl = cluster_sample(S, C)
    assert cl.cluster_sizes.tolist() == [3, 1]


def test_max_iterations_caps_swaps():
    rng = np.random.default_rng(2)
    X = Dataset.from_points(rng.uniform(0, 100, size=(40, 1)))
    out = local_search(X, LocalSearchConfig(k=4, seed=3, max_iterations=1))
    assert out.swaps <= 1
