import numpy as np
import pytest

from kmedsample import (
    CenterSet,
    Dataset,
    InvalidInputError,
    build_coreset,
    cost,
    sensitivities,
    weighted_cost,
)


def test_identical_points_degenerate_case():
    X = Dataset.from_points(np.zeros((8, 1)))
    prof = sensitivities(X, 1, seed=0)
    assert np.allclose(prof.s, 1.0 / 8)
    assert prof.total == pytest.approx(1.0)


def test_sensitivity_formula_injected_bicriteria():
    # X = {0, 1}, k=1, A={0}: s(0) = 0 + 1/2, s(1) = 1/1 + 1/2.
    X = Dataset.from_points([[0.0], [1.0]])
    prof = sensitivities(X, 1, bicriteria=CenterSet.from_indices([0]))
    assert prof.s.tolist() == [0.5, 1.5]
    assert prof.total == 2.0


def test_sensitivity_lower_bound():
    rng = np.random.default_rng(0)
    X = Dataset.from_points(rng.normal(size=(40, 2)))
    prof = sensitivities(X, 3, seed=1)
    assert np.all(prof.s >= 1.0 / X.n - 1e-15)
    assert prof.probabilities.sum() == pytest.approx(1.0, abs=1e-9)


def test_requires_enough_points():
    X = Dataset.from_points([[0.0], [1.0]])
    with pytest.raises(InvalidInputError):
        sensitivities(X, 3, seed=0)


def test_uniform_sensitivities_reduce_to_uniform_sampling():
    X = Dataset.from_points(np.zeros((10, 1)))
    S = build_coreset(X, 1, 5, seed=3)
    assert np.allclose(S.weights, X.n / 5)


def test_single_draw_weight():
    rng = np.random.default_rng(2)
    X = Dataset.from_points(rng.normal(size=(20, 1)))
    prof = sensitivities(X, 2, seed=0)
    S = build_coreset(X, 2, 1, seed=5, profile=prof)
    pid = int(S.ids[0])
    assert S.weights[0] == pytest.approx(1.0 / prof.probabilities[pid])


def test_unbiasedness_monte_carlo():
    # Mean of the weighted objective over many draws approaches the true
    # objective for a fixed center set.
    rng = np.random.default_rng(9)
    X = Dataset.from_points(rng.uniform(0, 10, size=(100, 2)))
    C = CenterSet.from_indices([4, 40])
    true_cost = cost(X, C)
    prof = sensitivities(X, 2, seed=0)
    draws = 10_000
    vals = np.empty(draws)
    for i in range(draws):
        S = build_coreset(X, 2, 25, seed=i, profile=prof)
        vals[i] = weighted_cost(S, C)
    assert abs(vals.mean() - true_cost) / true_cost < 0.02


def test_weight_sum_concentrates_around_n():
    rng = np.random.default_rng(4)
    X = Dataset.from_points(rng.uniform(0, 10, size=(60, 1)))
    prof = sensitivities(X, 2, seed=1)
    sums = [build_coreset(X, 2, 40, seed=i, profile=prof).weights.sum() for i in range(300)]
    assert abs(np.mean(sums) - X.n) / X.n < 0.05


def test_coreset_deterministic_per_seed():
    rng = np.random.default_rng(11)
    X = Dataset.from_points(rng.normal(size=(30, 2)))
    a = build_coreset(X, 3, 10, seed=6)
    b = build_coreset(X, 3, 10, seed=6)
    assert np.array_equal(a.ids, b.ids) and np.array_equal(a.weights, b.weights)
