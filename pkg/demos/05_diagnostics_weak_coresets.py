"""Walkthrough: sample diagnostics and the weak-coreset property.

A uniform sample is a WEAK coreset when every balanced, near-optimal
solution computed on it stays near-optimal on the full dataset.  Two
checkable events explain when that happens: the sample is well-behaved
(its average cost to the optimum is controlled and every optimal cluster
gets its fair share of samples), and candidate solutions are close to the
optimum in aggregate and pointwise distance.
"""
import numpy as np

from kmedsample import (
    CenterSet,
    WeightedSample,
    check_good_center,
    check_xi_s,
    cost_vectors,
    dp_1d_kmedian,
    gen_gaussian_mixture,
    gen_thm3,
    uniform_sample,
    verify_weak_coreset,
)

X = gen_gaussian_mixture(k=4, per_cluster=100, d=1, separation=100.0, spread=1.0, seed=5)
opt = dp_1d_kmedian(X, 4)
print(f"balanced mixture: n={X.n}, optimal cost {opt.cost:.2f}")

print("\n=== Well-behaved-sample event ===")
S = uniform_sample(X, 200, seed=11)
rep = check_xi_s(X, S, opt.centers, beta=1.0)
print("average sample cost", round(rep.avg_sample_cost, 3), "<= bound", round(rep.avg_cost_bound, 1))
print("per-cluster sample shares:", np.round(rep.observed_fractions, 3).tolist())
print("event holds:", rep.holds)

print("\n=== Good-center closeness check ===")
perturbed = CenterSet.from_indices(
    [int(c) + 1 for c in opt.centers.indices()]  # shift each center one point over
)
good = check_good_center(X, perturbed, opt.centers, beta=1.0)
print(f"perturbed optimum: aggregate {good.aggregate_lhs:.3f} <= {good.aggregate_rhs:.1f}, "
      f"pointwise {good.pointwise_lhs:.3f} <= {good.pointwise_rhs:.1f} -> good={good.good}")
diag = cost_vectors(X, perturbed, opt.centers, beta=1.0)
print(f"cost-difference vector: |v|_inf = {np.abs(diag.v).max():.3f}, gamma = {diag.gamma:.1f}")

print("\n=== Weak-coreset verification, exhaustive at desk scale ===")
small = gen_gaussian_mixture(k=2, per_cluster=8, d=1, separation=100.0, spread=0.2, seed=3)
ok = uniform_sample(small, 12, seed=1)
repo = verify_weak_coreset(small, ok, k=2, beta=1.0, epsilon=0.2, factor=3.0)
print(f"balanced 16-point instance, 12-point sample: passes={repo.passes} "
      f"({repo.near_optimal_on_s} near-optimal candidates checked)")

bad_X = gen_thm3(n=20, beta=0.5, t=1, seed=1)
zero_ids = np.nonzero(bad_X.coords()[:, 0] == 0.0)[0][:10]
bad_S = WeightedSample(bad_X, zero_ids, np.ones(10))
repb = verify_weak_coreset(bad_X, bad_S, k=2, beta=0.5, epsilon=0.1)
print(f"adversarial sample missing the small cluster: passes={repb.passes}")
print("  reason:", repb.reason)
