"""Walkthrough: local search, the balance constraint, and the exact oracles.

The swap solver is the workhorse for real sizes; the brute-force and 1D
dynamic-programming oracles pin down exact optima at desk scale, which is
what every probabilistic claim in the package is tested against.
"""
import numpy as np

from kmedsample import (
    Dataset,
    LocalSearchConfig,
    brute_force_kmedian,
    dp_1d_kmedian,
    dsample_init,
    local_search,
    solution_balancedness,
)

rng = np.random.default_rng(0)
X = Dataset.from_points(np.sort(rng.uniform(0, 100, size=(60, 1)), axis=0))

print("=== Exact oracles agree ===")
for k in (2, 3, 4):
    bf = brute_force_kmedian(X, k)
    dp = dp_1d_kmedian(X, k)
    print(f"k={k}: brute force {bf.cost:.4f}   1D DP {dp.cost:.4f}")

print("\n=== Local search starts from distance-proportional seeding ===")
k = 3
init = dsample_init(X, k, seed=1)
out = local_search(X, LocalSearchConfig(k=k, seed=1), init=init)
opt = dp_1d_kmedian(X, k)
print("cost trace:", [round(c, 2) for c in out.cost_trace])
print(f"final {out.cost:.4f} vs optimum {opt.cost:.4f} "
      f"({out.cost / opt.cost:.4f}x, {out.swaps} swaps)")

print("\n=== Balance-constrained search ===")
# One far outlier tempts the solver into a singleton cluster.
pts = np.concatenate([np.arange(12, dtype=float), [500.0]]).reshape(-1, 1)
Y = Dataset.from_points(pts)
free = local_search(Y, LocalSearchConfig(k=2, seed=0))
print(
    f"unconstrained: cost {free.cost:.1f}, balance "
    f"{solution_balancedness(Y, free.centers):.3f} (outlier gets its own cluster)"
)
fair = local_search(Y, LocalSearchConfig(k=2, seed=0, beta_min=0.6))
print(
    f"beta_min=0.6 : cost {fair.cost:.1f}, balance "
    f"{solution_balancedness(Y, fair.centers):.3f} (every cluster holds its share)"
)

print("\n=== Constrained exact optimum for reference ===")
res = brute_force_kmedian(Y, 2, beta_min=0.6)
print(f"exact balanced optimum: cost {res.cost:.1f}, balance {res.max_balance:.3f}")
