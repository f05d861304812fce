"""Walkthrough: the two adversarial families behind the sampling lower bounds.

Family one (two locations): a cluster of floor(beta*n/2) points hides at
value t; a uniform sample of about 1/(2*beta) points usually misses it
entirely, so no algorithm reading that few points can place the second
center.  Family two (four locations): even a BALANCED dataset defeats the
naive plan "solve vanilla k-median on the sample": once the sample contains
a far outlier point, the sample optimum is forced to spend a center on it,
and that solution costs a constant factor more on the full dataset.
"""
import numpy as np

from kmedsample import brute_force_kmedian, cost, gen_lemma5, gen_thm3, uniform_sample

print("=== Family 1: hidden small cluster ===")
X = gen_thm3(n=1000, beta=0.02, t=1, seed=5)
m_t = X.descriptor.derived["t_cluster_size"]
print(f"n={X.n}, {m_t} points at t=1, rest at 0; optimal 2-median cost = "
      f"{brute_force_kmedian(X, 2).cost}")

in_t = np.zeros(X.n, dtype=bool)
in_t[list(X.descriptor.derived["t_cluster_ids"])] = True
l = 25
misses = sum(
    not in_t[uniform_sample(X, l, seed).ids].any() for seed in range(4000)
)
print(f"P(sample of {l} misses the t-cluster) ~= {misses / 4000:.3f} "
      f"(closed form {(1 - m_t / X.n) ** l:.3f})")
print("A sample that misses the cluster cannot tell t=1 from t=2, so any\n"
      "solver built on it fails half the time; more samples are unavoidable.")

print("\n=== Family 2: balanced, yet vanilla solving on the sample fails ===")
X5 = gen_lemma5(n=100, f=10, w=1e6, seed=5)
far = X5.descriptor.derived["far_count"]
opt = brute_force_kmedian(X5, 3)
vals = X5.coords()[:, 0]
print(f"groups: 100@0, 100@1, 100@w, {far}@w+f (w=1e6, f=10)")
print(f"optimal 3-median cost on X = {opt.cost} (centers at 0, 1, w)")

hits = qualifying = forced = 0
trials = 1000
worst = 0.0
for seed in range(trials):
    S = uniform_sample(X5, 10, seed)
    sv = vals[S.ids]
    if not (sv == 1e6 + 10).any():
        continue
    hits += 1
    if (sv == 0.0).any() and (sv == 1.0).any() and (sv == 1e6).any():
        qualifying += 1
        C_S = brute_force_kmedian(X5, 3, ids=S.ids).centers
        ratio = cost(X5, C_S) / opt.cost
        worst = max(worst, ratio)
        if ratio >= 1.009:
            forced += 1
print(f"far point sampled in {hits}/{trials} trials "
      f"(closed form {1 - (1 - far / X5.n) ** 10:.3f})")
print(f"of {qualifying} full-support samples with a far point, "
      f"{forced} forced an error >= 0.9% (worst ratio {worst:.3f})")
print("Morale: solve the BALANCED variant on the sample, not the vanilla one.")
