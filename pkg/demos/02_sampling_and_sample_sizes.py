"""Walkthrough: uniform sampling and the closed-form sample-size formulas.

How many uniform samples make a reliable proxy for k-median?  The closed
forms depend on k, the dataset balancedness beta, the target accuracy
epsilon, and (outside the Euclidean case) a complexity parameter of the
metric: doubling dimension, metric cardinality, or treewidth.
"""
import numpy as np

from kmedsample import Dataset, SampleSizeSpec, sample_size, uniform_sample

print("=== Uniform sampling is reproducible and with replacement ===")
X = Dataset.from_points(np.arange(1000, dtype=float).reshape(-1, 1))
S = uniform_sample(X, 8, seed=7)
print("ids  :", S.ids.tolist())
print("again:", uniform_sample(X, 8, seed=7).ids.tolist(), "(same seed, same draw)")

print("\n=== Closed-form sample sizes ===")
print("Euclidean, varying accuracy (k=10, beta=0.5):")
for eps in (0.5, 0.3, 0.2, 0.1):
    m = sample_size(SampleSizeSpec("euclidean", k=10, beta=0.5, epsilon=eps))
    print(f"  eps={eps:>4}: m = {m:>12,}")

print("\nAll four metric classes at k=10, beta=0.5, eps=0.3:")
rows = [
    ("euclidean", None),
    ("doubling", 4),      # doubling dimension 4
    ("finite", 10**6),    # metric with a million points
    ("treewidth", 3),     # road-network-like graph
]
for metric_class, param in rows:
    m = sample_size(SampleSizeSpec(metric_class, k=10, beta=0.5, epsilon=0.3, class_param=param))
    extra = "" if param is None else f"(class parameter {param})"
    print(f"  {metric_class:<10} m = {m:>12,} {extra}")

print("\n=== The balancedness term matters ===")
print("Same Euclidean setting, shrinking beta:")
for beta in (1.0, 0.5, 0.1, 0.01):
    m = sample_size(SampleSizeSpec("euclidean", k=10, beta=beta, epsilon=0.3))
    print(f"  beta={beta:>5}: m = {m:>12,}")
print(
    "\nA dataset whose optimal clustering has a tiny cluster (small beta)\n"
    "needs proportionally more uniform samples; the adversarial families in\n"
    "demo 04 show that this dependence is unavoidable."
)
