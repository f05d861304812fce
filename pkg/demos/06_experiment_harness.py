"""Walkthrough: the experiment harness end to end.

Each runner materializes a dataset (generator or file), repeats a sampling
plus solving pipeline over seeds, and emits CSV rows with a summary line
per configuration.  Reruns with the same seed are byte-identical outside
the *_ms timing columns.
"""
import tempfile
from pathlib import Path

from kmedsample.harness import (
    ExperimentSpec,
    run_balancedness,
    run_compare_coreset,
    run_size_error,
)
from kmedsample.instances import InstanceDescriptor

MIXTURE = InstanceDescriptor(
    "gaussian_mixture",
    {"k": 4, "per_cluster": 100, "d": 1, "separation": 100.0, "spread": 1.0},
    seed=5,
)

with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "size_error.csv"
    spec = ExperimentSpec(
        experiment="size_error",
        generator=MIXTURE,
        k_values=[4],
        m_values=[25, 50, 100, 200, 400],
        repetitions=20,
        seed=7,
        output=str(out),
    )
    rows = run_size_error(spec)
    print("=== size-error curve (signed relative error vs sample size) ===")
    print(f"{'m':>5} {'mean eps':>10} {'std':>8}")
    for r in rows:
        if r["trial"] == "mean":
            print(f"{r['m']:>5} {r['eps_hat']:>10.4f} {r['eps_std']:>8.4f}")
    print("full rows written to", out.name)

    print("\n=== balancedness protocol ===")
    spec_b = ExperimentSpec(
        experiment="balancedness",
        generator=MIXTURE,
        k_values=[2, 4],
        m_values=[500],
        repetitions=20,
        seed=7,
    )
    print(f"{'k':>3} {'beta(X)':>8} {'beta_prime(S)':>14} {'flag rate':>10}")
    for r in run_balancedness(spec_b):
        if r["trial"] == "mean":
            print(f"{r['k']:>3} {r['beta']:>8.3f} {r['beta_prime']:>14.3f} "
                  f"{r['balance_flag']:>10.2f}")
    print("beta_prime >= beta/2 throughout: vanilla local search on the sample"
          "\nalready lands on balanced solutions here.")

    print("\n=== uniform sampling vs coreset pipeline ===")
    spec_c = ExperimentSpec(
        experiment="compare_coreset",
        generator=InstanceDescriptor(
            "gaussian_mixture",
            {"k": 5, "per_cluster": 1000, "d": 2, "separation": 100.0, "spread": 1.0},
            seed=11,
        ),
        k_values=[5],
        m_values=[100, 300],
        repetitions=5,
        seed=8,
    )
    print(f"{'m':>5} {'method':>8} {'objective':>12} {'build ms':>9}")
    for r in run_compare_coreset(spec_c):
        if r["trial"] == "mean":
            print(f"{r['m']:>5} {r['method']:>8} {r['cost_x']:>12.2f} "
                  f"{r['sample_ms']:>9.2f}")
    print("comparable objectives; sampling is orders of magnitude cheaper to build.")
