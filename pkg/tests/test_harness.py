import numpy as np
import pytest

from kmedsample import InvalidInputError
from kmedsample.harness import (
    ExperimentSpec,
    compute_baseline,
    materialize_dataset,
    read_csv,
    run_balancedness,
    run_compare_coreset,
    run_lower_bound_mc,
    run_size_error,
    run_weak_coreset_mc,
    spec_from_dict,
    strip_timing_columns,
)
from kmedsample.instances import InstanceDescriptor


def mixture_desc(seed=5, k=4, per_cluster=100):
    return InstanceDescriptor(
        "gaussian_mixture",
        {"k": k, "per_cluster": per_cluster, "d": 1, "separation": 100.0, "spread": 1.0},
        seed=seed,
    )


def test_row_count_and_schema(tmp_path):
    out = tmp_path / "se.csv"
    spec = ExperimentSpec(
        experiment="size_error",
        generator=mixture_desc(per_cluster=50),
        k_values=[2, 4],
        m_values=[30, 60],
        repetitions=5,
        seed=1,
        output=str(out),
    )
    rows = run_size_error(spec)
    assert len(rows) == 2 * 2 * (5 + 1)
    header, parsed = read_csv(out)
    assert parsed[0]["experiment"] == "size_error"
    assert len(parsed) == len(rows)


def test_eps_hat_recomputable_from_columns(tmp_path):
    out = tmp_path / "se.csv"
    spec = ExperimentSpec(
        experiment="size_error",
        generator=mixture_desc(per_cluster=50),
        k_values=[3],
        m_values=[40],
        repetitions=6,
        seed=2,
        output=str(out),
    )
    run_size_error(spec)
    _, parsed = read_csv(out)
    for row in parsed:
        if row["trial"] == "mean":
            continue
        cost_x = float(row["cost_x"])
        base = float(row["baseline_cost"])
        eps = float(row["eps_hat"])
        assert abs(eps - (cost_x - base) / base) <= 1e-9 * max(1.0, abs(eps))


def test_summary_rows_are_exact_statistics():
    spec = ExperimentSpec(
        experiment="size_error",
        generator=mixture_desc(per_cluster=50),
        k_values=[2],
        m_values=[40],
        repetitions=8,
        seed=3,
    )
    rows = run_size_error(spec)
    trials = [r for r in rows if r["trial"] != "mean"]
    summary = [r for r in rows if r["trial"] == "mean"][0]
    costs = np.array([r["cost_x"] for r in trials])
    assert summary["cost_x"] == pytest.approx(costs.mean(), rel=1e-12)
    assert summary["cost_std"] == pytest.approx(costs.std(ddof=0), rel=1e-12)


def test_full_size_sample_has_small_error():
    # Sampling the whole dataset (in expectation) poses the same problem.
    spec = ExperimentSpec(
        experiment="size_error",
        generator=mixture_desc(per_cluster=100),
        k_values=[4],
        m_values=[400],
        repetitions=10,
        seed=4,
    )
    rows = run_size_error(spec)
    summary = [r for r in rows if r["trial"] == "mean"][0]
    assert abs(summary["eps_hat"]) <= 0.05


def test_error_trend_monotone_in_sample_size():
    spec = ExperimentSpec(
        experiment="size_error",
        generator=mixture_desc(),
        k_values=[4],
        m_values=[50, 200],
        repetitions=20,
        seed=9,
    )
    rows = run_size_error(spec)
    sums = {r["m"]: r for r in rows if r["trial"] == "mean"}
    assert sums[200]["eps_hat"] <= sums[50]["eps_hat"] + sums[50]["eps_std"]


def test_balancedness_flags():
    spec = ExperimentSpec(
        experiment="balancedness",
        generator=mixture_desc(),
        k_values=[4],
        m_values=[500],
        repetitions=10,
        seed=7,
    )
    rows = run_balancedness(spec)
    summary = [r for r in rows if r["trial"] == "mean"][0]
    assert summary["beta"] >= 0.9
    assert summary["balance_flag"] >= 0.9


def test_compare_coreset_times_and_gap(tmp_path):
    spec = ExperimentSpec(
        experiment="compare_coreset",
        generator=InstanceDescriptor(
            "gaussian_mixture",
            {"k": 5, "per_cluster": 600, "d": 2, "separation": 100.0, "spread": 1.0},
            seed=11,
        ),
        k_values=[5],
        m_values=[100, 500],
        repetitions=5,
        seed=8,
        output=str(tmp_path / "cmp.csv"),
    )
    rows = run_compare_coreset(spec)
    sums = {(r["m"], r["method"]): r for r in rows if r["trial"] == "mean"}
    for m in (100, 500):
        assert sums[(m, "uniform")]["sample_ms"] < sums[(m, "coreset")]["sample_ms"]
    gap = abs(sums[(500, "uniform")]["cost_x"] - sums[(500, "coreset")]["cost_x"])
    assert gap <= 0.05 * sums[(500, "coreset")]["cost_x"]


def test_lower_bound_mc_thm3():
    spec = ExperimentSpec(
        experiment="lower_bound_mc",
        generator=InstanceDescriptor("thm3", {"n": 1000, "beta": 0.02, "t": 1}, seed=5),
        m_values=[25],
        repetitions=2000,
        seed=42,
    )
    row = run_lower_bound_mc(spec)[0]
    assert row["miss_frequency"] >= 0.5  # the guaranteed bound
    assert abs(row["miss_frequency"] - row["closed_form"]) < 0.05


def test_lower_bound_mc_requires_family():
    spec = ExperimentSpec(
        experiment="lower_bound_mc",
        generator=mixture_desc(),
        repetitions=5,
    )
    with pytest.raises(InvalidInputError):
        run_lower_bound_mc(spec)


def test_weak_coreset_mc_full_sample_always_succeeds():
    spec = ExperimentSpec(
        experiment="weak_coreset_mc",
        generator=mixture_desc(per_cluster=50),
        k_values=[4],
        m_values=[200],
        repetitions=10,
        seed=3,
        epsilon=0.1,
    )
    row = run_weak_coreset_mc(spec)[0]
    assert row["success_fraction"] == 1.0


def test_weak_coreset_mc_thm3_often_fails():
    spec = ExperimentSpec(
        experiment="weak_coreset_mc",
        generator=InstanceDescriptor("thm3", {"n": 1000, "beta": 0.02, "t": 1}, seed=5),
        k_values=[2],
        m_values=[25],
        repetitions=200,
        seed=6,
        epsilon=0.1,
    )
    row = run_weak_coreset_mc(spec)[0]
    assert row["success_fraction"] <= 0.6


def test_determinism_modulo_timing(tmp_path):
    paths = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        spec = ExperimentSpec(
            experiment="size_error",
            generator=mixture_desc(per_cluster=50),
            k_values=[2],
            m_values=[40],
            repetitions=5,
            seed=13,
            output=str(out),
        )
        run_size_error(spec)
        paths.append(out)
    a = strip_timing_columns(paths[0].read_text())
    b = strip_timing_columns(paths[1].read_text())
    assert a == b
    assert paths[0].read_text() != ""  # sanity


def test_thread_pool_does_not_change_results(tmp_path, monkeypatch):
    def run(threads):
        monkeypatch.setenv("KMEDSAMPLE_THREADS", str(threads))
        out = tmp_path / f"t{threads}.csv"
        spec = ExperimentSpec(
            experiment="size_error",
            generator=mixture_desc(per_cluster=50),
            k_values=[3],
            m_values=[40],
            repetitions=8,
            seed=17,
            output=str(out),
        )
        run_size_error(spec)
        return strip_timing_columns(out.read_text())

    assert run(1) == run(4)


def test_spec_from_dict_and_validation():
    spec = spec_from_dict(
        {
            "experiment": "size_error",
            "k_values": [2],
            "m_values": [10],
            "repetitions": 3,
            "generator": {"family": "thm3", "params": {"n": 20, "beta": 0.5}, "seed": 1},
        }
    )
    assert materialize_dataset(spec).n == 20
    with pytest.raises(InvalidInputError):
        spec_from_dict({"experiment": "size_error", "bogus": 1})
    with pytest.raises(InvalidInputError):
        spec_from_dict({"experiment": "nope"})


def test_baseline_exact_on_desk_scale():
    spec = ExperimentSpec(experiment="size_error", generator=mixture_desc())
    X = materialize_dataset(spec)
    C, base, label = compute_baseline(X, 4, spec)
    assert label == "exact"
    assert base > 0


def test_input_file_roundtrip(tmp_path):
    from kmedsample.metric import write_points_csv

    X = materialize_dataset(
        ExperimentSpec(experiment="size_error", generator=mixture_desc(per_cluster=10))
    )
    path = tmp_path / "pts.csv"
    write_points_csv(X.backend, path)
    spec = ExperimentSpec(
        experiment="weak_coreset_mc",
        input_path=str(path),
        input_format="csv",
        k_values=[4],
        m_values=[40],
        repetitions=3,
        seed=2,
    )
    row = run_weak_coreset_mc(spec)[0]
    assert 0.0 <= row["success_fraction"] <= 1.0
