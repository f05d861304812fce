import json

import numpy as np
import pytest

from kmedsample.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out.strip().splitlines()
    payload = json.loads(out[-1]) if out else {}
    return code, payload


def test_gen_exact_solve_pipeline(tmp_path, capsys):
    data = tmp_path / "thm3.csv"
    code, _ = run_cli(
        capsys, "gen", "thm3", "--n", "20", "--beta", "0.5", "--seed", "3", "-o", str(data)
    )
    assert code == 0
    code, res = run_cli(capsys, "exact", "--input", str(data), "--k", "2")
    assert code == 0
    assert res["cost"] == 0.0
    assert res["balancedness"] == 0.5
    code, res = run_cli(capsys, "solve", "--input", str(data), "--k", "2", "--seed", "1")
    assert code == 0
    assert res["cost"] == 0.0


def test_sample_and_coreset_files(tmp_path, capsys):
    data = tmp_path / "pts.csv"
    run_cli(
        capsys,
        "gen",
        "gaussian_mixture",
        "--k",
        "3",
        "--per-cluster",
        "20",
        "--d",
        "2",
        "--seed",
        "1",
        "-o",
        str(data),
    )
    sample_file = tmp_path / "s.csv"
    code, res = run_cli(
        capsys, "sample", "--input", str(data), "--m", "15", "--seed", "2", "-o", str(sample_file)
    )
    assert code == 0 and res["m"] == 15
    lines = sample_file.read_text().splitlines()
    assert lines[0] == "point_id,weight"
    assert len(lines) == 16
    coreset_file = tmp_path / "cs.csv"
    code, res = run_cli(
        capsys,
        "coreset",
        "--input",
        str(data),
        "--k",
        "3",
        "--m",
        "10",
        "--seed",
        "4",
        "-o",
        str(coreset_file),
    )
    assert code == 0
    assert res["weight_sum"] > 0


def test_verify_weak_coreset_command(tmp_path, capsys):
    data = tmp_path / "thm3.csv"
    run_cli(capsys, "gen", "thm3", "--n", "20", "--beta", "0.5", "--seed", "3", "-o", str(data))
    sample_file = tmp_path / "s.csv"
    # A sample of only zero-coordinate points misses the small cluster.
    rows = ["point_id,weight"]
    coords = np.loadtxt(data, delimiter=",").reshape(-1)
    zero_ids = np.nonzero(coords == 0.0)[0][:10]
    rows += [f"{i},1.0" for i in zero_ids]
    sample_file.write_text("\n".join(rows) + "\n")
    code, res = run_cli(
        capsys,
        "verify",
        "weak-coreset",
        "--input",
        str(data),
        "--sample",
        str(sample_file),
        "--k",
        "2",
        "--beta",
        "0.5",
        "--epsilon",
        "0.1",
    )
    assert code == 0
    assert res["passes"] is False


def test_graph_pipeline(tmp_path, capsys):
    edges = tmp_path / "g.edges"
    code, _ = run_cli(
        capsys, "gen", "graph_random", "--nv", "12", "--ne", "18", "--seed", "4", "-o", str(edges)
    )
    assert code == 0
    code, res = run_cli(
        capsys, "solve", "--input", str(edges), "--format", "edges", "--k", "3", "--seed", "0"
    )
    assert code == 0
    assert res["cost"] >= 0
    assert len(res["centers"]) == 3


def test_experiment_with_toml_spec(tmp_path, capsys):
    spec_file = tmp_path / "exp.toml"
    out = tmp_path / "out.csv"
    spec_file.write_text(
        "\n".join(
            [
                'experiment = "lower_bound_mc"',
                f'output = "{out}"',
                "m_values = [25]",
                "repetitions = 500",
                "seed = 7",
                "[generator]",
                'family = "thm3"',
                "seed = 5",
                "[generator.params]",
                "n = 1000",
                "beta = 0.02",
                "t = 1",
            ]
        )
        + "\n"
    )
    code, res = run_cli(capsys, "experiment", "lower_bound_mc", "--spec", str(spec_file))
    assert code == 0
    text = out.read_text()
    assert "miss_frequency" in text.splitlines()[0]


def test_experiment_with_flags(tmp_path, capsys):
    out = tmp_path / "out.csv"
    code, res = run_cli(
        capsys,
        "experiment",
        "weak_coreset_mc",
        "--family",
        "gaussian_mixture",
        "--param",
        "k=4",
        "--param",
        "per_cluster=50",
        "--param",
        "d=1",
        "--k-list",
        "4",
        "--m-list",
        "100",
        "--reps",
        "5",
        "--seed",
        "2",
        "-o",
        str(out),
    )
    assert code == 0
    assert res["rows"] == 1
    assert "success_fraction" in out.read_text().splitlines()[0]


def test_matrix_format_pipeline(tmp_path, capsys):
    m = np.array([[0.0, 1.0, 5.0], [1.0, 0.0, 4.0], [5.0, 4.0, 0.0]])
    data = tmp_path / "m.csv"
    np.savetxt(data, m, delimiter=",")
    code, res = run_cli(
        capsys, "exact", "--input", str(data), "--format", "matrix", "--k", "2"
    )
    assert code == 0
    assert res["cost"] == 1.0  # centers {0 or 1, 2}


def test_invalid_input_exit_code(tmp_path, capsys):
    data = tmp_path / "pts.csv"
    run_cli(capsys, "gen", "thm3", "--n", "20", "--beta", "0.5", "-o", str(data))
    code = main(["solve", "--input", str(data), "--k", "0"])
    assert code == 2


def test_budget_exceeded_exit_code(tmp_path, capsys):
    pts = np.random.default_rng(0).normal(size=(60, 2))
    data = tmp_path / "big.csv"
    np.savetxt(data, pts, delimiter=",")
    code = main(["exact", "--input", str(data), "--k", "12"])
    assert code == 3


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as e:
        main(["solve"])  # missing required arguments
    assert e.value.code == 2
