"""Command line interface: exit codes, report shapes, byte determinism."""

import json

import numpy as np
import pytest

from expandlab import cli, cycle_graph, load_tuple, save_graph


def _run(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _graph_file(tmp_path, g, name="g.txt"):
    path = tmp_path / name
    save_graph(g, path)
    return str(path)


def test_graph_command_reports_exact_values(tmp_path, capsys):
    path = _graph_file(tmp_path, cycle_graph(4))
    code, out, err = _run(capsys, ["graph", path, "--metrics", "h,mu,lambda"])
    assert code == 0 and err == ""
    report = json.loads(out)
    result = report["result"]
    assert result["h"] == "1/2"
    assert result["mu"] == "1"
    assert result["h_witness"] == [1, 2]
    assert abs(result["lambda_eig"] - 1.0) < 1e-12
    assert report["config"]["command"] == "graph"
    assert report["config"]["inputs"] == [path]


def test_graph_command_is_byte_deterministic(tmp_path, capsys):
    path = _graph_file(tmp_path, cycle_graph(6))
    _, first, _ = _run(capsys, ["graph", path])
    _, second, _ = _run(capsys, ["graph", path])
    assert first == second


def test_graph_limit_flag(tmp_path, capsys):
    path = _graph_file(tmp_path, cycle_graph(6))
    code, out, err = _run(capsys, ["graph", path, "--limit", "4"])
    assert code == 2
    assert "expandlab" in err


def test_missing_file_exits_two(capsys):
    code, out, err = _run(capsys, ["graph", "/nonexistent/file.txt"])
    assert code == 2
    assert err.startswith("expandlab:")


def test_construct_and_tuple_round_trip(tmp_path, capsys):
    out_path = str(tmp_path / "haar.json")
    code, _, _ = _run(
        capsys, ["construct", "haar", "--n", "3", "--d", "2", "--seed", "5", "--out", out_path]
    )
    assert code == 0
    b = load_tuple(out_path)
    assert b.n == 3 and b.d == 2

    code, out, _ = _run(
        capsys, ["tuple", out_path, "--metrics", "lambda,hq", "--budget", "500"]
    )
    assert code == 0
    report = json.loads(out)
    assert 0.0 <= report["result"]["gap"] <= 1.0
    assert report["result"]["hq"]["best_value"] > 0
    assert report["config"]["budget"] == 500


def test_construct_to_stdout_is_deterministic(capsys):
    _, first, _ = _run(capsys, ["construct", "haar", "--n", "3", "--d", "2", "--seed", "7"])
    _, second, _ = _run(capsys, ["construct", "haar", "--n", "3", "--d", "2", "--seed", "7"])
    assert first == second
    assert json.loads(first)["n"] == 3


def test_construct_requires_its_flags(capsys):
    code, _, err = _run(capsys, ["construct", "haar", "--n", "3"])
    assert code == 2 and "--d" in err


def test_construct_graphical_over_prime_field(tmp_path, capsys):
    path = _graph_file(tmp_path, cycle_graph(4))
    code, out, _ = _run(
        capsys, ["construct", "graphical", "--graph", path, "--field", "2"]
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["field"] == {"prime": 2}

    out_path = str(tmp_path / "bg.json")
    _run(capsys, ["construct", "graphical", "--graph", path, "--field", "2", "--out", out_path])
    code, out, _ = _run(
        capsys,
        ["tuple", out_path, "--metrics", "mu,hd", "--normalization", "auto"],
    )
    assert code == 0
    result = json.loads(out)["result"]
    # estimates carry floats even when the finite-field scan was exact
    assert result["mu"]["best_value"] == 1
    assert result["hd"]["best_value"] == 0.5  # degree-normalized, h(C4)


def test_tuple_malformed_json_exits_two(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{oops")
    code, _, err = _run(capsys, ["tuple", str(path)])
    assert code == 2 and "expandlab" in err


def test_bad_normalization_exits_two(tmp_path, capsys):
    path = _graph_file(tmp_path, cycle_graph(4))
    out_path = str(tmp_path / "bg.json")
    _run(capsys, ["construct", "graphical", "--graph", path, "--out", out_path])
    code, _, err = _run(
        capsys, ["tuple", out_path, "--metrics", "hd", "--normalization", "sideways"]
    )
    assert code == 2 and "normalization" in err


def test_verify_suites_exit_zero(capsys):
    for suite in ("eq16", "normrank", "prop31"):
        code, out, _ = _run(capsys, ["verify", suite, "--trials", "20"])
        assert code == 0
        report = json.loads(out)
        assert report["result"]["failures"] == []
    code, out, _ = _run(capsys, ["verify", "witness"])
    assert code == 0
    code, out, _ = _run(capsys, ["verify", "thm15"])
    assert code == 0


def test_verify_is_byte_deterministic(capsys):
    _, first, _ = _run(capsys, ["verify", "eq16", "--trials", "15", "--seed", "3"])
    _, second, _ = _run(capsys, ["verify", "eq16", "--trials", "15", "--seed", "3"])
    assert first == second


def test_verify_over_prime_field(capsys):
    code, out, _ = _run(capsys, ["verify", "prop31", "--field", "2", "--trials", "25"])
    assert code == 0
    assert json.loads(out)["result"]["cases"] == 25


def test_experiment_localized_with_csv(tmp_path, capsys):
    csv_path = tmp_path / "rows.csv"
    code, out, _ = _run(
        capsys,
        [
            "experiment",
            "localized",
            "--n",
            "8",
            "--d",
            "2",
            "--eps",
            "0.02",
            "--s",
            "0.5,2",
            "--csv",
            str(csv_path),
        ],
    )
    assert code == 0
    report = json.loads(out)
    assert len(report["result"]["rows"]) == 2
    lines = csv_path.read_text().strip().splitlines()
    assert len(lines) == 3  # header plus one row per exponent
    assert lines[0].split(",")[0] == "s"


def test_unknown_metric_exits_two(tmp_path, capsys):
    path = _graph_file(tmp_path, cycle_graph(4))
    code, _, err = _run(capsys, ["graph", path, "--metrics", "h,zeta"])
    assert code == 2 and "zeta" in err


def test_backend_is_reported_in_config(tmp_path, capsys):
    path = _graph_file(tmp_path, cycle_graph(4))
    _, out, _ = _run(capsys, ["graph", path])
    config = json.loads(out)["config"]
    assert config["backend"] in ("numpy", "numba")
    assert "tolerances" in config
