"""
Unit tests for the hopsets CLI module.
"""

import json
from fractions import Fraction
from unittest.mock import patch

import pandas as pd
import pytest

from hopsets.cli import build_parser, main, path_success, sweep_sizes
from hopsets.constants import SWEEP_COLUMNS
from hopsets.graph import Graph
from hopsets.graphio import read_edge_list
from hopsets.verify import EstimateCheck

pytestmark = pytest.mark.integration


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


@pytest.fixture
def disconnected_file(tmp_path):
    path = tmp_path / "split.txt"
    path.write_text("4 2 1\n0 1 1\n2 3 1\n")
    return path


class TestParser:
    """Argument parsing."""

    def test_no_command(self, capsys):
        assert main([]) == 2

    def test_input_and_gen_exclusive(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["hopset", "--input", "g.txt", "--gen", "path:4"])

    def test_model_choices(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["sssp", "--gen", "path:4", "--model", "pram"])

    def test_sweep_flags(self):
        args = build_parser().parse_args(
            ["sweep", "--family", "grid", "--n-min", "4", "--n-max", "16", "--weight", "3"]
        )
        assert (args.family, args.n_min, args.n_max, args.weight) == ("grid", 4, 16, 3)


class TestGenerate:
    """The generate command."""

    def test_writes_graph(self, capsys, tmp_path):
        out = tmp_path / "g.txt"
        code, report = run_json(capsys, "generate", "--gen", "random:12,20,5,3", "--output",
                                str(out))
        assert code == 0
        assert report["status"] == "ok"
        assert report["m"] == 20
        G = read_edge_list(out)
        assert (G.n, G.m, G.W) == (12, 20, 5)
        assert out.read_text().startswith("# generated by random:12,20,5,3 (numpy.random.PCG64)")

    def test_bad_spec(self, capsys, tmp_path):
        code, report = run_json(capsys, "generate", "--gen", "tree:4", "--output",
                                str(tmp_path / "g.txt"))
        assert code == 2
        assert report["kind"] == "ConfigurationError"


class TestHopsetCommand:
    """The hopset command."""

    def test_verify_path(self, capsys):
        code, report = run_json(capsys, "hopset", "--gen", "path:16", "--eps", "1/2",
                                "--verify")
        assert code == 0
        assert report["hopset"]["hop_bound"] == 1
        assert report["hopset"]["stretch"] == "49/48"
        assert report["verify"]["violation_count"] == 0
        assert report["verify"]["all_pairs"] is True

    def test_bad_epsilon(self, capsys):
        code, report = run_json(capsys, "hopset", "--gen", "path:16", "--eps", "2/1")
        assert code == 2
        assert report["status"] == "error"
        assert report["exit"] == 2

    def test_needs_a_graph(self, capsys):
        code, report = run_json(capsys, "hopset")
        assert code == 2
        assert "exactly one" in report["message"]

    def test_malformed_file(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("3 2 5\n0 1 1\n1 2 9\n")
        code, report = run_json(capsys, "hopset", "--input", str(path))
        assert code == 2
        assert report["kind"] == "GraphFormatError"
        assert report["line"] == 3

    def test_missing_file(self, capsys, tmp_path):
        code, report = run_json(capsys, "hopset", "--input", str(tmp_path / "absent.txt"))
        assert code == 2
        assert report["kind"] == "FileNotFoundError"

    def test_writes_hopset_file(self, capsys, tmp_path):
        out = tmp_path / "f.txt"
        code, report = run_json(capsys, "hopset", "--gen", "path:6", "--output", str(out))
        assert code == 0
        assert out.read_text().splitlines()[0] == "# hopset n=6 eps=1/2"
        assert report["output"] == str(out)

    def test_config_file_defaults(self, capsys, tmp_path):
        config = tmp_path / "defaults.json"
        config.write_text(json.dumps({"eps": "1/4"}))
        code, report = run_json(capsys, "--config", str(config), "hopset", "--gen", "path:6")
        assert code == 0
        assert report["hopset"]["epsilon"] == "1/4"

    def test_flag_beats_config_file(self, capsys, tmp_path, monkeypatch):
        config = tmp_path / "defaults.json"
        config.write_text(json.dumps({"eps": "1/4"}))
        monkeypatch.setenv("HOPSET_CONFIG", str(config))
        code, report = run_json(capsys, "hopset", "--gen", "path:6", "--eps", "1/3")
        assert code == 0
        assert report["hopset"]["epsilon"] == "1/3"


class TestSSSPCommand:
    """The sssp command under each model."""

    def test_sequential_with_output(self, capsys, tmp_path):
        out = tmp_path / "est.txt"
        code, report = run_json(capsys, "sssp", "--gen", "path:16", "--verify", "--output",
                                str(out))
        assert code == 0
        assert report["verify"]["upper_violations"] == []
        assert Fraction(report["verify"]["path_success"]) <= 1
        lines = out.read_text().splitlines()
        assert lines[0] == "# sssp source=0 model=sequential eps=1/2"
        assert lines[1] == "0 0"
        assert len(lines) == 17

    @pytest.mark.parametrize("model", ["congest", "clique", "streaming"])
    def test_models(self, capsys, model):
        code, report = run_json(capsys, "sssp", "--gen", "random:12,24,4,1", "--model", model,
                                "--source", "3", "--verify")
        assert code == 0
        assert report["ledger"]["model"] == model
        assert report["verify"]["lower_violations"] == []

    def test_congest_short_segments(self, capsys):
        code, report = run_json(capsys, "sssp", "--gen", "path:200", "--model", "congest",
                                "--ell", "1", "--verify")
        assert code == 0
        assert report["details"]["params"]["k"] < 199
        assert report["details"]["centers"] > 1
        assert Fraction(report["alpha"]) > Fraction(3, 2)
        assert report["verify"]["lower_violations"] == []
        assert report["verify"]["upper_violations"] == []
        assert Fraction(report["verify"]["witness_constant"]) > 0
        assert 0 < Fraction(report["verify"]["path_success"]) <= 1

    def test_streaming_from_file(self, capsys, tmp_path):
        path = tmp_path / "g.txt"
        assert main(["generate", "--gen", "path:10,3,1", "--output", str(path)]) == 0
        capsys.readouterr()
        code, report = run_json(capsys, "sssp", "--input", str(path), "--model", "streaming",
                                "--verify")
        assert code == 0
        assert report["ledger"]["passes"] > 0

    def test_congest_on_disconnected_graph(self, capsys, disconnected_file):
        code, report = run_json(capsys, "sssp", "--input", str(disconnected_file), "--model",
                                "congest")
        assert code == 3
        assert report["kind"] == "DisconnectedGraph"

    def test_sequential_on_disconnected_graph(self, capsys, disconnected_file):
        code, report = run_json(capsys, "sssp", "--input", str(disconnected_file), "--verify")
        assert code == 0
        assert report["verify"]["upper_violations"] == []

    def test_source_out_of_range(self, capsys):
        code, report = run_json(capsys, "sssp", "--gen", "path:4", "--source", "9")
        assert code == 2

    def test_failed_verification(self, capsys):
        failing = EstimateCheck(source=0, alpha=Fraction(3, 2), upper_violations=[2])
        with patch("hopsets.cli.check_estimates", return_value=failing):
            code, report = run_json(capsys, "sssp", "--gen", "path:4", "--verify")
        assert code == 1
        assert report["kind"] == "VerificationFailed"
        assert report["report"]["status"] == "failed"

    def test_path_success(self, path3):
        assert path_success(path3, [0, 1, 2], 0) == 1
        assert path_success(path3, [0, 3, 2], 0) == Fraction(2, 3)


class TestSweepCommand:
    """The sweep command."""

    def test_sizes(self):
        assert sweep_sizes(4, 16) == [4, 8, 16]
        assert sweep_sizes(5, 5) == [5]

    def test_csv_to_stdout(self, capsys):
        code, out = run(capsys, "sweep", "--family", "path", "--n-min", "4", "--n-max", "16")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "n,D,model,cost,hopset_size,centers,worst_ratio"
        assert lines[0] == ",".join(SWEEP_COLUMNS)
        assert [line.split(",")[0] for line in lines[1:]] == ["4", "8", "16"]

    def test_congest_costs(self, capsys, tmp_path):
        out = tmp_path / "sweep.csv"
        code, report = run_json(capsys, "sweep", "--family", "grid", "--n-min", "4",
                                "--n-max", "9", "--model", "congest", "--output", str(out))
        assert code == 0
        assert report["rows"] == 2
        df = pd.read_csv(out)
        assert list(df.columns) == list(SWEEP_COLUMNS)
        assert (df["cost"] > 0).all()
        assert (df["worst_ratio"] <= 1.5).all()

    def test_parquet(self, capsys, tmp_path):
        out = tmp_path / "sweep.parquet"
        code, _ = run_json(capsys, "sweep", "--family", "random", "--n-min", "6", "--n-max",
                           "12", "--model", "clique", "--output", str(out))
        assert code == 0
        df = pd.read_parquet(out)
        assert list(df["n"]) == [6, 12]
        assert str(df["cost"].dtype) == "Int64"

    def test_streaming_space(self, capsys, tmp_path):
        out = tmp_path / "sweep.csv"
        code, report = run_json(capsys, "sweep", "--family", "path", "--n-min", "4",
                                "--n-max", "8", "--model", "streaming", "--output", str(out))
        assert code == 0
        df = pd.read_csv(out)
        assert list(df.columns) == list(SWEEP_COLUMNS)
        assert set(report["peak_space_words"]) == {"4", "8"}
        assert all(words > 0 for words in report["peak_space_words"].values())
        assert (df["cost"] > 0).all()
        assert df["centers"].isna().all()

    def test_empty_range(self, capsys):
        code, report = run_json(capsys, "sweep", "--family", "path", "--n-min", "8", "--n-max",
                                "4")
        assert code == 2
        assert "empty sweep range" in report["message"]
