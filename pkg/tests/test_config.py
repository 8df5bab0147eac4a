"""
Unit tests for run configuration.
"""

import json
from fractions import Fraction

import pytest

from hopsets.cli import build_parser
from hopsets.config import DEFAULTS, RunConfig, config_path, load_defaults
from hopsets.exceptions import ConfigurationError


def parse(*argv):
    return RunConfig.from_args(build_parser().parse_args(list(argv)))


class TestConfigFile:
    """Finding and reading the defaults file."""

    def test_flag_before_environment(self, monkeypatch):
        monkeypatch.setenv("HOPSET_CONFIG", "/from/env.json")
        assert config_path("/from/flag.json") == "/from/flag.json"
        assert config_path() == "/from/env.json"

    def test_no_file(self, monkeypatch):
        monkeypatch.delenv("HOPSET_CONFIG", raising=False)
        assert config_path() is None
        assert load_defaults() == {}

    def test_keys_normalised(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"finish-range": 7, "n_min": 4}))
        assert load_defaults(str(path)) == {"finish_range": 7, "n_min": 4}

    @pytest.mark.parametrize("text", ['{"colour": 1}', "{not json", "[1, 2]"])
    def test_bad_files(self, tmp_path, text):
        path = tmp_path / "c.json"
        path.write_text(text)
        with pytest.raises(ConfigurationError):
            load_defaults(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_defaults(str(tmp_path / "absent.json"))

    def test_every_default_has_a_key(self):
        assert set(DEFAULTS) >= {"eps", "model", "seed", "family", "n_min", "n_max"}


class TestRunConfig:
    """Merging and validation."""

    def test_defaults(self, monkeypatch):
        monkeypatch.delenv("HOPSET_CONFIG", raising=False)
        config = parse("sssp", "--gen", "path:4")
        assert config.epsilon == Fraction(1, 2)
        assert config.model == "sequential"
        assert (config.source, config.seed, config.a) == (0, 0, 1)
        assert config.origin is None

    def test_file_then_flags(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"model": "clique", "seed": 9, "eps": "1/3"}))
        config = parse("--config", str(path), "sssp", "--gen", "path:4", "--seed", "2")
        assert config.model == "clique"
        assert config.seed == 2
        assert config.epsilon == Fraction(1, 3)
        assert config.origin == str(path)
        assert config.to_dict()["epsilon"] == "1/3"

    def test_verify_from_file(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"verify": True}))
        assert parse("--config", str(path), "hopset", "--gen", "path:4").verify

    def test_unknown_model_in_file(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"model": "pram"}))
        with pytest.raises(ConfigurationError, match="unknown model"):
            parse("--config", str(path), "sssp", "--gen", "path:4")

    @pytest.mark.parametrize("argv", [
        ("sssp", "--gen", "path:4", "--a", "0"),
        ("sssp", "--gen", "path:4", "--ell", "0"),
        ("sssp", "--gen", "path:4", "--source", "-1"),
        ("sssp", "--gen", "path:4", "--eps", "0"),
        ("sweep", "--family", "path", "--n-min", "1", "--n-max", "4"),
        ("sweep", "--family", "path", "--n-min", "4"),
        ("sweep", "--family", "path", "--n-min", "4", "--n-max", "8", "--weight", "0"),
    ])
    def test_invalid(self, argv):
        with pytest.raises(ConfigurationError):
            parse(*argv)

    def test_generate_needs_output(self):
        config = RunConfig(command="generate", gen="path:4")
        with pytest.raises(ConfigurationError):
            config.validate()
