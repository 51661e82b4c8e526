from __future__ import annotations

import csv
import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dyncov import cli
from dyncov.config import ConfigError, ExperimentConfig, deep_merge
from dyncov.model import FixedSpeed, Mixture, NetworkConfig, PointMass, UniformSpeed, VonMises
from dyncov.scenarios import SCENARIOS, resolve

EXPECTED_SCENARIOS = {"area-coverage", "interval-coverage", "required-speed", "detect-static", "durations",
                      "detect-sensing-time", "optimal-speed-sweep", "detect-mobile", "game-best-response",
                      "game-equilibrium", "straightline-optimality"}


def test_every_scenario_registered():
    assert set(SCENARIOS) == EXPECTED_SCENARIOS


@pytest.mark.parametrize("name", sorted(EXPECTED_SCENARIOS))
def test_defaults_resolve_and_round_trip(name):
    cfg = resolve(name)
    assert ExperimentConfig.from_json(cfg.to_json()) == cfg


laws = st.sampled_from([
    {"kind": "uniform"},
    {"kind": "point_mass", "theta": 1.25},
    {"kind": "von_mises", "mu": 0.5, "kappa": 3.0},
    {"kind": "mixture", "parts": [{"weight": 0.25, "law": {"kind": "point_mass", "theta": 0.0}},
                                  {"weight": 0.75, "law": {"kind": "von_mises", "mu": 2.0, "kappa": 1.0}}]},
])
speeds = st.sampled_from([{"kind": "fixed", "value": 1.5}, {"kind": "uniform", "low": 0.5, "high": 2.0},
                          {"kind": "discrete", "values": [1.0, 2.0], "weights": [0.5, 0.5]}])


@given(laws, speeds, st.floats(0, 5), st.floats(0.01, 2), st.one_of(st.none(), st.floats(0.01, 10)),
       st.integers(0, 2**40), st.one_of(st.none(), st.floats(0.5, 5)))
def test_config_round_trip(law, speed, density, radius, turn, seed, vmax):
    obj = {"scenario": "detect-mobile",
           "network": {"density": density, "sensing_radius": radius, "speed": speed, "direction": law,
                       "turn_interval": turn},
           "intruder": {"speed": 0.25, "direction": 1.0, "sensing_time": 0.0, "max_speed": vmax},
           "horizon": None, "replications": 3, "test_points": 0, "seed": seed,
           "output": {"dir": "x", "format": "csv"}, "params": {}, "tolerances": {"mean_rel": 0.1}}
    cfg = ExperimentConfig.from_dict(obj)
    assert cfg.to_dict() == obj
    assert ExperimentConfig.from_json(cfg.to_json()) == cfg


def test_parsed_laws():
    cfg = ExperimentConfig.from_dict({"scenario": "x", "network": {
        "speed": {"kind": "uniform", "low": 0.5, "high": 1.5},
        "direction": {"kind": "mixture", "parts": [{"weight": 1.0, "law": {"kind": "von_mises", "mu": 0, "kappa": 2}}]}}})
    assert cfg.network == NetworkConfig(1.0, 0.5, UniformSpeed(0.5, 1.5), Mixture(((1.0, VonMises(0.0, 2.0)),)))
    assert cfg.intruder.max_speed == math.inf


@pytest.mark.parametrize("obj, path", [
    ({"scenario": "x", "bogus": 1}, "bogus"),
    ({"scenario": "x", "network": {"densty": 1}}, "network.densty"),
    ({"scenario": "x", "network": {"density": -1}}, "network.density"),
    ({"scenario": "x", "network": {"speed": {"kind": "warp"}}}, "network.speed.kind"),
    ({"scenario": "x", "network": {"direction": {"kind": "von_mises", "mu": 0}}}, "network.direction.kappa"),
    ({"scenario": "x", "intruder": {"speed": "fast"}}, "intruder.speed"),
    ({"scenario": "x", "replications": 0}, "replications"),
    ({"scenario": "x", "output": {"format": "xml"}}, "output.format"),
    ({"network": {}}, "scenario"),
])
def test_strict_errors_name_the_field(obj, path):
    with pytest.raises(ConfigError) as info:
        ExperimentConfig.from_dict(obj)
    assert info.value.path == path


def test_unknown_scenario_params_rejected():
    with pytest.raises(ConfigError) as info:
        resolve("detect-static", {"params": {"speeds": [1]}})
    assert info.value.path == "params.speeds"
    with pytest.raises(ConfigError):
        resolve("detect-static", {"scenario": "durations"})


def test_precedence():
    cfg = resolve("detect-static", {"seed": 5, "replications": 7, "network": {"density": 2.0}},
                  {"seed": 9})
    assert cfg.seed == 9 and cfg.replications == 7 and cfg.network.density == 2.0
    assert cfg.network.sensing_radius == 0.5 and cfg.tolerances["rate_rel"] == 0.03
    merged = deep_merge({"a": {"b": 1, "c": 2}, "law": {"kind": "x", "v": 1}},
                        {"a": {"b": 3}, "law": {"kind": "y"}})
    assert merged == {"a": {"b": 3, "c": 2}, "law": {"kind": "y"}}


def test_cli_determinism(tmp_path, capsys):
    outs = []
    out = tmp_path / "run"
    for _ in range(2):
        code = cli.main(["area-coverage", "--seed", "42", "--reps", "4", "--out", str(out)])
        assert code in (0, 1)
        outs.append(((out / "area-coverage.csv").read_bytes(), (out / "area-coverage.json").read_bytes()))
    assert outs[0] == outs[1]


def test_cli_detect_static_summary(tmp_path, capsys):
    cli.main(["detect-static", "--reps", "200", "--out", str(tmp_path)])
    doc = json.loads((tmp_path / "detect-static.json").read_text())
    assert doc["predicted_rate"] == 1.0
    assert doc["config"]["seed"] == doc["seed"] == 0
    assert doc["config"]["replications"] == 200
    with open(tmp_path / "detect-static.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["replicate", "sample", "censored"] and len(rows) == 201


def test_cli_game_equilibrium(tmp_path, capsys):
    assert cli.main(["game-equilibrium", "--out", str(tmp_path), "--format", "json"]) == 0
    doc = json.loads((tmp_path / "game-equilibrium.json").read_text())
    values = [law["min_effective_speed"] for law in doc["laws"]]
    assert values.index(max(values)) == doc["uniform_index"]
    assert doc["laws"][doc["uniform_index"]]["law"] == {"kind": "uniform"}
    assert json.loads(capsys.readouterr().out)["passed"] is True


def test_cli_exit_codes(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"scenario": "required-speed", "tolerances": {"roundtrip": 0.0}}))
    assert cli.main(["required-speed", "--config", str(cfg), "--out", str(tmp_path), "--format", "csv"]) == 1
    assert "roundtrip_max_abs_error" in capsys.readouterr().out
    cfg.write_text(json.dumps({"scenario": "required-speed", "network": {"sensing_radius": -1}}))
    assert cli.main(["required-speed", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    assert "network.sensing_radius" in capsys.readouterr().err
    cfg.write_text("{not json")
    assert cli.main(["required-speed", "--config", str(cfg)]) == 2
    assert cli.main(["detect-static", "--out", str(tmp_path), "--reps", "5", "--config", str(tmp_path / "nope")]) == 2
    cfg.write_text(json.dumps({"scenario": "detect-static", "intruder": {"speed": 1.0}}))
    assert cli.main(["detect-static", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    assert "intruder.speed" in capsys.readouterr().err


def test_cli_reports_undetectable_as_string(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"scenario": "game-best-response", "network": {"direction": {"kind": "point_mass", "theta": 0.5}},
                               "params": {"v_t_max": 1.5}}))
    assert cli.main(["game-best-response", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "game-best-response.json").read_text())
    assert doc["best_response"]["payoff"] == "inf" and doc["best_response"]["undetectable"] is True


def test_fixed_speed_sweep_replaces_speed():
    cfg = resolve("optimal-speed-sweep", {"network": {"speed": {"kind": "fixed", "value": 3.0}}})
    assert cfg.network.speed_law == FixedSpeed(3.0)
    assert PointMass(7.0).theta == pytest.approx(7.0 - 2 * math.pi)
