import copy
import csv
import io
import json

import pytest

from zsembed.cli import EXIT_CONFIG, EXIT_OK, EXIT_VERIFICATION, emit, main, parse_config, ConfigError

ASYM = {
    "game": {"family": "cournot",
             "params": {"demand_intercept": 10, "b": 0.5, "c": [1, 2, 3], "output_bound": 10}},
    "subsidy": {"family": "quadratic", "vertex": 4, "f_bounds": [0, 8]},
    "solver": {"damping": 0.5, "max_iter": 10000},
    "seed": 0,
}
SYM = copy.deepcopy(ASYM)
SYM["game"]["params"]["c"] = [1, 1, 1]
TOY = {
    "game": {"family": "quadratic",
             "params": {"own": [-1], "linear": [6], "constant": [-9], "bounds": [[0, 10]]}},
    "subsidy": {"vertex": 2, "f_bounds": [0, 5]},
}


@pytest.fixture
def write_config(tmp_path):
    def write(cfg, name="cfg.json"):
        path = tmp_path / name
        path.write_text(json.dumps(cfg))
        return str(path)

    return write


def run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_asymmetric_json(write_config, capsys):
    code, out, _ = run(capsys, ["solve", "--config", write_config(ASYM), "--format", "json"])
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["equilibrium"]["x"] == pytest.approx([10 / 3, 8 / 3, 2.0], abs=1e-6)
    assert rep["equilibrium"]["f"] == pytest.approx(4)
    assert rep["seed"] == 0
    assert rep["inputs"] == ASYM
    assert all(p["sion_gap"] <= 2e-6 for p in rep["pairs"])
    assert {"iterations", "wall_time", "values"} <= set(rep)


def test_solve_table(write_config, capsys):
    code, out, _ = run(capsys, ["solve", "--config", write_config(ASYM)])
    assert code == EXIT_OK
    assert "3.33333" in out and "2.66667" in out


def test_solve_toy(write_config, capsys):
    code, out, _ = run(capsys, ["solve", "--config", write_config(TOY), "--format", "json"])
    assert code == EXIT_OK
    assert json.loads(out)["equilibrium"]["x"][0] == pytest.approx(3, abs=1e-7)


def test_bad_b_exits_2_naming_field(write_config, capsys):
    cfg = copy.deepcopy(ASYM)
    cfg["game"]["params"]["b"] = 1.5
    code, out, err = run(capsys, ["solve", "--config", write_config(cfg)])
    assert code == EXIT_CONFIG
    record = json.loads(err)
    assert record["field"] == "game.params.b"
    assert out == ""


@pytest.mark.parametrize(
    "mutate, field",
    [
        (lambda c: c.update(extra=1), "extra"),
        (lambda c: c["game"]["params"].update(typo=1), "game.params.typo"),
        (lambda c: c["subsidy"].pop("f_bounds"), "subsidy.f_bounds"),
        (lambda c: c["subsidy"].update(f_bounds=[0, 3]), "subsidy"),
        (lambda c: c["solver"].update(damping=2), "solver.damping"),
        (lambda c: c["game"].update(family="bertrand"), "game.family"),
        (lambda c: c["game"]["params"].update(c=[1, "x", 3]), "game.params.c[1]"),
    ],
)
def test_config_errors(write_config, capsys, mutate, field):
    cfg = copy.deepcopy(ASYM)
    mutate(cfg)
    code, _, err = run(capsys, ["solve", "--config", write_config(cfg)])
    assert code == EXIT_CONFIG
    assert json.loads(err)["field"] == field


def test_invalid_json_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{\n  \"game\": \n")
    code, _, err = run(capsys, ["solve", "--config", str(path)])
    assert code == EXIT_CONFIG
    assert "line" in json.loads(err)["message"]


def test_nonconvergence_exit_3(write_config, capsys):
    cfg = copy.deepcopy(ASYM)
    cfg["solver"]["max_iter"] = 2
    code, _, err = run(capsys, ["solve", "--config", write_config(cfg)])
    assert code == 3
    assert json.loads(err)["error"] == "NonConvergence"


def test_verify_solves_then_checks(write_config, capsys):
    code, out, _ = run(capsys, ["verify", "--config", write_config(ASYM), "--format", "json"])
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["theorem1_passed"] and rep["theorem2_passed"]
    assert max(rep["deviation_gaps"]) <= 1e-6


def test_verify_candidate_not_nash(write_config, capsys):
    code, _, err = run(capsys, ["verify", "--config", write_config(SYM), "--candidate", "0,0,0"])
    assert code == EXIT_VERIFICATION
    record = json.loads(err)
    assert record["error"] == "NotANash"
    assert record["deviation_gaps"][0] == pytest.approx(20.25, abs=1e-9)


def test_verify_candidate_equilibrium(write_config, capsys):
    code, out, _ = run(capsys, ["verify", "--config", write_config(SYM), "--candidate", "3,3,3",
                                "--format", "csv"])
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["player"] for r in rows] == ["1", "2", "3"]
    assert all(float(r["sion_gap"]) <= 1e-6 for r in rows)


def test_verify_candidate_out_of_domain(write_config, capsys):
    code, _, err = run(capsys, ["verify", "--config", write_config(SYM), "--candidate", "3,3,30"])
    assert code == EXIT_CONFIG
    assert json.loads(err)["field"] == "--candidate"


def test_verify_toy_gaps(write_config, capsys):
    code, out, _ = run(capsys, ["verify", "--config", write_config(TOY), "--format", "json"])
    assert code == EXIT_OK
    rep = json.loads(out)
    assert max(p["sion_gap"] for p in rep["pairs"]) <= 1e-9


def test_oracle_toy(write_config, capsys):
    code, out, _ = run(capsys, ["oracle", "--config", write_config(TOY), "--resolution", "101",
                                "--format", "json"])
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["pairs"][0]["maximin_discrepancy"] <= 0.01
    assert rep["pairs"][0]["minimax_discrepancy"] <= 0.01


def test_oracle_coarse_runs(write_config, capsys):
    code, out, _ = run(capsys, ["oracle", "--config", write_config(TOY), "--resolution", "2"])
    assert code == EXIT_OK
    assert "resolution" in out


def test_oracle_grid_guard(write_config, capsys):
    code, _, err = run(capsys, ["oracle", "--config", write_config(ASYM), "--resolution", "600"])
    assert code == EXIT_CONFIG
    assert json.loads(err)["error"] == "GridTooLarge"


def test_seed_flag_and_multi_start(write_config, capsys):
    cfg = copy.deepcopy(ASYM)
    cfg["solver"]["multi_start"] = 2
    code, out, _ = run(capsys, ["solve", "--config", write_config(cfg), "--seed", "7",
                                "--format", "json"])
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["seed"] == 7
    assert rep["multi_start"]["agree"]
    assert len(rep["multi_start"]["solutions"]) == 3


def test_json_report_round_trips(write_config, capsys):
    _, out, _ = run(capsys, ["solve", "--config", write_config(ASYM), "--format", "json"])
    assert emit(json.loads(out), "json") == out


def test_parse_config_defaults():
    cfg = parse_config(TOY)
    assert cfg.damping == 0.5 and cfg.max_iter == 10_000 and cfg.seed == 0
    with pytest.raises(ConfigError):
        parse_config([])
