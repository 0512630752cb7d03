import json

import numpy as np
import pytest

from tracecode.cli import main
from tracecode.errors import ParameterError
from tracecode.experiment import CSV_COLUMNS, KINDS, ExperimentConfig, rows_to_csv, run_experiment


def small_params(kind):
    return {
        "bigalpha": {"n": 15, "b": 4},
        "binary": {"n_out": 7, "k_inner": 3, "outer_redundancy": 2},
        "inner": {"k": 2},
        "runcode": {"K": 2, "m": 8},
        "avgcase": {"m": 3},
    }[kind]


@pytest.mark.parametrize("kind", KINDS)
def test_noiseless_runs_never_fail(kind):
    cfg = ExperimentConfig(kind, [0.0], [1], 1, seed=3, params=small_params(kind))
    (row,) = run_experiment(cfg)
    assert row.failures == 0 and row.rate == 0.0 and row.trials == 1


def test_config_validation():
    with pytest.raises(ParameterError):
        ExperimentConfig("bogus", [0.1], [1], 1)
    with pytest.raises(ParameterError):
        ExperimentConfig("avgcase", [], [1], 1)
    with pytest.raises(ParameterError):
        ExperimentConfig("avgcase", [0.1], [1], 0)
    with pytest.raises(ParameterError):
        ExperimentConfig("avgcase", [0.1], [1], 5, params={"n_R": 3})


def test_build_errors_name_the_grid_point():
    cfg = ExperimentConfig("binary", [0.3], [1], 1, params={"m": 8, "n_R": 48, "n_S": 24})
    with pytest.raises(Exception, match="grid point 0"):
        run_experiment(cfg)


def test_csv_schema_and_row_order():
    cfg = ExperimentConfig("avgcase", [0.2, 0.4], [1, 3], 30, seed=1, params={"m": 3})
    rows = run_experiment(cfg)
    lines = rows_to_csv(rows).splitlines()
    assert lines[0].split(",") == list(CSV_COLUMNS)
    assert [(r.q, r.T) for r in rows] == [(0.2, 1), (0.2, 3), (0.4, 1), (0.4, 3)]
    assert all(r.ci_lo <= r.rate <= r.ci_hi for r in rows)


def test_same_seed_same_bytes(monkeypatch):
    cfg = ExperimentConfig("bigalpha", [0.5], [1, 3], 20, seed=9, params={"n": 31, "b": 5})
    first = rows_to_csv(run_experiment(cfg))
    monkeypatch.setenv("TRACECODE_THREADS", "4")
    assert rows_to_csv(run_experiment(cfg)) == first
    cfg.seed = 10
    assert rows_to_csv(run_experiment(cfg)) != first


def test_bigalpha_sweep_nonincreasing_in_T():
    cfg = ExperimentConfig("bigalpha", [0.5], list(range(1, 9)), 60, seed=2, params={"n": 63, "b": 6})
    rows = run_experiment(cfg)
    for a, b in zip(rows, rows[1:]):
        assert b.rate <= a.ci_hi


def test_timing_column_only_when_requested():
    cfg = ExperimentConfig("avgcase", [0.3], [1], 5, params={"m": 2}, timing=True)
    assert rows_to_csv(run_experiment(cfg)).splitlines()[1].split(",")[-1] != ""


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def test_experiment_command(workdir, capsys):
    (workdir / "x.toml").write_text('kind = "avgcase"\nq = [0.3]\nT = [1, 2]\ntrials = 20\n[params]\nm = 3\n')
    assert main(["experiment", "--config", "x.toml", "--seed", "7", "--out", "r.csv"]) == 0
    text = (workdir / "r.csv").read_text()
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    assert len(text.splitlines()) == 3
    assert main(["experiment", "--config", "x.toml", "--seed", "7"]) == 0
    assert capsys.readouterr().out == text


def _build(workdir, kind, params):
    (workdir / "c.json").write_text(json.dumps({"kind": kind, "seed": 1, "params": params}))
    assert main(["build-codec", "--config", "c.json", "--out", "codec.json"]) == 0


@pytest.mark.parametrize(
    "kind,params,msg",
    [
        ("bigalpha", {"n": 15, "b": 4, "q": 0.5}, "1 2 3 4 5 6 7 8 9 10 11"),
        ("binary", {"n_out": 7, "k_inner": 3, "outer_redundancy": 2}, "1,2,3,4,5"),
    ],
)
def test_build_simulate_decode(workdir, capsys, kind, params, msg):
    _build(workdir, kind, params)
    assert main(["simulate", "--codec", "codec.json", "--message", msg, "--q", "0.2",
                 "--T", "6", "--seed", "3", "--out", "traces.json"]) == 0
    assert main(["decode", "--codec", "codec.json", "--traces", "traces.json"]) == 0
    assert capsys.readouterr().out.strip() == msg.replace(" ", ",")


def test_encode_command(workdir, capsys):
    _build(workdir, "binary", {"n_out": 7, "k_inner": 3, "outer_redundancy": 2})
    assert main(["encode", "--codec", "codec.json", "--message", "0,0,0,0,0"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["n"] == 7 * (60 + 192)


def test_tampered_codeword_exits_one(workdir, capsys):
    _build(workdir, "binary", {"n_out": 7, "k_inner": 3, "outer_redundancy": 2})
    assert main(["encode", "--codec", "codec.json", "--message", "1,2,3,4,5", "--out", "word.json"]) == 0
    word = json.loads((workdir / "word.json").read_text())
    bits = np.unpackbits(np.frombuffer(bytes.fromhex(word["hex"]), dtype=np.uint8))[: word["n"]]
    # wipe the content of four of the seven blocks: beyond the two-symbol redundancy
    block = 60 + 192
    for i in (0, 2, 4, 6):
        bits[i * block : i * block + 60] = 0
    tampered = "".join(map(str, bits.tolist()))
    (workdir / "t.json").write_text(json.dumps({"traces": [tampered]}))
    assert main(["decode", "--codec", "codec.json", "--traces", "t.json"]) == 1
    assert "decode failure" in capsys.readouterr().err


def test_verify_sync_command(workdir):
    _build(workdir, "bigalpha", {"n": 15, "b": 4})
    codec = json.loads((workdir / "codec.json").read_text())
    (workdir / "s.json").write_text(json.dumps(codec["sync"]))
    assert main(["verify-sync", "--file", "s.json"]) == 0
    (workdir / "bad.json").write_text(json.dumps({"eta": 0.5, "alphabet_size": 4, "symbols": [1, 1, 2]}))
    assert main(["verify-sync", "--file", "bad.json"]) == 1


def test_usage_errors_exit_two(workdir):
    assert main([]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["experiment", "--config", "missing.toml"]) == 2
    (workdir / "c.json").write_text(json.dumps({"kind": "nope"}))
    assert main(["build-codec", "--config", "c.json"]) == 2
