import json

import pytest

from topoctrl.algorithms.base import sidecar_path
from topoctrl.cli import main
from topoctrl.pathloss import GenConfig, PropagationConfig
from topoctrl.verify import run_verify


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "g.json").write_text(json.dumps(GenConfig(30, 1).to_dict()))
    (tmp_path / "u.json").write_text(json.dumps(GenConfig(30, 1, PropagationConfig.uniform(3.1)).to_dict()))
    return tmp_path


def test_gen_run_eval(workdir, capsys):
    assert main(["gen", "--config", "g.json", "--seed", "4", "--out", "net.json"]) == 0
    assert main(["run", "net.json", "--algo", "stc", "--out", "stc.csv"]) == 0
    assert "cover_connected=True" in capsys.readouterr().out
    lines = (workdir / "stc.csv").read_text().splitlines()
    assert lines[0] == "u,v"
    side = json.loads(sidecar_path(workdir / "stc.csv").read_text())
    assert side["algorithm"] == "stc" and side["seed"] == 4
    assert main(["eval", "net.json", "--topology", "stc.csv", "--out", "m.json"]) == 0
    via_algo = main(["eval", "net.json", "--algo", "stc", "--out", "m2.json"])
    assert via_algo == 0
    a = json.loads((workdir / "m.json").read_text())
    b = json.loads((workdir / "m2.json").read_text())
    assert a["avg_power_ratio"] == b["avg_power_ratio"]


def test_khop_flag(workdir, capsys):
    main(["gen", "--config", "g.json", "--out", "net.json"])
    assert main(["run", "net.json", "--algo", "khop", "--k", "5"]) == 0
    assert '"k": 5' in capsys.readouterr().out


def test_cone_control_rejects_gaussian(workdir):
    main(["gen", "--config", "g.json", "--out", "net.json"])
    assert main(["run", "net.json", "--algo", "opt-cbtc"]) == 4
    main(["gen", "--config", "u.json", "--out", "unet.json"])
    assert main(["run", "unet.json", "--algo", "opt-cbtc"]) == 0


def test_config_errors(workdir):
    (workdir / "bad.json").write_text(json.dumps({"n_nodes": 10}))
    assert main(["gen", "--config", "bad.json", "--out", "x.json"]) == 2
    (workdir / "broken.json").write_text('{"nodes": []}')
    assert main(["run", "broken.json", "--algo", "stc"]) == 2
    assert main(["eval", "broken.json"]) == 2


def test_missing_file(workdir):
    assert main(["run", "nope.json", "--algo", "stc"]) == 3


def test_exp_writes_csv_and_metadata(workdir):
    assert main(["exp", "--id", "4", "--trials", "1", "--config", "g.json", "--power-only", "--out", "e4.csv"]) == 0
    assert len((workdir / "e4.csv").read_text().splitlines()) == 6
    meta = json.loads((workdir / "e4.json").read_text())
    assert meta["trials"] == 1 and meta["base_config"]["n_nodes"] == 30


def test_verify_exit_codes(capsys):
    assert main(["verify", "--trials", "2"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 5


def test_mutation_is_caught():
    report = run_verify(trials=6, seed=0, mutation="skip-backward", n_nodes=30, cbtc_nodes=40)
    oracle = [r for r in report.results if r.name == "oracle-equivalence"][0]
    assert not oracle.ok and oracle.witness_seed is not None
    assert main(["verify", "--trials", "6", "--mutation", "skip-backward"]) == 1
