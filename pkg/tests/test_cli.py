import json

import numpy as np
import pytest

from bellscope.cli import main, run
from bellscope.core import pr_box
from bellscope.core.io import behavior_to_json, expression_from_json, write_json
from bellscope.quantum import model_to_json, singlet_chsh_model


@pytest.fixture
def files(tmp_path, tsirelson):
    out = {}
    for name, b in (("prbox", pr_box()), ("tsirelson", tsirelson)):
        p = tmp_path / f"{name}.json"
        write_json(p, behavior_to_json(b))
        out[name] = str(p)
    p = tmp_path / "model.json"
    write_json(p, model_to_json(singlet_chsh_model()))
    out["model"] = str(p)
    p = tmp_path / "edges.json"
    p.write_text(json.dumps([[0, 1], [1, 2], [2, 3]]))
    out["edges"] = str(p)
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    out["bad"] = str(p)
    return out


def test_bound_examples():
    r = run(["bound", "--expr", "chsh", "--set", "local"])
    assert r.code == 0 and r.payload["value"] == 2
    r = run(["bound", "--expr", "chsh", "--set", "quantum-upper"])
    assert r.code == 0 and r.payload["value"] == pytest.approx(2 * np.sqrt(2), abs=1e-6)
    assert run(["bound", "--expr", "chsh", "--set", "ns"]).payload["value"] == pytest.approx(4)
    r = run(["bound", "--expr", "chsh", "--set", "quantum-lower", "--restarts", "5"])
    assert r.payload["value"] == pytest.approx(2 * np.sqrt(2), abs=1e-6)
    r = run(["bound", "--expr", "svetlichny", "--set", "svetlichny"])
    assert r.payload["value"] == pytest.approx(4)
    r = run(["bound", "--expr", "chained", "--param", "d=2", "--param", "m=3", "--set", "local"])
    assert r.code == 0


def test_membership_prbox(files):
    r = run(["membership", "--set", "local", files["prbox"]])
    assert r.code == 0
    assert r.payload["inside"] is False
    cert = expression_from_json(r.payload["certificate"])
    assert r.payload["bound"] == pytest.approx(2)
    assert cert.coefficients @ pr_box().table == pytest.approx(4)
    assert run(["membership", "--set", "ns", files["prbox"]]).payload["inside"] is True
    assert run(["membership", "--set", "npa1", files["prbox"]]).payload["inside"] is False
    assert run(["membership", "--set", "q1", files["tsirelson"]]).payload["inside"] is True
    r = run(["membership", "--set", "npa1ab", "--verbose", files["tsirelson"]])
    assert r.payload["inside"] is True and "gamma" in r.payload


def test_exit_codes(files):
    assert run(["frobnicate"]).code == 1
    assert "usage" in run(["frobnicate"]).table
    assert run([]).code == 1
    assert run(["validate", "/nonexistent.json"]).code == 1
    assert run(["validate", files["bad"]]).code == 1
    assert run(["catalog", "show", "nope"]).code == 1
    assert run(["--tol", "sdp_max_iter=2", "bound", "--expr", "chsh", "--set", "quantum-upper"]).code == 2
    # a computed "outside" verdict is still a successful run
    assert run(["membership", files["prbox"]]).code == 0


def test_json_flag_roundtrip(files, capsys):
    for argv in (["validate", files["tsirelson"]], ["catalog", "show", "chsh"],
                 ["randomness", "--chsh", "2.8284271247461903"], ["gill", "--samples", "10000", "--eps", "0.5"],
                 ["graph-bell", "--edges", files["edges"], "--emit"],
                 ["quantum-value", "--model", files["model"], "--expr", "chsh"]):
        code = main(["--json"] + argv)
        out = capsys.readouterr().out
        assert code == 0
        obj = json.loads(out)
        assert obj == json.loads(json.dumps(run(argv).payload, default=float))


def test_json_17_digits(capsys):
    main(["--json", "bound", "--expr", "chsh", "--set", "quantum-upper"])
    out = json.loads(capsys.readouterr().out)
    assert out["value"] == pytest.approx(2 * np.sqrt(2), abs=1e-6)


def test_human_table(capsys):
    assert main(["bound", "--expr", "chsh", "--set", "local"]) == 0
    assert "value: 2" in capsys.readouterr().out


def test_quantum_value(files):
    r = run(["quantum-value", "--model", files["model"], "--expr", "chsh"])
    assert r.payload["value"] == pytest.approx(2 * np.sqrt(2), abs=1e-10)
    assert r.payload["evaluate"] == pytest.approx(r.payload["value"], abs=1e-10)
    assert r.payload["norm_bound"] == pytest.approx(2 * np.sqrt(2), abs=1e-10)


def test_seed_reproducibility():
    a = run(["--seed", "3", "simulate", "werner", "--samples", "20000"]).payload
    b = run(["--seed", "3", "simulate", "werner", "--samples", "20000"]).payload
    c = run(["--seed", "4", "simulate", "werner", "--samples", "20000"]).payload
    assert a == b and a != c
    a = run(["--seed", "1", "bound", "--expr", "i3322", "--set", "quantum-lower", "--restarts", "3"]).payload
    b = run(["--seed", "1", "--jobs", "2", "bound", "--expr", "i3322", "--set", "quantum-lower",
             "--restarts", "3"]).payload
    assert a["value"] == b["value"]


def test_simulate_commands():
    r = run(["simulate", "faking", "--samples", "100000", "--symmetrized"])
    assert r.code == 0 and r.payload["passed"]
    assert run(["simulate", "prbox-ip", "--x", "1011", "--y", "1101"]).payload["output"] == 0
    r = run(["simulate", "prbox-ic", "--bits", "011"])
    assert r.payload["guess"] == r.payload["expected"] == 1


def test_threshold_strength(files):
    r = run(["threshold", "--behavior", files["tsirelson"], "--assign", "0,0", "--tol", "1e-6"])
    lo, hi = r.payload["bracket"]
    assert lo <= 2 / (1 + np.sqrt(2)) <= hi and hi - lo <= 1e-6
    r = run(["strength", "--behavior", files["tsirelson"]])
    assert r.payload["kl_bits"] == pytest.approx(0.046, abs=0.005)


def test_catalog_list_show():
    names = run(["catalog", "list"]).payload["entries"]
    assert "chsh" in names and "i3322" in names
    e = expression_from_json(run(["catalog", "show", "cglmp", "--param", "d=3"]).payload)
    assert e.scenario.outputs == (3, 3)


def test_graph_bell(files):
    r = run(["graph-bell", "--edges", files["edges"]])
    assert r.payload["quantum_value"] == pytest.approx(16, abs=1e-8)
    assert r.payload["local_bound"] < 16


def test_scan_epr2_csv():
    r = run(["scan", "epr2", "--m-max", "3", "--restarts", "2"])
    lines = r.table.strip().splitlines()
    assert lines[0] == "m,w_max,upper" and len(lines) == 3


def test_tol_env_precedence(monkeypatch):
    from bellscope import config
    monkeypatch.setenv("BELLSCOPE_TOL", "lp_feas=1e-6")
    assert config.resolve().lp_feas == 1e-6
    assert config.resolve("lp_feas=1e-7").lp_feas == 1e-7
    monkeypatch.delenv("BELLSCOPE_TOL")
    assert config.resolve().lp_feas == 1e-8
