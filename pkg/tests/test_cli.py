import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from metaplectic.cli import CommandRequest, main, run

COMMANDS = {
    "datum": ["datum", "--family", "G", "--rank", "2"],
    "sharp": ["sharp", "--family", "A", "--rank", "1", "--n", "6"],
    "plancherel": ["plancherel", "--q", "7", "--n", "3"],
    "verify": ["verify", "--family", "A", "--rank", "2", "--q", "7", "--n", "2", "--suite", "all"],
    "chars": ["chars", "--family", "D", "--rank", "4", "--q", "7"],
}


def schema(name):
    text = resources.files("metaplectic").joinpath(f"schemas/{name}.schema.json").read_text()
    return json.loads(text)


def invoke(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", sorted(COMMANDS))
def test_output_validates_against_schema(name, capsys):
    code, out, _ = invoke(COMMANDS[name], capsys)
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, schema(name))
    assert payload["schema_version"] == "1.0" and payload["command"] == name


@pytest.mark.parametrize("name", sorted(COMMANDS))
def test_output_is_deterministic(name, capsys):
    first = invoke(COMMANDS[name], capsys)[1]
    assert invoke(COMMANDS[name], capsys)[1] == first


def test_help_exits_zero():
    proc = subprocess.run([sys.executable, "-m", "metaplectic", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "usage" in proc.stdout.lower()
    for sub in COMMANDS:
        proc = subprocess.run([sys.executable, "-m", "metaplectic", sub, "--help"],
                              capture_output=True, text=True)
        assert proc.returncode == 0


def test_sharp_rank_one(capsys):
    payload = json.loads(invoke(COMMANDS["sharp"], capsys)[1])
    assert payload["y_sharp"] == [["3"]] and payload["y_sharp_multiple_of_y"] == "3"
    assert payload["associated_isogeny"] == "adjoint"
    assert payload["inclusion_failures"] == []


def test_sharp_reports_inclusion_failure(capsys):
    code, out, err = invoke(["sharp", "--family", "B", "--rank", "2", "--n", "2"], capsys)
    payload = json.loads(out)
    assert code == 1 and payload["associated_datum"] is None
    assert payload["inclusion_failures"] and "inclusion check failed" in err
    jsonschema.validate(payload, schema("sharp"))
    code, out, _ = invoke(["sharp", "--family", "B", "--rank", "2", "--n", "2", "--modified"], capsys)
    assert code == 0 and json.loads(out)["associated_datum"] is not None


def test_plancherel_csv(capsys):
    code, out, _ = invoke(COMMANDS["plancherel"] + ["--format", "csv"], capsys)
    rows = out.splitlines()
    assert code == 0 and rows[0] == "q,n,s_point,type,order"
    assert "7,3,1/3,reducible,1" in rows and "7,3,0,irreducible,2" in rows


def test_chars_counts(capsys):
    payload = json.loads(invoke(COMMANDS["chars"], capsys)[1])
    assert payload["nonempty_count"] == 3
    assert [1, 3] in payload["subsets"] and [3, 4] in payload["subsets"]
    assert len(payload["gamma_solutions"]) == 4
    assert all(c["relation_holds"] for c in payload["characters"])


@pytest.mark.parametrize("argv, fragment", [
    (["sharp", "--family", "A", "--rank", "1", "--n", "0"], "--n"),
    (["sharp", "--family", "A", "--rank", "1"], "--n"),
    (["datum", "--family", "E", "--rank", "5"], "--family"),
    (["plancherel", "--q", "7"], "--n"),
    (["plancherel", "--q", "1", "--n", "2"], "--q"),
    (["verify", "--family", "A", "--rank", "1", "--q", "7", "--n", "4"], "--q/--n"),
    (["verify", "--family", "B", "--rank", "2", "--q", "7", "--n", "2", "--suite", "weyl"], "weyl"),
    (["chars", "--family", "A", "--rank", "3", "--q", "4"], "--q"),
])
def test_usage_errors(argv, fragment, capsys):
    code, _, err = invoke(argv, capsys)
    assert code == 2 and fragment in err


def test_argparse_errors_exit_two():
    with pytest.raises(SystemExit) as exc:
        main(["datum", "--family", "Z", "--rank", "2"])
    assert exc.value.code == 2


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text("# preset\nq = 13\nn=4\n")
    code, out, _ = invoke(["plancherel", "--config", str(cfg)], capsys)
    assert code == 0 and json.loads(out)["q"] == "13"
    code, out, _ = invoke(["plancherel", "--config", str(cfg), "--n", "2"], capsys)
    assert json.loads(out)["n"] == 2


@pytest.mark.parametrize("text", ["colour = red\n", "q\n", "q = seven\n"])
def test_bad_config(tmp_path, capsys, text):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(text)
    code, _, err = invoke(["plancherel", "--config", str(cfg), "--n", "2"], capsys)
    assert code == 2 and "--config" in err


def test_missing_config(capsys):
    assert invoke(["plancherel", "--config", "/nonexistent/x.cfg"], capsys)[0] == 2


def test_output_dir_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("METAPLECTIC_OUTPUT_DIR", str(tmp_path))
    code, out, _ = invoke(COMMANDS["datum"] + ["--output", "sub/g2.json"], capsys)
    assert code == 0 and out == ""
    payload = json.loads((tmp_path / "sub" / "g2.json").read_text())
    assert payload["invariant_form"] == [[6, -3], [-3, 2]]


def test_run_request_object(capsys):
    status = run(CommandRequest("plancherel", {"q": 5, "n": 1, "d": None, "format": "json",
                                               "output": None, "config": None}))
    assert status == 0
    assert json.loads(capsys.readouterr().out)["report"]["real_reducibility_points"] == ["-1", "1"]


def test_verification_failure_exit_one(monkeypatch, capsys):
    from metaplectic import cli
    from metaplectic.reports import VerificationReport

    def broken(m, **kw):
        rep = VerificationReport("forced")
        rep.clause("x").record(False, "witness")
        return rep

    monkeypatch.setattr(cli, "verify_commutator_axiom", broken)
    code, out, err = invoke(["verify", "--family", "A", "--rank", "1", "--q", "7", "--n", "3"], capsys)
    assert code == 1 and "witness" in err and json.loads(out)["ok"] is False
