import csv
import io
import json

import pytest

from treedecay.cli import cli_main, parse_sites
from treedecay.errors import DomainError


def run(capsys, *argv):
    code = cli_main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_sites():
    assert parse_sites("(1,1);(4,4)") == [(1, 1), (4, 4)]
    assert parse_sites("(0,0,1)") == [(0, 0, 1)]
    with pytest.raises(DomainError):
        parse_sites("1,1")
    with pytest.raises(DomainError):
        parse_sites("(a,1)")


def test_census(capsys):
    code, out, _ = run(capsys, "census", "--dim", "2", "--max-r", "8")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [int(r["N"]) for r in rows][:3] == [1, 6, 33] and len(rows) == 8


def test_verify_identity(capsys):
    code, out, _ = run(capsys, "verify-identity", "--n", "3", "--interior", "2x2", "--beta", "0.5")
    assert code == 0
    rep = json.loads(out)
    assert rep[0]["abs_diff"] < 1e-9 and rep[0]["n"] == 3


def test_decay(capsys, tmp_path):
    code, out, _ = run(capsys, "decay", "--n", "2", "--interior", "5x5", "--beta", "12",
                       "--sites", "(1,1);(4,4)")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["tau"] == "6" and rows[0]["satisfied"] == "True"
    path = tmp_path / "d.json"
    code, _, _ = run(capsys, "decay", "--n", "2", "--interior", "3x3", "--beta", "12",
                     "--output", str(path))
    assert code == 0 and json.loads(path.read_text())[0]["n"] == 2


def test_config_and_override(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"interior": "3x3", "n": 2, "beta_grid": [12.0, 15.0],
                               "tuples": [[[0, 0], [2, 2]]]}))
    code, out, _ = run(capsys, "decay", "--config", str(cfg))
    assert code == 0 and len(list(csv.DictReader(io.StringIO(out)))) == 2
    code, out, _ = run(capsys, "decay", "--config", str(cfg), "--beta", "13")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1 and rows[0]["beta"] == "13.0"


def test_other_subcommands(capsys):
    code, out, _ = run(capsys, "steiner", "--sites", "(0,0);(2,0);(1,2)", "--tree")
    assert code == 0 and json.loads(out)["tau"] == 4 and len(json.loads(out)["edges"]) == 4
    code, out, _ = run(capsys, "counterexample")
    assert code == 0 and json.loads(out)["drop"] == 16
    code, out, _ = run(capsys, "condense", "--interior", "3x3", "--beta", "1", "--sites", "(0,0);(2,2)")
    assert code == 0 and json.loads(out)[0]["passed"]


def test_failed_invariant_exit_1(capsys, monkeypatch):
    from treedecay import cli

    monkeypatch.setattr(cli, "run_counterexample", lambda *a: False)
    monkeypatch.setitem(cli.RUNNERS, "counterexample", cli.run_counterexample)
    code, _, _ = run(capsys, "counterexample")
    assert code == 1


def test_usage_errors(capsys):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "census", "--frobnicate")[0] == 2
    assert run(capsys, "decay", "--interior", "3x")[0] == 2
    assert run(capsys, "decay", "--sites", "nonsense")[0] == 2
    assert run(capsys, "census", "--dim", "2", "--max-r", "30")[0] == 2
    assert run(capsys, "decay", "--config", "/nonexistent.json")[0] == 2
