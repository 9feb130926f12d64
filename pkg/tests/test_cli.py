import io
import json
import subprocess
import sys

import pytest

from bergman_toeplitz.cli import main

SIX_DIM = {
    "schema": "btc/1",
    "m": [4, 4, 4, 4, 4, 4],
    "first": {"l": "3", "p": [0, 2, 0, 1, 1, 4], "q": [0, 1, 1, 0, 1, 1]},
    "second": {"l": "2", "p": [2, 0, 0, 8, 2, 4], "q": [3, 0, 2, 0, 2, 1]},
}


def run(monkeypatch, capsys, argv, payload=None):
    if payload is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(payload if isinstance(payload, str) else json.dumps(payload)))
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_decide_commute(monkeypatch, capsys):
    code, out, _ = run(monkeypatch, capsys, ["decide-commute"], SIX_DIM)
    doc = json.loads(out)
    assert code == 0
    assert doc["answer"] == "Yes" and doc["mode"] == "Exact"
    assert doc["triviality"]["non_trivial"] is True


def test_exit_verdict(monkeypatch, capsys):
    no = {**SIX_DIM, "second": {**SIX_DIM["second"], "l": "5/2"}}
    assert run(monkeypatch, capsys, ["decide-commute", "--exit-verdict"], SIX_DIM)[0] == 0
    code, out, _ = run(monkeypatch, capsys, ["decide-commute", "--exit-verdict"], no)
    assert code == 1 and json.loads(out)["answer"] == "No"
    assert run(monkeypatch, capsys, ["decide-commute"], no)[0] == 0


def test_decide_semicommute(monkeypatch, capsys):
    payload = {
        "schema": "btc/1",
        "m": [1, 1],
        "first": {"l": 1, "p": [1, 0], "q": [1, 1]},
        "second": {"l": 3, "p": [2, 0], "q": [0, 0]},
    }
    code, out, _ = run(monkeypatch, capsys, ["decide-semicommute", "--exit-verdict"], payload)
    assert code == 0 and json.loads(out)["answer"] == "Yes"


def test_float_radial_exponent(monkeypatch, capsys):
    payload = {**SIX_DIM, "first": {**SIX_DIM["first"], "l": {"float": 3.0}}}
    code, out, _ = run(monkeypatch, capsys, ["decide-commute"], payload)
    doc = json.loads(out)
    assert code == 0 and doc["mode"] == "Numeric" and doc["answer"] == "Yes"


def test_matrix_identity(monkeypatch, capsys):
    payload = {"schema": "btc/1", "m": [1, 1], "symbol": {"l": "0", "p": [0, 0], "q": [0, 0]}}
    code, out, _ = run(monkeypatch, capsys, ["matrix", "--truncation", "N=2"], payload)
    doc = json.loads(out)
    assert code == 0
    entries = doc["entries"]
    assert len(entries) == 9
    for entry in entries:
        assert entry["source"] == entry["target"]
        assert entry["coeff"] == pytest.approx(1.0, rel=1e-12)


def test_matrix_commutator_from_payload_truncation(monkeypatch, capsys):
    payload = {**SIX_DIM, "kind": "commutator", "truncation": "D=1"}
    code, out, _ = run(monkeypatch, capsys, ["matrix"], payload)
    assert code == 0 and "entries" in json.loads(out)
    payload = {key: value for key, value in payload.items() if key != "truncation"}
    assert run(monkeypatch, capsys, ["matrix"], payload)[0] == 2


@pytest.mark.parametrize(
    "payload",
    [
        {**SIX_DIM, "extra": 1},
        {**SIX_DIM, "schema": "btc/2"},
        {**SIX_DIM, "m": [4, 4, 4]},
        {**SIX_DIM, "first": {"l": "3", "p": [0, -2, 0, 1, 1, 4], "q": [0, 1, 1, 0, 1, 1]}},
        {**SIX_DIM, "first": {"l": "3/0", "p": [0, 2, 0, 1, 1, 4], "q": [0, 1, 1, 0, 1, 1]}},
        "{not json",
    ],
)
def test_validation_errors(monkeypatch, capsys, payload):
    code, out, _ = run(monkeypatch, capsys, ["decide-commute"], payload)
    assert code == 2
    assert json.loads(out)["error"] == "validation"


def test_oracle_needs_seed(monkeypatch, capsys):
    payload = {"schema": "btc/1", "m": [1, 1], "symbol": {"l": "2", "p": [1, 0], "q": [1, 0]}, "beta": [1, 0]}
    assert run(monkeypatch, capsys, ["oracle"], payload)[0] == 2
    assert run(monkeypatch, capsys, ["oracle", "--seed", "xyz"], payload)[0] == 2
    code, out, _ = run(monkeypatch, capsys, ["oracle", "--seed", "5EED", "--samples", "100000"], payload)
    doc = json.loads(out)
    assert code == 0
    assert doc["closed_form"] == pytest.approx(0.5)
    assert abs(doc["oracle"]["estimate"] - 0.5) <= 4 * doc["oracle"]["stderr"]


def test_oracle_output_independent_of_threads(monkeypatch, capsys):
    payload = {"schema": "btc/1", "m": [2, 1], "symbol": {"l": "3", "p": [1, 1], "q": [0, 1]}, "beta": [1, 0]}
    outs = {
        run(monkeypatch, capsys, ["oracle", "--seed", "1", "--samples", "300000", "--threads", t], payload)[1]
        for t in ("1", "4", "8")
    }
    assert len(outs) == 1


def test_search_stream(monkeypatch, capsys):
    payload = {"schema": "btc/1", "kind": "commute", "m": [1, 1], "max_entry": 2, "radial_cap": 4, "non_trivial": True}
    outs = set()
    for t in ("1", "4"):
        code, out, err = run(monkeypatch, capsys, ["search", "--threads", t], payload)
        assert code == 0
        assert json.loads(err)["cardinality"] == 81**2 * 25
        outs.add(out)
    assert len(outs) == 1
    lines = out.splitlines()
    assert lines
    for line in lines:
        rec = json.loads(line)
        assert rec["triviality"]["non_trivial"] is True


def test_search_semicommute(monkeypatch, capsys):
    payload = {
        "schema": "btc/1",
        "kind": "semicommute",
        "m": [1, 1],
        "max_entry": 1,
        "radial_cap": 2,
        "exclude_zero_p": True,
        "exclude_zero_t": True,
    }
    code, out, _ = run(monkeypatch, capsys, ["search"], payload)
    assert code == 0 and out == ""


def test_verify_examples(monkeypatch, capsys):
    code, out, _ = run(monkeypatch, capsys, ["verify-examples"])
    doc = json.loads(out)
    assert code == 0
    names = {rec["fixture"] for rec in doc["fixtures"]}
    assert {"weighted_six_dim", "ball_reference_l7_k4", "ball_reference_l9_k12", "monomial_special_case"} <= names
    failing = {rec["fixture"] for rec in doc["fixtures"] if not rec["pass"]}
    # the T = 1 members of the families reduce to predictable cases
    assert failing == {"ball_family1_T1", "ball_family2_T1", "ball_family3_T1"}
    assert run(monkeypatch, capsys, ["verify-examples", "--exit-verdict"])[0] == 1


def test_output_file(monkeypatch, capsys, tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = run(monkeypatch, capsys, ["decide-commute", "--output", str(target)], SIX_DIM)
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["answer"] == "Yes"


def test_console_script_entry_point(tmp_path):
    src = tmp_path / "in.json"
    src.write_text(json.dumps(SIX_DIM))
    proc = subprocess.run(
        [sys.executable, "-m", "bergman_toeplitz.cli", "decide-commute", "--input", str(src)],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["answer"] == "Yes"
