import csv
import io
import json
import math
from pathlib import Path

import numpy as np
import pytest

from cohbell.cli import main
from cohbell.experiments import WERNER_HEADER, WITNESS_HEADER, werner_rel_ent_closed_form
from cohbell.states import QState, save_state, singlet, werner

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def assert_csv_close(actual, expected):
    a, e = rows(actual), rows(expected)
    assert a[0] == e[0] and len(a) == len(e)
    for ra, re_ in zip(a[1:], e[1:]):
        for x, y in zip(ra, re_):
            if x in ("true", "false"):
                assert x == y
            else:
                assert float(x) == pytest.approx(float(y), abs=1e-9)


def test_reproduce_table(capsys):
    code, out, _ = run(capsys, "reproduce", "--format", "table")
    assert code == 0
    assert "Example1" in out and "8.82843" in out and "4.20175" in out
    assert "Example2" in out and "CHSH-opt" in out and "6.82843" in out and "3.20175" in out
    assert "FAIL" not in out


def test_reproduce_json(capsys):
    code, out, _ = run(capsys, "reproduce", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["passed"] is True
    ex2 = next(r for r in data["rows"] if r["scenario"] == "Example2")
    assert ex2["b_cl1"] == pytest.approx(10) and ex2["b_cr"] == pytest.approx(5)


def test_reproduce_failure_exit_code(capsys, monkeypatch):
    import cohbell.cli as cli
    from cohbell import experiments

    real = experiments.reproduce_all

    def broken():
        rep = real()
        rep.checks[0].actual += 1.0
        return rep

    monkeypatch.setattr(cli, "reproduce_all", broken)
    code, _, err = run(capsys, "reproduce")
    assert code == 1 and "mismatch" in err


def test_sweep_werner_csv_golden(capsys):
    code, out, _ = run(capsys, "sweep-werner", "--points", "201", "--format", "csv")
    assert code == 0
    table = rows(out)
    assert table[0] == list(WERNER_HEADER)
    assert len(table) == 202
    for r in table[1:]:
        p = float(r[0])
        assert float(r[1]) == pytest.approx(10 - 8 * p, abs=1e-8)
        assert float(r[2]) == pytest.approx(werner_rel_ent_closed_form(p), abs=1e-8)
    assert_csv_close(out, (GOLDEN / "werner_201.csv").read_text())
    assert "\r" not in out


def test_sweep_pure_golden(capsys):
    code, out, _ = run(capsys, "sweep-pure", "--points", "19", "--phi", "0.7")
    assert code == 0 and rows(out)[0] == list(WITNESS_HEADER)
    assert_csv_close(out, (GOLDEN / "witness_19.csv").read_text())


def test_sweep_werner_single_point_table(capsys):
    code, out, _ = run(capsys, "sweep-werner", "--p", "0.25", "--format", "table", "--measure", "l1")
    assert code == 0 and "b_cr " not in out.splitlines()[0]
    assert "0.25" in out


def test_sweep_werner_json(capsys):
    code, out, _ = run(capsys, "sweep-werner", "--points", "3", "--format", "json")
    data = json.loads(out)
    assert [d["params"]["p"] for d in data] == [0, 0.5, 1]


def test_witness(capsys):
    code, out, _ = run(capsys, "witness", "--theta", "1.5707963", "--phi", "0", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["detected"] is True
    assert data["b_cr"] == pytest.approx(5, abs=1e-9)
    code, out, _ = run(capsys, "witness", "--theta", "0", "--format", "csv")
    assert out.splitlines()[1].endswith(",false")


def test_witness_requires_theta(capsys):
    code, _, err = run(capsys, "witness")
    assert code == 2 and "--theta" in err


def test_optimize_json(capsys):
    code, out, _ = run(capsys, "optimize", "--measure", "both", "--restarts", "4", "--seed", "2",
                       "--format", "json")
    data = json.loads(out)
    assert code == 0 and [d["functional"] for d in data] == ["L1", "REL_ENT"]
    assert data[0]["best_value"] >= 10 - 1e-6


def test_optimize_deterministic(capsys):
    args = ("optimize", "--measure", "chsh", "--restarts", "3", "--seed", "9", "--format", "csv")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_chsh_command(capsys):
    code, out, _ = run(capsys, "chsh", "--format", "csv")
    table = {r[0]: r for r in rows(out)[1:]}
    assert float(table["chsh-optimal"][1]) == pytest.approx(2 * math.sqrt(2))
    assert table["chsh-optimal"][5] == "false" and table["example2"][5] == "true"


def test_state_file(capsys, tmp_path):
    path = tmp_path / "singlet.json"
    save_state(singlet(), path)
    code, out, _ = run(capsys, "chsh", "--state", str(path), "--quartet", "example2", "--format", "json")
    assert code == 0 and json.loads(out)[0]["b_cl1"] == pytest.approx(10)


@pytest.mark.parametrize(
    "mat,word",
    [(np.diag([0.5, 0.4, 0.0, 0.0]), "trace"), (np.triu(np.full((4, 4), 0.25)), "hermitian")],
)
def test_bad_state_file(capsys, tmp_path, mat, word):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"dim": 4, "re": mat.tolist(), "im": np.zeros((4, 4)).tolist()}))
    code, _, err = run(capsys, "optimize", "--state", str(path), "--restarts", "1")
    assert code == 2 and word in err


def test_unparseable_state_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{oops")
    code, _, err = run(capsys, "chsh", "--state", str(path))
    assert code == 2 and "malformed JSON" in err


def test_missing_state_file(capsys, tmp_path):
    code, _, err = run(capsys, "chsh", "--state", str(tmp_path / "none.json"))
    assert code == 2 and "cannot read" in err


def test_unknown_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sweep-werner", "--bogus"])
    assert exc.value.code == 2


def test_invalid_choice_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sweep-werner", "--format", "xml"])
    assert exc.value.code == 2


def test_out_file(capsys, tmp_path):
    path = tmp_path / "w.csv"
    code, out, _ = run(capsys, "sweep-werner", "--points", "5", "--out", str(path))
    assert code == 0 and out == ""
    assert path.read_bytes().count(b"\n") == 6


def test_emitted_state_json_round_trip(tmp_path):
    for s in (werner(0.3), singlet()):
        back = QState.from_json(s.to_json())
        assert back.allclose(s, atol=1e-12)


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "cohbell", "witness", "--theta", "1.0", "--format", "csv"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.startswith("theta,phi,b_cl1,b_cr,detected")
