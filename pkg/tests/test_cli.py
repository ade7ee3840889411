import json

import pytest

from ladderalg import cli
from ladderalg.verify import CAPS, RunConfig, TARGETS, run_target, sample_theta


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_emit_dims_text(capsys):
    code, out, _ = run(capsys, "emit", "dims", "--model", "deformed_square", "--n", "3")
    assert code == 0
    assert out.splitlines() == ["# schema 1: dims deformed_square n=3", "dims: (1, 6, 8, 2)", "total: 17"]


def test_emit_dims_json_and_lattice(capsys):
    code, out, _ = run(capsys, "emit", "dims", "--model", "deformed_square", "--n", "3", "--format", "json")
    data = json.loads(out)
    assert data["schema"] == 1 and data["dims"] == [1, 6, 8, 2]
    code, out, _ = run(capsys, "emit", "dims", "--model", "twisted_square", "--n", "3", "--format", "csv")
    assert out == "# schema 1: dims\ndegree,dim\n0,1\n1,6\n2,8\n3,2\n"


def test_emit_table_csv(capsys):
    code, out, _ = run(capsys, "emit", "table", "--model", "tri3", "--n", "3", "--format", "csv")
    assert code == 0
    assert out == "# schema 1: table cyclic_tri3 n=3\nweight,0,1,2,3\n1,,3,3,\n0,1,3,9,3\n-1,,3,3,\n"


def test_emit_character_json(capsys):
    code, out, _ = run(capsys, "emit", "character", "--N", "0", "--qmax", "8", "--format", "json")
    data = json.loads(out)
    assert data["schema"] == 1 and data["N"] == 0
    assert data["series"]["window"] == {"q_max": 8, "t_min": -3, "t_max": 3}
    assert {"q": 0, "t": 0, "c": "1"} in data["series"]["terms"]


def test_emit_fock_character(capsys):
    code, out, _ = run(capsys, "emit", "character", "--model", "fock", "--wmax", "3", "--t", "1")
    assert code == 0 and "t^0: 1q^0 2q^1 4q^2 8q^3" in out


def test_emit_statsum(capsys):
    code, out, _ = run(capsys, "emit", "statsum", "--qmax", "5", "--t", "1")
    assert "matches_closed_form: True" in out and "t^0: 1q^0 2q^1 4q^2 8q^3 14q^4 24q^5" in out
    code, out, _ = run(capsys, "emit", "statsum", "--model", "tri3", "--qmax", "4", "--t", "1", "--format", "json")
    data = json.loads(out)
    assert data["matches_closed_form"] is True and data["sectors"][0] == {"C": -1, "U": 1, "count": 1}
    code, out, _ = run(capsys, "emit", "statsum", "--N", "2", "--qmax", "6", "--tmin", "-1", "--tmax", "2")
    assert "matches_closed_form: True" in out


def test_emit_euler_and_cohomology(capsys):
    code, out, _ = run(capsys, "emit", "euler", "--model", "mleg", "--m", "3", "--n", "3", "--format", "json")
    data = json.loads(out)
    assert data["graded_euler_f"] == [{"q": -1, "c": -1}, {"q": 0, "c": 3}, {"q": 1, "c": -1}]
    code, out, _ = run(capsys, "emit", "cohomology", "--n", "5", "--format", "json")
    data = json.loads(out)
    assert data["h"] == [0, 0, 0, 1, 0, 0] and data["euler"] == -1
    code, out, _ = run(capsys, "emit", "cohomology", "--model", "cyclic_tri3", "--n", "2", "--format", "csv")
    assert out.splitlines()[1] == "degree,dim,rank,kernel,h"


def test_verify_prop9(capsys):
    code, out, _ = run(capsys, "verify", "prop9")
    assert code == 0
    assert "[PASS] prop9: E_q^f(3 legs, 3 columns) = 3 - q - q^-1" in out
    assert out.splitlines()[-1] == "OK: 4 checks, 0 failures, 0 known issues"


def test_verify_prop1_window(capsys):
    code, out, _ = run(capsys, "verify", "prop1", "--qmax", "12", "--t", "4", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["passed"] and data["reports"][0]["name"] == "prop1"


def test_deterministic_output(capsys):
    argv = ["verify", "prop10", "--seed", "7", "--format", "json"]
    a = run(capsys, *argv)[1]
    b = run(capsys, *argv)[1]
    assert a == b
    c = run(capsys, "verify", "prop10", "--seed", "8", "--format", "json")[1]
    assert c != a  # the seed is recorded in the labels


def test_caps_and_force(capsys):
    code, out, err = run(capsys, "emit", "cohomology", "--n", "12")
    assert code == 2 and "exceeds cap" in err and out == ""
    code, _, err = run(capsys, "emit", "character", "--model", "fock", "--wmax", "20")
    assert code == 2
    code, _, err = run(capsys, "emit", "statsum", "--qmax", "61")
    assert code == 2
    code, out, _ = run(capsys, "emit", "dims", "--model", "twisted_square", "--n", "12", "--force")
    assert code == 0 and out.startswith("# schema 1: dims twisted_square n=12")


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "prop99"])
    assert exc.value.code == 2
    code, _, err = run(capsys, "emit", "statsum", "--model", "hexagon")
    assert code == 2 and "statsum models" in err


def test_out_file(tmp_path, capsys):
    target = tmp_path / "dims.json"
    code, out, _ = run(capsys, "emit", "dims", "--n", "2", "--format", "json", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["dims"] == [1, 4, 2]


def test_failing_report_sets_exit_one(capsys, monkeypatch):
    from ladderalg import verify
    from ladderalg.report import Report

    def broken(cfg):
        rep = Report("broken")
        rep.equal("one is two", 1, 2)
        return rep

    monkeypatch.setitem(verify.TARGETS, "prop9", broken)
    code, out, _ = run(capsys, "verify", "prop9")
    assert code == 1 and "[FAIL] broken: one is two" in out and out.splitlines()[-1].startswith("FAILED")


def test_run_target_errors():
    with pytest.raises(KeyError):
        run_target("nope", RunConfig())
    assert set(TARGETS) >= {"prop1", "lemma1", "prop2", "prop3", "prop4", "lemma2", "lemma3", "prop5",
                            "prop6", "prop7", "prop8", "prop9", "prop10", "jacobi", "remark"}
    assert CAPS == {"n": 9, "w": 12, "q": 60}


def test_sample_theta():
    import random
    rng = random.Random(3)
    for _ in range(20):
        w = sample_theta(4, rng)
        assert len(w) == 4 and w[0] == 0 and all(-5 <= v <= 5 for v in w)
