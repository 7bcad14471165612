import json

import pytest

import cli
from services import core
from services.core import Triple, window
from services.endo import pi_power


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out.strip(), captured.err.strip()


def test_mul(capsys):
    assert run(capsys, "mul", "(2,1,[0))", "(3,4,[1))") == (0, "(4,4,[1))", "")


def test_mul_json(capsys):
    code, out, _ = run(capsys, "--json", "mul", "(1,3,[1))", "(2,5,[0))")
    assert code == 0
    assert json.loads(out) == {"result": {"i": 1, "j": 6, "f": 1}, "text": "(1,6,[1))"}


def test_json_flag_after_verb(capsys):
    code, out, _ = run(capsys, "inv", "(2,5,[1))", "--json")
    assert code == 0
    assert json.loads(out)["text"] == "(5,2,[1))"


def test_mul_with_family(capsys):
    code, out, _ = run(capsys, "mul", "0", "(1,1,[2))", "--family", "0,1,2,empty")
    assert (code, out) == (0, "0")


def test_boolean_verbs(capsys):
    assert run(capsys, "idem", "(3,3,[1))")[1] == "true"
    assert run(capsys, "idem", "(2,3,[0))")[1] == "false"
    assert run(capsys, "leq", "(0,0,[1))", "(0,0,[0))")[1] == "true"
    assert run(capsys, "green", "(2,3,[0))", "(2,5,[0))", "--relation", "R")[1] == "true"
    assert run(capsys, "green", "(2,3,[0))", "(2,3,[1))", "--relation", "R")[1] == "false"


def test_endo_apply_and_compose(capsys):
    assert run(capsys, "endo-apply", "--expr", "delta[2]", "(1,2,[1))")[1] == "(4,6,[0))"
    assert run(capsys, "endo-compose", "gamma[2]", "gamma[3]")[1] == "gamma[6]"
    assert run(capsys, "endo-compose", "w^2", "w^3")[1] == "w^5"


def test_endo_factor(capsys):
    code, out, _ = run(capsys, "endo-factor", "--expr", "alpha[2,1];w^3")
    assert code == 0
    assert out.splitlines() == ["alpha[2,1] ; w^3", "s=1 p=1 n=3"]


def test_endo_factor_json(capsys):
    code, out, _ = run(capsys, "--json", "endo-factor", "--expr", "chi[2,1]")
    data = json.loads(out)
    assert (data["s"], data["p"], data["n"]) == (2, 1, 5)
    assert data["monoid_part"]["kind"] == "chi"
    assert data["chi"] == {"s": 2, "q": 1}


def test_endo_factor_json_without_chi(capsys):
    code, out, _ = run(capsys, "--json", "endo-factor", "--expr", "gamma[2];w^4")
    data = json.loads(out)
    assert code == 0
    assert (data["s"], data["p"], data["n"], data["text"]) == (2, 0, 4, "gamma[2] ; w^4")
    assert "chi" not in data


def test_endo_classify(capsys, tmp_path):
    path = tmp_path / "pi.json"
    e = pi_power(3)
    path.write_text(json.dumps([{"from": list(x), "to": list(e(x))} for x in window(4)]), encoding="utf-8")
    assert run(capsys, "endo-classify", "--map", str(path)) == (0, "w^3", "")


def test_endo_classify_rejects_small_window(capsys, tmp_path):
    path = tmp_path / "small.json"
    path.write_text(json.dumps([{"from": list(x), "to": list(x)} for x in window(1)]), encoding="utf-8")
    code, _, err = run(capsys, "endo-classify", "--map", str(path))
    assert code == 2
    assert "N ≥ 2" in err


def test_family_check(capsys):
    assert run(capsys, "family-check", "0,1")[1] == "ω-closed"
    assert run(capsys, "family-check", "0,2")[1] == "not ω-closed: witness [0)∩(−1+[2)) = [1)"


def test_family_check_with_huge_tail_index(capsys):
    code, out, _ = run(capsys, "family-check", "0,1,2,1000000000")
    assert code == 0
    assert out == "not ω-closed: witness [2)∩(−1+[1000000000)) = [999999999)"


def test_family_check_json_echoes_family(capsys):
    _, out, _ = run(capsys, "--json", "family-check", "2,0,1,empty")
    assert json.loads(out) == {
        "closed": True, "includes_empty": True, "witness": None, "family": "0,1,2,empty",
    }
    _, out, _ = run(capsys, "--json", "family-check", "0,3")
    assert "family" not in json.loads(out)


def test_text_output_round_trips(capsys):
    _, out, _ = run(capsys, "endo-compose", "beta[3,2];w^1", "alpha[2,1]")
    _, again, _ = run(capsys, "endo-compose", out, "id")
    assert again == out


@pytest.mark.parametrize("argv", [
    ["mul", "(1,2,[3))", "(0,0,[0))"],
    ["endo-factor", "--expr", "beta[2,0]"],
    ["endo-apply", "--expr", "w^1", "(1,2"],
    ["nonsense"],
    ["mul", "(0,0,[0))"],
    ["verify", "--window", "1"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_verify_small_window(capsys):
    code, out, _ = run(capsys, "verify", "--window", "3")
    assert code == 0
    assert out.splitlines()[0].startswith("ok   associativity N=3")
    assert "FAIL" not in out


def test_verify_exits_1_under_mutation(capsys, monkeypatch):
    original = core.multiply

    def mutated(x, y, fam=core.F2):
        if isinstance(x, Triple) and isinstance(y, Triple) and x.j + 1 == y.i:
            return Triple(x.i, y.j, max(x.f, y.f))
        return original(x, y, fam)

    monkeypatch.setattr(core, "multiply", mutated)
    code, out, _ = run(capsys, "--json", "verify", "--window", "2")
    assert code == 1
    reports = [json.loads(line) for line in out.splitlines()]
    assert any(not r["ok"] for r in reports)
    assert all({"law", "ok", "checked", "skipped", "violations"} <= set(r) for r in reports)


def test_verify_default_bounds(capsys):
    code, out, _ = run(capsys, "--json", "verify")
    assert code == 0
    reports = [json.loads(line) for line in out.splitlines()]
    assert reports
    assert all(r["ok"] for r in reports)
    assert any(r["law"].startswith("composition coherence N=8 forms=150") for r in reports)
