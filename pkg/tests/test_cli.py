import json

import pytest

from metabelian.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_json(capsys):
    code, out, _ = call(capsys, "eval", "-n", "3", "--format", "json", "[x2, 3 x1]")
    data = json.loads(out)
    assert code == 0
    assert data["exponents"] == [0, 0, 0]
    assert data["element"].startswith("[x")


def test_depth_of_mu_image_deviation(capsys):
    img = "x1^-1*x1*[x1^-1,[x1,[x2,x3]]]"
    code, out, _ = call(capsys, "depth", "--rank", "3", img)
    assert code == 0 and out.strip() == "4"
    code, out, _ = call(capsys, "depth", "-n", "4", "--zoo", "mu")
    assert code == 0 and "4" in out


def test_jacobian_and_invert(capsys):
    code, out, _ = call(capsys, "jacobian", "-n", "3", "--format", "json", "--zoo", "pi 1 2")
    assert code == 0
    assert "a2^-1" in json.dumps(json.loads(out))
    code, out, _ = call(capsys, "invert", "-n", "3", "x1*[x1,x2];x2;x3")
    assert code == 0 and "x1" in out


def test_invert_non_automorphism_fails(capsys):
    code, _, err = call(capsys, "invert", "-n", "4", "--zoo", "eta 4")
    assert code == 1 and err


def test_chi_and_act(capsys):
    code, out, _ = call(capsys, "chi", "-n", "4", "-c", "3", "--format", "json", "--zoo", "tau 1 2,3,3")
    assert code == 0 and json.loads(out)
    code, out, _ = call(capsys, "act", "-n", "4", "-c", "3", "--matrix", "1,1,0,0;0,1,0,0;0,0,1,0;0,0,0,1",
                        "--zoo", "tau 1 2,3,3")
    assert code == 0


def test_basis_and_ranks(capsys):
    code, out, _ = call(capsys, "basis", "-n", "3", "-c", "3", "--format", "json")
    assert code == 0 and len(json.loads(out)["basis"]) == 8
    code, out, _ = call(capsys, "ranks", "--rank", "4", "--weight", "3")
    assert code == 0
    for number in ("20", "80", "70", "10"):
        assert number in out


def test_out_file(tmp_path, capsys):
    target = tmp_path / "basis.txt"
    code, out, _ = call(capsys, "basis", "-n", "2", "-c", "3", "--out", str(target))
    assert code == 0 and target.read_text().strip()


def test_rank_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("METABELIAN_RANK", "3")
    code, out, _ = call(capsys, "eval", "x3")
    assert code == 0 and "x3" in out


@pytest.mark.parametrize("argv", [
    ["eval", "-n", "3", "x1 *"],
    ["eval", "-n", "3", "x7"],
    ["depth", "-n", "3", "--zoo", "nothing"],
    ["act", "-n", "2", "--matrix", "1,2;2,4", "--zoo", "pi 1 2"],
    ["frobnicate"],
])
def test_usage_errors_exit_two(argv, capsys):
    with pytest.raises(SystemExit) as info:
        code = run(argv)
        raise SystemExit(code)
    assert info.value.code == 2


def test_verify_suite_json_and_exit_code(capsys):
    code, out, _ = call(capsys, "verify-suite", "-n", "4", "-c", "2", "--samples", "5", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert all(set(r) == {"check", "params", "status", "witness", "variant", "millis"} for r in data)
