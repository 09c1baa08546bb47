import json
import subprocess
import sys

import pytest

from partalg.cli import main
from partalg.io import serialize_algebra
from partalg.sets import example_three, example_three_full, power_set_algebra


@pytest.fixture
def files(tmp_path):
    def write(name, alg):
        path = tmp_path / name
        path.write_text(serialize_algebra(alg))
        return str(path)

    return {
        "power23": write("power23.alg", example_three()),
        "full": write("full.alg", example_three_full()),
        "meet": write("meet.alg", power_set_algebra({1, 2}, ("join", "meet", "zero"))),
        "dir": tmp_path,
    }


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def cli(*args, stdin=None):
    return subprocess.run([sys.executable, "-m", "partalg.cli", *args], input=stdin,
                          capture_output=True, text=True)


# -- verdicts ------------------------------------------------------------------------


def test_repcheck_power23(files, capsys):
    code, out, _ = run(["repcheck", files["power23"]], capsys)
    assert code == 1 and out.startswith("not representable")


def test_repcheck_full(files, capsys):
    code, out, _ = run(["repcheck", files["full"]], capsys)
    assert code == 0 and out.startswith("representable:")


def test_repcheck_json(files, capsys):
    code, out, _ = run(["repcheck", files["full"], "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["verdict"] == "representable"


def test_repcheck_inconclusive(files, capsys):
    gen = files["dir"] / "a33.alg"
    assert main(["gen", "A", "3", "3", "-o", str(gen)]) == 0
    code, out, _ = run(["repcheck", str(gen), "--cap", "2"], capsys)
    assert code == 3 and out.startswith("inconclusive")


def test_validate(files, capsys):
    assert run(["validate", files["full"]], capsys)[:2] == (0, "valid\n")
    bad = files["dir"] / "bad.alg"
    bad.write_text('{"carrier": ["a", "b", "c", "d"], "signature": ["join"], '
                   '"join": [["a", "b", "c"], ["a", "b", "d"]]}')
    code, out, _ = run(["validate", str(bad)], capsys)
    assert code == 1 and "not single-valued" in out


def test_game(files, capsys):
    code, out, _ = run(["game", files["power23"]], capsys)
    assert code == 1 and "forall wins" in out and "forall opens with" in out
    code, out, _ = run(["game", files["full"], "--rounds", "2"], capsys)
    assert code == 0 and out == "exists wins the 2-round game\n"


def test_game_strategy(files, capsys):
    code, out, _ = run(["game", files["full"], "--strategy"], capsys)
    assert code == 0 and out.startswith("rounds: omega")


def test_play_script(files, capsys):
    script = files["dir"] / "moves.txt"
    script.write_text("# exists answers\npick {1}\npick {2}\npick {3}\n" * 4)
    code, out, _ = run(["play", files["power23"], "--as", "exists", "--moves", str(script)], capsys)
    assert code == 1 and "forall wins" in out


def test_play_needs_terminal_or_script(files):
    res = cli("play", files["full"], stdin="")
    assert res.returncode == 2 and "--moves" in res.stderr


def test_rho_print_and_check(files, capsys):
    code, out, _ = run(["rho", "0"], capsys)
    assert (code, out) == (0, "T\n")
    assert run(["rho", "2", "--check", files["full"]], capsys)[:2] == (0, "holds\n")
    assert run(["rho", "3", "--check", files["power23"]], capsys)[:2] == (1, "fails\n")


def test_mu(capsys):
    code, out, _ = run(["rho", "1", "--mu", "x,y", ""], capsys)
    assert code == 0 and out.startswith("forall a_0,b_0.")


def test_translate(files, capsys):
    code, out, _ = run(["translate", "x + y = y + x"], capsys)
    assert code == 0 and "J(" in out
    code, out, _ = run(["translate", "x + y = y + x", "--check", files["full"]], capsys)
    assert (code, out) == (0, "totalised: holds; relational: holds\n")


def test_axioms_and_birkhoff(files, capsys):
    code, out, _ = run(["axioms", files["meet"]], capsys)
    assert (code, out) == (0, "AxJMeetZero: all axioms hold\n")
    code, out, _ = run(["birkhoff", files["meet"], "--format", "json"], capsys)
    assert code == 0 and len(json.loads(out)["base"]) == 2


def test_axioms_signature_mismatch(files, capsys):
    code, _, err = run(["axioms", files["meet"], "--suite", "AxKMeet"], capsys)
    assert code == 2 and "suite AxKMeet" in err


def test_gen_families(capsys):
    for family in ("X", "A", "Aminus", "B"):
        code, out, _ = run(["gen", family, "3", "3"], capsys)
        assert code == 0 and json.loads(out)["signature"]
    code, _, err = run(["gen", "X", "2", "3"], capsys)
    assert code == 2 and "m, n >= 3" in err


def test_gen_perm_needs_square(capsys):
    assert run(["gen", "perm", "3", "4"], capsys)[0] == 2


def test_equation(capsys):
    code, out, _ = run(["equation", "a + a = a"], capsys)
    assert code == 1 and "invalid" in out and "countermodel: a={0}" in out
    assert run(["equation", "a + b = b + a"], capsys)[0] == 0


def test_equation_syntax_error(capsys):
    code, _, err = run(["equation", "a + + b"], capsys)
    assert code == 2 and "column 5" in err


def test_countermodel(capsys):
    code, out, _ = run(["countermodel", "a + b = a", "--bound", "1"], capsys)
    assert (code, out) == (1, "countermodel: a={}, b={0}: left side {0}, right side {}\n")
    assert run(["countermodel", "a + b = b + a"], capsys)[0] == 0


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["repcheck"])
    assert exc.value.code == 2


def test_missing_file(capsys):
    code, _, err = run(["repcheck", "/nonexistent/x.alg"], capsys)
    assert code == 2 and "error" in err


def test_wrong_document_kind(files, capsys):
    rep = files["dir"] / "rep.json"
    assert main(["represent", files["full"], "-o", str(rep)]) == 0
    code, _, err = run(["repcheck", str(rep)], capsys)
    assert code == 2 and "expected an algebra document" in err
    code, _, err = run(["verify", files["full"], "--against", files["full"]], capsys)
    assert code == 2 and "expected a representation document" in err


# -- pipes ---------------------------------------------------------------------------


@pytest.mark.parametrize("m, n, code", [("3", "3", 0), ("3", "4", 1)])
def test_gen_A_pipe(m, n, code):
    alg = cli("gen", "A", m, n).stdout
    assert cli("repcheck", "-", stdin=alg).returncode == code


def test_gen_X_pipe():
    assert cli("repcheck", "-", stdin=cli("gen", "X", "3", "4").stdout).returncode == 0


def test_represent_verify_pipe(files):
    rep = cli("represent", files["full"])
    assert rep.returncode == 0
    res = cli("verify", "-", "--against", files["full"], "--lesssim-cap", "3", stdin=rep.stdout)
    assert res.returncode == 0 and res.stdout == "verified\n"


def test_pf_pipe(files):
    rep = cli("represent", files["full"], "--pf").stdout
    assert cli("verify", "-", "--against", files["full"], stdin=rep).returncode == 0


def test_perm_verifies_against_A33(files):
    a33 = files["dir"] / "a33.alg"
    a33.write_text(cli("gen", "A", "3", "3").stdout)
    res = cli("verify", "-", "--against", str(a33), "--lesssim-cap", "6", stdin=cli("gen", "perm", "3", "3").stdout)
    assert res.returncode == 0
