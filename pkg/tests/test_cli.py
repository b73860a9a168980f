import json
import subprocess
import sys

import pytest

from minmodel.cli import FIXTURES, canonical_text, digest, load_fixture, main


def run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_chains_weight_nine(capsys):
    code, out, _ = run(capsys, "chains", "t4", "-w", "9")
    assert code == 0
    assert "[t|t3|t|t3|t] len=4 wt=9" in out.splitlines()[-1]


def test_chains_weight_one_lists_arrows(capsys):
    for name in FIXTURES:
        _, out, _ = run(capsys, "chains", name, "-w", "1")
        arrows = load_fixture(name).presentation.quiver.arrows
        assert [line.split()[0] for line in out.splitlines()] == [f"[{a.name}]" for a in arrows]


def test_chains_two_length_two(capsys):
    _, out, _ = run(capsys, "chains", "x2_xy", "-w", "3")
    assert sum(" len=2 " in line for line in out.splitlines()) == 2


def test_betti_five_units(capsys):
    _, out, _ = run(capsys, "betti", "t4", "-w", "9", "--format", "csv")
    assert out == "n,w,count\n1,1,1\n2,4,1\n3,5,1\n4,8,1\n5,9,1\n"


def test_model_json(capsys):
    _, out, _ = run(capsys, "model", "t4", "-w", "5", "--format", "json")
    recs = {r["generator"]: r for r in json.loads(out)}
    assert recs["[t]"]["terms"] == []
    assert recs["[t|t3|t]"]["terms"] == [{"sign": -1, "parts": ["[t]", "[t|t3]"]},
                                         {"sign": 1, "parts": ["[t|t3]", "[t]"]}]
    _, out, _ = run(capsys, "model", "a3", "--format", "json")
    recs = {r["generator"]: r for r in json.loads(out)}
    assert recs["[a|b]"]["terms"] == [{"sign": -1, "parts": ["[a]", "[b]"]}]


def test_ext_table(capsys):
    _, out, _ = run(capsys, "ext", "x2_xy", "-w", "6", "-n", "2")
    assert "mu2([x]^, [x]^) = -[x|x]^" in out.splitlines()


def test_hh_engines_agree(capsys):
    _, a, _ = run(capsys, "hh", "t2", "-d", "3", "-w", "0..6", "--format", "csv")
    _, b, _ = run(capsys, "hh", "t2", "-d", "3", "-w", "0..6", "--format", "csv", "--engine", "classical")
    assert a == b
    assert a.splitlines()[0] == "degree,weight,dim"


@pytest.mark.parametrize("name", FIXTURES)
def test_verify_fixtures_pass(capsys, name):
    code, out, _ = run(capsys, "verify", name, "-w", "7")
    assert code == 0, out


def test_verify_sabotage_fails_with_location(capsys):
    code, out, _ = run(capsys, "verify", "sabotage", "-w", "8", "--format", "json")
    assert code == 1
    certs = {c["suite"]: c for c in json.loads(out)}
    assert not certs["b_squared"]["passed"]
    assert certs["b_squared"]["counterexamples"][0]["chain"] == "[t|t3|t]"
    assert not certs["maurer_cartan"]["passed"]
    assert all(c["passed"] == (not c["counterexamples"]) for c in certs.values())


def test_cap_exceeded_is_exit_two(capsys):
    code, _, err = run(capsys, "hh", "x2_xy", "--cap", "1")
    assert code == 2 and err.startswith("limit:")


def test_input_errors_are_exit_three(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("arrows x\nrelations x\n")
    assert run(capsys, "chains", str(bad))[0] == 3
    assert run(capsys, "chains", str(tmp_path / "missing.txt"))[0] == 3
    assert run(capsys, "chains", "t4", "-w", "0")[0] == 3
    assert run(capsys, "chains", "t4", "-n", "1")[0] == 3


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.csv"
    run(capsys, "betti", "t4", "-w", "9", "--format", "csv", "-o", str(target))
    assert target.read_text().startswith("n,w,count\n")


def test_parallelism_does_not_change_output(capsys):
    _, a, _ = run(capsys, "verify", "xyx", "-w", "8", "-j", "1")
    _, b, _ = run(capsys, "verify", "xyx", "-w", "8", "-j", "3")
    assert a == b


def test_digest_is_stable():
    p = load_fixture("t4").presentation
    assert canonical_text(p) == "vertices 1; arrows t:1->1; relations t t t t"
    assert digest(p) == digest(load_fixture("sabotage").presentation)


def test_stdin_and_module_entry():
    res = subprocess.run([sys.executable, "-m", "minmodel", "betti", "-", "-w", "4"],
                         input="arrows t\nrelations t t\n", capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.splitlines() == [f"Tor^{n} weight {n}: 1" for n in range(1, 5)]


def test_signs_flag(capsys, tmp_path):
    mixed = tmp_path / "mixed.txt"
    mixed.write_text("arrows x, y\nrelations x x x x, x x y\n")
    assert run(capsys, "verify", str(mixed), "-w", "8", "--signs", "parity")[0] == 0
    assert run(capsys, "verify", str(mixed), "-w", "8")[0] == 1
    _, out, _ = run(capsys, "model", "t4", "-w", "5", "--signs", "parity")
    assert out.splitlines()[-1] == "b [t|t3|t] = +[t] (x) [t|t3] -[t|t3] (x) [t]"
