from fractions import Fraction

import pytest

from efftop.cli import main, parse_open, UsageError


def call(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.splitlines(), out.err


def records(lines, kind):
    return [line.split("\t") for line in lines if line.split("\t")[1] == kind]


@pytest.mark.parametrize("point,code", [("1/2", 0), ("1", 2), ("1//2", 1)])
def test_member(capsys, point, code):
    got, lines, err = call(capsys, "member", "--space", "rationals", "--open", "basic:0;1",
                           "--point", point, "--fuel", "10000")
    assert got == code
    if code == 1:
        assert "position" in err


def test_member_reports_fuel(capsys):
    _, lines, _ = call(capsys, "member", "--open", "basic:0;1", "--point", "1", "--fuel", "777")
    assert records(lines, "member")[0][2] == "NOT_YET fuel_used=777"


@pytest.mark.parametrize("argv,code", [
    (["(0;1)", "(0;2)"], 0),
    (["--space", "unit-interval", "(1/2;2)", "(1/2;1)"], 3),
    (["--mode", "semidecide", "--fuel", "5000", "(0;1)", "(0;1)"], 2),
])
def test_incl(capsys, argv, code):
    assert call(capsys, "incl", *argv)[0] == code


def test_convert_spreen_to_lacombe(capsys):
    code, lines, _ = call(capsys, "convert", "--direction", "spreen-lacombe", "--open", "interval:0,1",
                          "--limit", "20")
    assert code == 0
    balls = records(lines, "ball")
    assert len(balls) == 20
    for _, _, payload in balls:
        c, r = (Fraction(s) for s in payload.split(";"))
        assert 0 <= c - r and c + r <= 1


def test_convert_lacombe_to_spreen_then_member(capsys):
    code, lines, _ = call(capsys, "convert", "--direction", "lacombe-spreen", "--open", "basic:0;1",
                          "--point", "1/3")
    assert code == 0 and records(lines, "ball")


def test_convert_nogina_needs_dense(capsys):
    code, _, err = call(capsys, "convert", "--direction", "nogina-lacombe", "--open", "basic:0;1")
    assert code == 1 and "--dense" in err


def test_convert_nogina(capsys):
    code, lines, _ = call(capsys, "convert", "--direction", "nogina-lacombe", "--dense", "default",
                          "--open", "basic:0;1", "--fuel", "300000", "--limit", "5")
    assert code == 0 and len(records(lines, "ball")) == 5


def test_convert_metric_directions(capsys):
    code, lines, _ = call(capsys, "convert", "--direction", "metric-spreen", "--open", "interval:0,1",
                          "--point", "1/4", "--limit", "3")
    assert code == 0 and records(lines, "ball")
    code, lines, _ = call(capsys, "convert", "--direction", "spreen-metric", "--open", "basic:0;1",
                          "--point", "1/2", "--limit", "4")
    radii = [Fraction(r[2]) for r in records(lines, "radius")]
    assert code == 0 and radii == sorted(radii) and radii[-1] < Fraction(1, 2)


@pytest.mark.parametrize("fn,phi,code", [
    ("identity", "eps", 0),
    ("square", "square-local", 0),
    ("square", "eps", 3),
    ("cube", "eps", 1),
])
def test_modulus(capsys, fn, phi, code):
    got, lines, _ = call(capsys, "modulus", "--function", fn, "--phi", phi, "--samples", "100")
    assert got == code
    if code == 3:
        witness = records(lines, "witness")[0][2]
        assert witness.startswith("x=10 ")


def test_demos(capsys):
    code, lines, _ = call(capsys, "demo", "theta-epsilon")
    assert code == 0 and all("equal=True" in r[2] for r in records(lines, "theta"))
    code, lines, _ = call(capsys, "demo", "square-formal-vs-actual")
    assert code == 0
    assert records(lines, "actual")[0][2].endswith("True")
    assert records(lines, "formal")[0][2].endswith("NO")
    code, lines, _ = call(capsys, "demo", "parity-oracle")
    assert code == 0 and records(lines, "lacombe")
    assert call(capsys, "demo", "nope")[0] == 1


def test_enumerate(capsys):
    code, lines, _ = call(capsys, "enumerate", "--open", "inter:(basic:0;1,basic:1/2;1)", "--point", "1/4",
                          "--limit", "3", "--fuel", "20000")
    assert code == 0 and len(records(lines, "ball")) == 3


def test_seed_is_echoed_and_output_replays(capsys):
    argv = ["modulus", "--function", "double", "--phi", "half-eps", "--samples", "50", "--seed", "9"]
    _, first, _ = call(capsys, *argv)
    _, second, _ = call(capsys, *argv)
    assert first == second
    assert "seed=9" in records(first, "config")[0][2]


def test_open_literal_parser():
    lit = parse_open("union:[basic:0;1,inter:(interval:0,2,basic:(1/2,1/2;1))]")
    assert lit.kind == "union" and lit.args[1].kind == "inter"
    assert lit.args[1].args[1].args == ("(1/2,1/2;1)",)
    for bad in ("union:[basic:0;1", "circle:0", "inter:(basic:0;1)", "basic:0;1 extra"):
        with pytest.raises(UsageError):
            parse_open(bad)


def test_usage_errors_exit_1(capsys):
    assert call(capsys, "member", "--open", "basic:0;1")[0] == 1
    assert call(capsys, "member", "--space", "nowhere", "--open", "basic:0;1", "--point", "0")[0] == 1
