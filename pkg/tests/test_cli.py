import io
import json
import subprocess
import sys

import jsonschema
import pytest
from helpers import GOLDEN, PROBLEMS

from jetvar import render as R
from jetvar.cli import cmd_decompose, cmd_el, cmd_verify, main
from jetvar.errors import DuplicateName, OrderMismatch, ProblemSyntaxError, UnsupportedFormat
from jetvar.numcheck import make_report
from jetvar.parsing import parse_expr
from jetvar.problem import parse_problem_file
from jetvar.symexpr import JetSpace
from jetvar.vforms import VForm

OSC = (PROBLEMS / "oscillator.jv").read_text()
ERRORS = sorted((GOLDEN / "errors").glob("*.jv"))


def load(name):
    return parse_problem_file((PROBLEMS / f"{name}.jv").read_text())


def test_parse_oscillator_file():
    prob = parse_problem_file(OSC)
    assert prob.space.coords == ("x",) and prob.space.fields == ("u",)
    assert prob.order == 1 and prob.seed == 42 and prob.grid == 64 and prob.fd_step == 1e-5
    assert prob.lagrangian == parse_expr("(1/2)*u_x^2 - (1/2)*u^2", prob.space)
    assert set(prob.sections) == {"u"} and set(prob.variations) == {"u"}


def test_problem_file_errors():
    with pytest.raises(OrderMismatch) as err:
        parse_problem_file("coords x\nfield u\norder 1\nlagrangian u_xx\n")
    assert err.value.line == 4
    with pytest.raises(ProblemSyntaxError):
        parse_problem_file("coords x\nfield u\norder 1\n")
    with pytest.raises(DuplicateName):
        parse_problem_file("coords x\nfields u v\nfield v\norder 1\nlagrangian u\n")


def test_multi_field_file():
    prob = parse_problem_file("coords t\nfields q p\norder 1\nlagrangian p*q_t - (1/2)*p^2 - (1/2)*q^2\n")
    lines = cmd_el(prob).splitlines()
    assert [ln.split(" = ")[0] for ln in lines] == ["epsilon[q]", "epsilon[p]"]
    got = [parse_expr(ln.split(" = ")[1], prob.space) for ln in lines]
    assert got == [parse_expr("-p_t - q", prob.space), parse_expr("q_t - p", prob.space)]


@pytest.mark.parametrize("bad", ERRORS, ids=[p.stem for p in ERRORS])
def test_error_goldens(bad, capsys):
    assert main(["el", str(bad)]) == 2
    captured = capsys.readouterr()
    assert captured.out == ""
    assert captured.err == bad.with_suffix(".err").read_text()
    assert "line " in captured.err


def test_cmd_examples():
    osc = load("oscillator")
    assert cmd_el(osc) == "epsilon[u] = -(u_xx + u)"
    assert cmd_decompose(osc) == "epsilon[u] = -(u_xx + u)\nkappa = u_x du ⊗ 1"
    out, ok = cmd_verify(osc)
    assert ok and out.count("PASS") == 4


def test_latex_laplace():
    out = cmd_el(load("laplace"), "latex")
    assert out.replace(" ", "") == "-(u_{xx}+u_{yy})\\,du\\otimes dx\\wedge dy".replace(" ", "")


def test_iota_flag():
    bi = load("biharmonic")
    assert cmd_el(bi, iota="weighted") == cmd_el(bi) == "epsilon[u] = u_xxxx"
    lit = cmd_el(bi, iota="literal")
    assert lit.startswith("epsilon = ") and lit != cmd_el(bi)


def test_strategy_flag():
    prob = parse_problem_file("coords x y\nfield u\norder 2\nlagrangian u_xy^2\n")
    a = cmd_decompose(prob, strategy="min-axis")
    b = cmd_decompose(prob, strategy="max-axis")
    assert a.splitlines()[0] == b.splitlines()[0] == "epsilon[u] = 2*u_xxyy"
    assert a != b


@pytest.mark.parametrize("name", ["oscillator", "laplace", "biharmonic", "anharmonic"])
@pytest.mark.parametrize("cmd", ["el", "decompose", "verify"])
def test_json_matches_schema(name, cmd):
    path = GOLDEN / f"{name}.{cmd}.json"
    jsonschema.validate(json.loads(path.read_text()), R.SCHEMAS[cmd])


def test_schemas_are_valid():
    for schema in (R.VFORM_SCHEMA, R.REPORT_SCHEMA, *R.SCHEMAS.values()):
        jsonschema.Draft202012Validator.check_schema(schema)


def test_exit_code_on_failed_check(tmp_path):
    # a Lagrangian whose first variation cannot be resolved by a coarse FD step
    path = tmp_path / "stiff.jv"
    path.write_text("coords x\nfield u\norder 1\nlagrangian exp(10*u)\n"
                    "section u = sin(x)\nvariation u = cos(x)\nfd_step 0.5\n")
    assert main(["verify", str(path)]) == 1


def test_stdin_and_missing_file(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO(OSC))
    assert main(["el", "-"]) == 0
    assert capsys.readouterr().out == "epsilon[u] = -(u_xx + u)\n"
    assert main(["el", "/nonexistent/problem.jv"]) == 2


def test_timing_flag(capsys):
    assert main(["verify", str(PROBLEMS / "oscillator.jv"), "--format", "json", "--timing"]) == 0
    reports = json.loads(capsys.readouterr().out)["reports"]
    assert all(isinstance(r["runtime_ms"], float) for r in reports)


def test_verify_latex_unsupported(capsys):
    assert main(["verify", str(PROBLEMS / "oscillator.jv"), "--format", "latex"]) == 2
    assert "UnsupportedFormat" in capsys.readouterr().err


def test_render_dispatch():
    sp = JetSpace(("x",), ("u",), 2)
    assert R.render(VForm.zero(sp, 1, 1), "text") == "0"
    assert R.render(parse_expr("u_x", sp), "latex", sp) == "u_{x}"
    rep = make_report("r", 1.0, 1.0, 1e-6)
    jsonschema.validate(json.loads(R.render(rep, "json")), R.REPORT_SCHEMA)
    with pytest.raises(UnsupportedFormat):
        R.render(rep, "latex")
    with pytest.raises(UnsupportedFormat):
        R.render(VForm.zero(sp, 1, 1), "yaml")


def test_console_script_runs():
    res = subprocess.run(["jetvar", "el", str(PROBLEMS / "oscillator.jv")], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "epsilon[u] = -(u_xx + u)\n"
