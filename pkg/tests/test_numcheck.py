import math

import numpy as np
import pytest
from helpers import golden_lagrangian, top_form

from jetvar.numcheck import (
    CheckReport,
    Grid,
    action,
    exact_term_integral,
    fd_action_derivative,
    make_report,
    verify_first_variation,
    verify_green,
)
from jetvar.parsing import parse_expr
from jetvar.randgen import random_section, random_variation, rng_from
from jetvar.symexpr import ONE, JetSpace, cos, sin, xvar
from jetvar.vforms import Section, VerticalField, VForm

SP1 = JetSpace(("x",), ("u",), 4)
SP2 = JetSpace(("x", "y"), ("u",), 4)
SIN = Section(SP1, (sin(xvar(0)),))


def test_grid_quadrature_is_spectral():
    g = Grid(1, 16)
    assert g.integrate(np.ones(16)) == pytest.approx(2 * math.pi, abs=1e-12)
    assert g.integrate(np.cos(3 * g.axis) ** 2) == pytest.approx(math.pi, abs=1e-12)
    g2 = Grid(2, 8)
    assert g2.integrate(np.sin(g2.points[0]) ** 2 * np.cos(g2.points[1]) ** 2) == pytest.approx(math.pi ** 2)
    assert g2.point(9) == pytest.approx((2 * math.pi / 8, 2 * math.pi / 8))
    with pytest.raises(ValueError):
        Grid(0)


def test_action_examples():
    assert action(VForm.top(SP1, ONE), SIN, Grid(1)) == pytest.approx(2 * math.pi, abs=1e-12)
    # integral of sin^2 / 2 over one period is pi / 2
    for n in (16, 64):
        assert action(top_form(SP1, "(1/2)*u^2"), SIN, Grid(1, n)) == pytest.approx(math.pi / 2, abs=1e-10)
    assert abs(action(top_form(SP1, "u_x"), SIN, Grid(1))) < 1e-12


def test_fd_action_derivative_examples():
    lam = top_form(SP1, "(1/2)*u^2")
    assert fd_action_derivative(lam, SIN, VerticalField(SP1, (sin(xvar(0)),)), Grid(1)) == \
        pytest.approx(math.pi, rel=1e-9)
    assert fd_action_derivative(lam, SIN, VerticalField(SP1, (0 * ONE,)), Grid(1)) == 0.0
    assert abs(fd_action_derivative(top_form(SP1, "u"), SIN, VerticalField(SP1, (cos(xvar(0)),)),
                                    Grid(1))) < 1e-10
    with pytest.raises(ValueError):
        fd_action_derivative(lam, SIN, VerticalField(SP1, (ONE,)), Grid(1), h=0)


def test_first_variation_and_green_examples():
    osc = golden_lagrangian("oscillator")
    cosy = VerticalField(SP1, (cos(xvar(0)),))
    assert verify_first_variation(osc, SIN, cosy).passed
    assert verify_green(osc, SIN, cosy).passed
    trivial = verify_first_variation(VForm.top(SP1, ONE), SIN, cosy)
    assert trivial.passed and trivial.lhs == 0.0
    bi = golden_lagrangian("biharmonic")
    rep = verify_first_variation(bi, SIN, VerticalField(SP1, (sin(xvar(0).scale(2)),)))
    assert rep.passed
    extremal = verify_green(top_form(SP1, "(1/2)*u_x^2"), Section(SP1, (ONE.scale(3),)), cosy)
    assert extremal.passed and abs(extremal.lhs) < 1e-12 and extremal.rhs == 0.0
    lap = golden_lagrangian("laplace")
    sec = Section(SP2, (parse_expr("sin(x)*sin(y)", SP2),))
    assert verify_green(lap, sec, VerticalField(SP2, (cos(xvar(0)),))).passed


@pytest.mark.parametrize("name", ["oscillator", "laplace", "biharmonic"])
def test_exact_term_integrates_to_zero(name):
    lam = golden_lagrangian(name)
    rng = rng_from(5)
    val = exact_term_integral(lam, random_section(lam.space, 3, rng), random_variation(lam.space, 3, rng))
    assert abs(val) <= 1e-10


def test_green_detects_wrong_euler_lagrange():
    # a sign-flipped EL form must fail the numeric Green check
    from jetvar.numcheck import _integrate_form, euler_lagrange_pairing
    from jetvar.varcalc import euler_lagrange
    lam = golden_lagrangian("oscillator")
    rng = rng_from(1)
    sec, y = random_section(SP1, 3, rng), random_variation(SP1, 3, rng)
    wrong = euler_lagrange(lam).scale(-1)
    g = Grid(1)
    lhs = fd_action_derivative(lam, sec, y, g)
    rhs = _integrate_form(euler_lagrange_pairing(lam, sec, y, wrong), g)
    assert not make_report("green", lhs, rhs, 1e-6).passed


def test_report_relative_and_absolute():
    rep = make_report("r", 1.0, 1.0 + 1e-7, 1e-6)
    assert rep.passed and rep.rel_err == pytest.approx(1e-7, rel=1e-6)
    tiny = make_report("t", 1e-14, 0.0, 1e-6)
    assert tiny.passed and tiny.rel_err == 1e-14
    bad = make_report("b", 1.0, 2.0, 1e-6)
    assert not bad.passed
    assert isinstance(bad, CheckReport)
    assert set(bad.to_json()) == {"name", "lhs", "rhs", "abs_err", "rel_err", "tol", "pass", "runtime_ms"}
