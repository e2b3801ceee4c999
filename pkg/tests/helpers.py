"""Shared seeded fixtures for the test suite."""

from __future__ import annotations

from pathlib import Path

import pytest

from jetvar.parsing import parse_expr
from jetvar.randgen import random_lagrangian
from jetvar.symexpr import JetSpace
from jetvar.vforms import VForm

ROOT = Path(__file__).resolve().parents[1]
PROBLEMS = ROOT / "problems"
GOLDEN = Path(__file__).resolve().parent / "golden"
COORDS = ("x", "y", "z")


def space(p: int, q: int = 1, r: int = 3) -> JetSpace:
    fields = ("u", "v")[:q]
    return JetSpace(COORDS[:p], fields, r)


def lagrangian_suite():
    """27 polynomial Lagrangians: p, r in {1, 2, 3}, three seeds each, the
    third with two fields.  Coefficient degree <= 3."""
    out = []
    for p in (1, 2, 3):
        for r in (1, 2, 3):
            for k in range(3):
                sp = space(p, 2 if k == 2 else 1, r)
                lam = random_lagrangian(sp, r, degree=3, nterms=3, rng=1000 * p + 100 * r + k)
                out.append(pytest.param(lam, id=f"p{p}-r{r}-s{k}"))
    return out


def top_form(sp: JetSpace, text: str) -> VForm:
    return VForm.top(sp, parse_expr(text, sp))


GOLDEN_CORPUS = {
    # name: (coords, Lagrangian, expected epsilon coefficient)
    "oscillator": (("x",), "(1/2)*u_x^2 - (1/2)*u^2", "-(u_xx + u)"),
    "laplace": (("x", "y"), "(1/2)*u_x^2 + (1/2)*u_y^2", "-(u_xx + u_yy)"),
    "biharmonic": (("x",), "(1/2)*u_xx^2", "u_xxxx"),
}


def golden_lagrangian(name: str) -> VForm:
    coords, text, _ = GOLDEN_CORPUS[name]
    return top_form(JetSpace(coords, ("u",), 4), text)


def random_expr(sp: JetSpace, rng, depth: int = 2):
    """Random expression mixing rationals, jets, base variables, negative
    powers and the four elementary functions."""
    from jetvar.randgen import random_polynomial, random_rational
    from jetvar.symexpr import apply_function

    e = random_polynomial(sp, 2, degree=3, nterms=int(rng.integers(1, 4)), rng=rng, base_weight=0.3)
    if depth == 0:
        return e
    roll = rng.random()
    inner = random_expr(sp, rng, depth - 1)
    if inner.is_zero():
        return e
    if roll < 0.4:
        name = ("sin", "cos", "exp", "ln")[int(rng.integers(4))]
        return e + apply_function(name, inner).scale(random_rational(rng))
    if roll < 0.6:
        return e * inner ** int(rng.integers(-2, 0))
    if roll < 0.8:
        return e * inner
    return e
