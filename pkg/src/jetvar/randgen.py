"""Seeded random inputs for property checks and for ``jetvar verify``."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .multiindex import mi_enumerate, mi_of_order
from .symexpr import ONE, ZERO, Expr, JetSpace, cos, jetvar, sin, xvar
from .vforms import Section, VerticalField, VForm, covectors_up_to


def rng_from(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_rational(rng, num=4, dens=(1, 2, 3)) -> Fraction:
    while True:
        c = Fraction(int(rng.integers(-num, num + 1)), int(rng.choice(dens)))
        if c:
            return c


def random_unit_coeff(rng, denominator=100) -> Fraction:
    """A rational close to a uniform draw from [-1, 1]."""
    return Fraction(round(float(rng.uniform(-1, 1)) * denominator), denominator)


def random_monomial(space: JetSpace, order: int, degree: int, rng, base_weight=0.2,
                    must_use: Expr | None = None) -> Expr:
    jets = [jetvar(a, n) for a in range(space.q) for n in mi_enumerate(space.p, order)]
    bases = [xvar(i) for i in range(space.p)]
    k = int(rng.integers(1 if must_use is not None else 0, degree + 1))
    out = must_use if must_use is not None else ONE
    for _ in range(k - (1 if must_use is not None else 0)):
        pool = bases if (bases and rng.random() < base_weight) else jets
        out = out * pool[int(rng.integers(len(pool)))]
    return out


def random_polynomial(space: JetSpace, order: int, degree: int = 3, nterms: int = 3, rng=None,
                      base_weight=0.2) -> Expr:
    rng = rng_from(rng)
    out = ZERO
    for _ in range(nterms):
        out = out + random_monomial(space, order, degree, rng, base_weight).scale(random_rational(rng))
    return out


def random_lagrangian(space: JetSpace, r: int, degree: int = 3, nterms: int = 3, rng=None) -> VForm:
    """A polynomial Lagrangian of order exactly ``r`` (when r > 0)."""
    rng = rng_from(rng)
    top = mi_of_order(space.p, r)
    lead_jet = jetvar(int(rng.integers(space.q)), top[int(rng.integers(len(top)))])
    L = random_monomial(space, r, degree, rng, must_use=lead_jet).scale(random_rational(rng))
    L = L + random_polynomial(space, r, degree, nterms - 1, rng)
    if L.is_zero():
        L = lead_jet
    return VForm.top(space, L)


def random_vform(space: JetSpace, d: int, l: int, order: int, rng=None, nterms: int = 2,
                 degree: int = 2) -> VForm:
    rng = rng_from(rng)
    covs = covectors_up_to(space, order)
    items = []
    for _ in range(nterms):
        I = tuple(sorted(rng.choice(space.p, size=d, replace=False).tolist())) if d else ()
        if l > len(covs):
            raise ValueError("contact degree exceeds the number of covectors")
        picks = rng.choice(len(covs), size=l, replace=False).tolist() if l else []
        C = tuple(covs[k] for k in picks)
        items.append((I, C, random_polynomial(space, order, degree, 2, rng)))
    return VForm.from_terms(space, d, l, items)


def random_trig_poly(p: int, degree: int = 3, rng=None, nterms: int | None = None) -> Expr:
    """Smooth 2pi-periodic closed form with coefficients in [-1, 1].

    Every single-axis harmonic up to ``degree`` appears; for p > 1 a further
    ``nterms`` random products of per-axis harmonics are added.
    """
    rng = rng_from(rng)

    def harmonic(i, k, kind):
        if k == 0:
            return ONE
        arg = xvar(i).scale(k)
        return cos(arg) if kind == 0 else sin(arg)

    out = Expr.const(random_unit_coeff(rng))
    for i in range(p):
        for k in range(1, degree + 1):
            out = out + harmonic(i, k, 0).scale(random_unit_coeff(rng))
            out = out + harmonic(i, k, 1).scale(random_unit_coeff(rng))
    if p == 1:
        return out
    for _ in range(nterms or 4):
        term = Expr.const(random_unit_coeff(rng))
        for i in range(p):
            term = term * harmonic(i, int(rng.integers(0, degree + 1)), int(rng.integers(2)))
        out = out + term
    return out


def random_section(space: JetSpace, degree: int = 3, rng=None) -> Section:
    rng = rng_from(rng)
    return Section(space, tuple(random_trig_poly(space.p, degree, rng) for _ in range(space.q)))


def random_variation(space: JetSpace, degree: int = 3, rng=None) -> VerticalField:
    rng = rng_from(rng)
    return VerticalField(space, tuple(random_trig_poly(space.p, degree, rng) for _ in range(space.q)))


def random_base_polynomial(p: int, degree: int = 3, nterms: int = 3, rng=None) -> Expr:
    """Polynomial in the base coordinates only."""
    rng = rng_from(rng)
    out = ZERO
    for _ in range(nterms):
        m = Expr.const(random_rational(rng))
        for _ in range(int(rng.integers(0, degree + 1))):
            m = m * xvar(int(rng.integers(p)))
        out = out + m
    return out


def random_closed_section(space: JetSpace, rng=None) -> Section:
    """Closed-form section mixing polynomials and one trigonometric factor."""
    rng = rng_from(rng)
    comps = []
    for _ in range(space.q):
        c = random_base_polynomial(space.p, 3, 3, rng)
        c = c + sin(xvar(int(rng.integers(space.p)))).scale(random_rational(rng))
        comps.append(c)
    return Section(space, tuple(comps))


def random_order0_field(space: JetSpace, rng=None, degree: int = 2) -> VerticalField:
    """Vertical field with components in the base and order-0 jet coordinates."""
    rng = rng_from(rng)
    return VerticalField(space, tuple(random_polynomial(space, 0, degree, 3, rng, base_weight=0.4)
                                      for _ in range(space.q)))
