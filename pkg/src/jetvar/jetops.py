"""Differential operators on the bigraded algebra of vector-valued forms."""

from __future__ import annotations

import enum
from fractions import Fraction

from .errors import NotLagrangian
from .multiindex import MultiIndex, mi_enumerate, mi_shift
from .symexpr import (
    Expr,
    JetSpace,
    jet_atoms,
    partial_jet,
    total_derivative_expr,
)
from .vforms import (
    Section,
    VerticalField,
    VForm,
    _add_term,
    contract,
    pull_back_section,
)


class IotaMode(enum.Enum):
    LITERAL = "literal"
    WEIGHTED = "weighted"


def _as_form(x, space: JetSpace | None) -> VForm:
    if isinstance(x, VForm):
        return x
    if space is None:
        raise TypeError("a JetSpace is required when operating on a bare Expr")
    return VForm.function(space, x)


def total_derivative(x, i: int):
    """D_i on an expression, or the degree-0 derivation it induces on forms.

    On forms, coefficients are differentiated by D_i, contact covectors move
    up (dpsi^a_N -> dpsi^a_{N+1_i}) and horizontal covectors are constants.
    """
    if isinstance(x, Expr):
        return total_derivative_expr(x, i)
    w = x
    acc: dict = {}
    for (I, C), c in w.terms.items():
        dc = total_derivative_expr(c, i)
        if not dc.is_zero():
            _add_term(acc, I, C, dc, 1)
        for k, (a, n) in enumerate(C):
            raised = C[:k] + ((a, mi_shift(n, i, +1)),) + C[k + 1:]
            _add_term(acc, I, raised, c, 1)
    return VForm(w.space, w.d, w.l, acc, w.s + 1, w.r + 1 if w.l else w.r)


def total_derivative_iterated(x, index: MultiIndex):
    """D_N = D_1^{n_1} ... D_p^{n_p}."""
    for i, c in enumerate(index.counts):
        for _ in range(c):
            x = total_derivative(x, i)
    return x


def d_pi(x, space: JetSpace | None = None) -> VForm:
    """Fibre differential; the new covector is placed first in the contact factor."""
    w = _as_form(x, space)
    acc: dict = {}
    for (I, C), c in w.terms.items():
        for atom in jet_atoms(c):
            dc = partial_jet(c, atom.field, atom.index)
            if not dc.is_zero():
                _add_term(acc, I, ((atom.field, atom.index),) + C, dc, 1)
    return VForm(w.space, w.d, w.l + 1, acc, w.s, max(w.r, w.s))


def d_t(x, space: JetSpace | None = None) -> VForm:
    """Total differential: sum_i dx^i ^ D_i(w).

    At top horizontal degree every dx^i repeats, so the result is the zero
    form of bidegree (p+1, l).
    """
    w = _as_form(x, space)
    acc: dict = {}
    for i in range(w.space.p):
        Di = total_derivative(w, i)
        for (I, C), c in Di.terms.items():
            _add_term(acc, (i,) + I, C, c, 1)
    return VForm(w.space, w.d + 1, w.l, acc, w.s + 1, w.r + 1)


def iota(w: VForm, i: int, mode: IotaMode = IotaMode.LITERAL) -> VForm:
    """Order-reducing derivation of degree 0: dpsi^a_N -> dpsi^a_{N-1_i}
    (times n_i in weighted mode), zero when n_i = 0."""
    acc: dict = {}
    for (I, C), c in w.terms.items():
        for k, (a, n) in enumerate(C):
            if n.counts[i] == 0:
                continue
            lowered = C[:k] + ((a, mi_shift(n, i, -1)),) + C[k + 1:]
            coeff = c.scale(n.counts[i]) if mode is IotaMode.WEIGHTED else c
            _add_term(acc, I, lowered, coeff, 1)
    return VForm(w.space, w.d, w.l, acc, w.s, w.r)


def iota_iterated(w: VForm, index: MultiIndex, mode: IotaMode = IotaMode.LITERAL) -> VForm:
    for i, c in enumerate(index.counts):
        for _ in range(c):
            w = iota(w, i, mode)
    return w


def degree_operator(w: VForm) -> VForm:
    """Multiply by the contact degree."""
    return w.scale(w.l)


def operator_E(lagrangian: VForm, mode: IotaMode = IotaMode.WEIGHTED) -> VForm:
    """deg(d_pi L) + sum_{|N|>0} (-1)^|N| / N! * D_N iota^N d_pi L."""
    space = lagrangian.space
    if lagrangian.bidegree != (space.p, 0):
        raise NotLagrangian(f"expected bidegree ({space.p}, 0), got {lagrangian.bidegree}")
    phi = d_pi(lagrangian)
    out = degree_operator(phi)
    for n in mi_enumerate(space.p, phi.r)[1:]:
        reduced = iota_iterated(phi, n, mode)
        if reduced.is_zero():
            continue
        term = total_derivative_iterated(reduced, n)
        out = out + term.scale(Fraction((-1) ** n.order, n.factorial))
    return out


def prolonged_coefficients(field: VerticalField, r: int) -> dict:
    """{(a, N): D_N v^a} for |N| <= r."""
    space = field.space
    out = {}
    for a, v in enumerate(field.components):
        for n in mi_enumerate(space.p, r):
            if n.order == 0:
                out[(a, n)] = v
                continue
            i = next(k for k, c in enumerate(n.counts) if c)
            out[(a, n)] = total_derivative_expr(out[(a, mi_shift(n, i, -1))], i)
    return out


def variation_jets(field: VerticalField, section: Section, r: int) -> dict:
    """Prolonged coefficients of ``field`` pulled back along ``section``."""
    from .symexpr import subst_jets

    return {k: subst_jets(v, section) for k, v in prolonged_coefficients(field, r).items()}


def lie_derivative_section(y: VerticalField, beta: VForm, section: Section, r: int | None = None) -> VForm:
    """<prolonged y, (j section)^* d_pi beta> for a semi-basic form ``beta``."""
    if beta.l != 0:
        raise ValueError("lie_derivative_section expects a form of contact degree 0")
    dp = pull_back_section(d_pi(beta), section)
    r = dp.r if r is None else r
    return contract(variation_jets(y, section, r), dp)
