"""Text, JSON and LaTeX renderings of expressions, forms and check reports."""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import UnsupportedFormat
from .multiindex import MultiIndex
from .numcheck import CheckReport
from .symexpr import (
    BaseVar,
    Expr,
    Func,
    JetSpace,
    JetVar,
    Opaque,
    Recip,
    display_terms,
    to_text,
)
from .vforms import VForm, covector_key

FORMATS = ("text", "json", "latex")

OTIMES = "⊗"
WEDGE = "∧"


# ---------------------------------------------------------------------------
# LaTeX for expressions


def _latex_name(base: str, space: JetSpace, index: MultiIndex) -> str:
    sfx = space.suffix(index)
    return f"{base}_{{{sfx}}}" if sfx else base


def _latex_atom(a, space: JetSpace) -> str:
    if isinstance(a, BaseVar):
        return space.coords[a.axis]
    if isinstance(a, JetVar):
        return _latex_name(space.fields[a.field], space, a.index)
    if isinstance(a, Opaque):
        return _latex_name(a.name, space, a.index)
    if isinstance(a, Func):
        return f"\\{a.name}\\left({expr_latex(a.arg, space)}\\right)"
    return f"\\left({expr_latex(a.arg, space)}\\right)"


def _latex_frac(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"\\frac{{{c.numerator}}}{{{c.denominator}}}"


def _latex_term(m, c: Fraction, space: JetSpace) -> str:
    c = abs(c)
    if not m:
        return _latex_frac(c)
    factors = []
    for a, e in m:
        if isinstance(a, Recip):
            e = -e
        base = _latex_atom(a, space)
        factors.append(base if e == 1 else f"{base}^{{{e}}}")
    body = " ".join(factors)
    return body if c == 1 else f"{_latex_frac(c)} {body}"


def expr_latex(f: Expr, space: JetSpace) -> str:
    terms = display_terms(f)
    if not terms:
        return "0"
    if len(terms) > 1 and all(c < 0 for _, c in terms):
        return "-(" + expr_latex(-f, space) + ")"
    out = []
    for k, (m, c) in enumerate(terms):
        body = _latex_term(m, c, space)
        if k == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


# ---------------------------------------------------------------------------
# forms


def _split_sign(c: Expr, render) -> tuple[int, str, bool]:
    """(sign, rendered magnitude, is_unit) for a coefficient placed before covectors."""
    terms = display_terms(c)
    if len(terms) == 1:
        (m, v), = terms
        sign = -1 if v < 0 else 1
        mag = c.scale(sign)
        return sign, render(mag), mag == Expr.const(1)
    if all(v < 0 for _, v in terms):
        return -1, "(" + render(-c) + ")", False
    return 1, "(" + render(c) + ")", False


def _sorted_terms(w: VForm):
    return sorted(w.terms.items(), key=lambda t: (t[0][0], tuple(covector_key(c) for c in t[0][1])))


def _join(pieces) -> str:
    if not pieces:
        return "0"
    out = []
    for k, (sign, body) in enumerate(pieces):
        if k == 0:
            out.append(("-" if sign < 0 else "") + body)
        else:
            out.append((" - " if sign < 0 else " + ") + body)
    return "".join(out)


def vform_text(w: VForm) -> str:
    sp = w.space
    pieces = []
    for (I, C), c in _sorted_terms(w):
        horiz = WEDGE.join("d" + sp.coords[i] for i in I) if I else "1"
        if C:
            basis = WEDGE.join("d" + sp.jet_name(a, n) for a, n in C) + f" {OTIMES} " + horiz
        elif I:
            basis = horiz
        else:
            basis = ""
        sign, mag, unit = _split_sign(c, lambda e: to_text(e, sp))
        if not basis:
            body = mag
        elif unit:
            body = basis
        else:
            body = f"{mag} {basis}"
        pieces.append((sign, body))
    return _join(pieces)


def vform_latex(w: VForm) -> str:
    sp = w.space
    pieces = []
    for (I, C), c in _sorted_terms(w):
        horiz = "\\wedge ".join("d" + sp.coords[i] for i in I) if I else "1"
        if C:
            contact = "\\wedge ".join("d" + _latex_name(sp.fields[a], sp, n) for a, n in C)
            basis = f"{contact}\\otimes {horiz}"
        elif I:
            basis = horiz
        else:
            basis = ""
        sign, mag, unit = _split_sign(c, lambda e: expr_latex(e, sp))
        if not basis:
            body = mag
        elif unit:
            body = basis
        else:
            body = f"{mag}\\,{basis}"
        pieces.append((sign, body))
    return _join(pieces)


def vform_json(w: VForm) -> dict:
    sp = w.space
    return {
        "bidegree": [w.d, w.l],
        "orders": [w.s, w.r],
        "terms": [
            {
                "dx": list(I),
                "dpsi": [[sp.fields[a], list(n.counts)] for a, n in C],
                "coeff": to_text(c, sp),
            }
            for (I, C), c in _sorted_terms(w)
        ],
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


# ---------------------------------------------------------------------------
# reports


def report_text(rep: CheckReport) -> str:
    status = "PASS" if rep.passed else "FAIL"
    line = (f"{status} {rep.name}: lhs={rep.lhs:.10e} rhs={rep.rhs:.10e} "
            f"abs_err={rep.abs_err:.3e} rel_err={rep.rel_err:.3e} tol={rep.tol:.1e}")
    if rep.runtime_ms is not None:
        line += f" runtime_ms={rep.runtime_ms:.1f}"
    return line


# ---------------------------------------------------------------------------


def render(value, fmt: str = "text", space: JetSpace | None = None) -> str:
    """Render an Expr (needs ``space``), a VForm or a CheckReport."""
    if fmt not in FORMATS:
        raise UnsupportedFormat(f"unknown format {fmt!r}")
    if isinstance(value, Expr):
        if space is None:
            raise TypeError("rendering an Expr needs its JetSpace")
        if fmt == "text":
            return to_text(value, space)
        if fmt == "latex":
            return expr_latex(value, space)
        return json.dumps(to_text(value, space))
    if isinstance(value, VForm):
        if fmt == "text":
            return vform_text(value)
        if fmt == "latex":
            return vform_latex(value)
        return dumps(vform_json(value))
    if isinstance(value, CheckReport):
        if fmt == "text":
            return report_text(value)
        if fmt == "json":
            return dumps(value.to_json())
        raise UnsupportedFormat("check reports have no LaTeX rendering")
    raise UnsupportedFormat(f"cannot render {type(value).__name__}")


# published JSON schemas ----------------------------------------------------

EXPR_STRING = {"type": "string"}

VFORM_SCHEMA = {
    "type": "object",
    "required": ["bidegree", "orders", "terms"],
    "additionalProperties": False,
    "properties": {
        "bidegree": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 2, "maxItems": 2},
        "orders": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 2, "maxItems": 2},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["dx", "dpsi", "coeff"],
                "additionalProperties": False,
                "properties": {
                    "dx": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    "dpsi": {
                        "type": "array",
                        "items": {
                            "type": "array",
                            "prefixItems": [
                                {"type": "string"},
                                {"type": "array", "items": {"type": "integer", "minimum": 0}},
                            ],
                            "minItems": 2,
                            "maxItems": 2,
                        },
                    },
                    "coeff": EXPR_STRING,
                },
            },
        },
    },
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["name", "lhs", "rhs", "abs_err", "rel_err", "tol", "pass", "runtime_ms"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "lhs": {"type": "number"},
        "rhs": {"type": "number"},
        "abs_err": {"type": "number", "minimum": 0},
        "rel_err": {"type": "number", "minimum": 0},
        "tol": {"type": "number", "minimum": 0},
        "pass": {"type": "boolean"},
        "runtime_ms": {"type": ["number", "null"]},
    },
}

EL_SCHEMA = {
    "type": "object",
    "required": ["command", "epsilon"],
    "properties": {"command": {"const": "el"}, "route": {"type": "string"}, "epsilon": VFORM_SCHEMA},
}

DECOMPOSE_SCHEMA = {
    "type": "object",
    "required": ["command", "strategy", "epsilon", "kappa"],
    "properties": {
        "command": {"const": "decompose"},
        "strategy": {"enum": ["min-axis", "max-axis"]},
        "epsilon": VFORM_SCHEMA,
        "kappa": VFORM_SCHEMA,
    },
}

VERIFY_SCHEMA = {
    "type": "object",
    "required": ["command", "pass", "reports"],
    "properties": {
        "command": {"const": "verify"},
        "pass": {"type": "boolean"},
        "reports": {"type": "array", "items": REPORT_SCHEMA},
    },
}

SCHEMAS = {"el": EL_SCHEMA, "decompose": DECOMPOSE_SCHEMA, "verify": VERIFY_SCHEMA}
