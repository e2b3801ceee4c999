"""Exact symbolic expressions over base and jet coordinates.

An :class:`Expr` is stored in canonical form at all times: a sparse polynomial
(Laurent in the atoms) with :class:`fractions.Fraction` coefficients.  Atoms are

* ``BaseVar(i)``           the base coordinate x^i
* ``JetVar(a, N)``         the jet coordinate psi^a_N
* ``Opaque(name, M)``      the M-th partial derivative of an unspecified
                           function of the base coordinates
* ``Func(name, arg)``      sin, cos, exp or ln of a canonical argument
* ``Recip(arg)``           1/arg for a non-monomial argument

Equality of canonical forms decides equality for the polynomial and Laurent
fragment.  Transcendental identities (sin^2 + cos^2 = 1 and friends) are not
rewritten.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import DomainError, MissingAssignment, OpaqueAtomPresent
from .multiindex import MultiIndex, mi_shift

FUNCTIONS = ("sin", "cos", "exp", "ln")


# ---------------------------------------------------------------------------
# jet space


@dataclass(frozen=True)
class JetSpace:
    """Coordinates of a jet space: p base names, q field names, a nominal order.

    ``max_order`` bounds what the parser accepts; total derivatives may exceed
    it freely.
    """

    coords: tuple[str, ...]
    fields: tuple[str, ...]
    max_order: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        object.__setattr__(self, "fields", tuple(self.fields))
        if not self.coords or not self.fields:
            raise ValueError("need at least one coordinate and one field")
        if self.max_order < 0:
            raise ValueError("max_order must be >= 0")
        names = self.coords + self.fields
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate identifiers in {names}")
        for name in names:
            if not name.isidentifier() or "_" in name or name in FUNCTIONS:
                raise ValueError(f"invalid identifier {name!r}")

    @property
    def p(self) -> int:
        return len(self.coords)

    @property
    def q(self) -> int:
        return len(self.fields)

    def with_order(self, max_order: int) -> JetSpace:
        return JetSpace(self.coords, self.fields, max_order)

    def compatible(self, other: JetSpace) -> bool:
        return self.coords == other.coords and self.fields == other.fields

    def suffix(self, index: MultiIndex) -> str:
        return "".join(name * c for name, c in zip(self.coords, index.counts))

    def jet_name(self, a: int, index: MultiIndex) -> str:
        sfx = self.suffix(index)
        return self.fields[a] + ("_" + sfx if sfx else "")


# ---------------------------------------------------------------------------
# atoms


class Atom:
    __slots__ = ("key", "_hash")

    def _set_key(self, key):
        self.key = key
        self._hash = hash(key)

    def __eq__(self, other):
        return isinstance(other, Atom) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.key < other.key


class BaseVar(Atom):
    __slots__ = ("axis",)

    def __init__(self, axis: int):
        self.axis = axis
        self._set_key((0, axis))

    def __repr__(self):
        return f"BaseVar({self.axis})"


class JetVar(Atom):
    __slots__ = ("field", "index")

    def __init__(self, field: int, index: MultiIndex):
        self.field = field
        self.index = index
        self._set_key((1, field, index.order, index.counts))

    def __repr__(self):
        return f"JetVar({self.field}, {self.index.counts})"


class Opaque(Atom):
    __slots__ = ("name", "index")

    def __init__(self, name: str, index: MultiIndex):
        self.name = name
        self.index = index
        self._set_key((2, name, index.order, index.counts))

    def __repr__(self):
        return f"Opaque({self.name!r}, {self.index.counts})"


class Func(Atom):
    __slots__ = ("name", "arg")

    def __init__(self, name: str, arg: Expr):
        self.name = name
        self.arg = arg
        self._set_key((3, name, arg.sort_key))

    def __repr__(self):
        return f"Func({self.name!r}, {self.arg!r})"


class Recip(Atom):
    __slots__ = ("arg",)

    def __init__(self, arg: Expr):
        self.arg = arg
        self._set_key((4, arg.sort_key))

    def __repr__(self):
        return f"Recip({self.arg!r})"


Monomial = tuple  # tuple[tuple[Atom, int], ...] sorted by atom key


def _atom_sort(item):
    return item[0].key


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    acc = dict(m1)
    for a, e in m2:
        acc[a] = acc.get(a, 0) + e
    return tuple(sorted(((a, e) for a, e in acc.items() if e), key=_atom_sort))


def _mono_key(m: Monomial):
    return tuple((a.key, e) for a, e in m)


# ---------------------------------------------------------------------------
# expressions


def _coerce_coeff(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, float):
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as an exact coefficient")


class Expr:
    """Immutable canonical expression; see the module docstring."""

    __slots__ = ("terms", "_key", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}
        self._key = None
        self._hash = None

    # constructors -------------------------------------------------------
    @classmethod
    def const(cls, c) -> Expr:
        c = _coerce_coeff(c)
        return cls({(): c}) if c else ZERO

    @classmethod
    def atom(cls, a: Atom, power: int = 1) -> Expr:
        return cls({((a, power),): Fraction(1)})

    # structure ----------------------------------------------------------
    @property
    def sort_key(self):
        if self._key is None:
            self._key = tuple(sorted((_mono_key(m), c) for m, c in self.terms.items()))
        return self._key

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.sort_key)
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Expr):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Expr.const(other).terms
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("expression is not constant")
        return self.terms.get((), Fraction(0))

    def atoms(self) -> set[Atom]:
        """Top-level atoms (arguments of Func/Recip are not descended into)."""
        return {a for m in self.terms for a, _ in m}

    def all_atoms(self) -> set[Atom]:
        out = set()
        for a in self.atoms():
            out.add(a)
            if isinstance(a, (Func, Recip)):
                out |= a.arg.all_atoms()
        return out

    def __repr__(self):
        if not self.terms:
            return "Expr(0)"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda t: _mono_key(t[0])):
            parts.append(f"{c}*" + "*".join(f"{a!r}^{e}" for a, e in m) if m else str(c))
        return "Expr(" + " + ".join(parts) + ")"

    # arithmetic ---------------------------------------------------------
    @staticmethod
    def _lift(x) -> Expr:
        return x if isinstance(x, Expr) else Expr.const(x)

    def __add__(self, other):
        other = self._lift(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc.get(m, 0) + c
        return Expr(acc)

    __radd__ = __add__

    def __neg__(self):
        return Expr({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def scale(self, c) -> Expr:
        c = _coerce_coeff(c)
        if not c:
            return ZERO
        return Expr({m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Expr):
            return self.scale(other)
        if not self.terms or not other.terms:
            return ZERO
        acc: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                acc[m] = acc.get(m, 0) + c1 * c2
        return Expr(acc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other.is_constant():
            c = other.constant_value()
            if c == 0:
                raise ZeroDivisionError("division by zero")
            return self.scale(1 / c)
        return self * other ** -1

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, n: int) -> Expr:
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        if n == 0:
            return ONE
        if n > 0:
            result, base = ONE, self
            while n:
                if n & 1:
                    result = result * base
                n >>= 1
                if n:
                    base = base * base
            return result
        if not self.terms:
            raise ZeroDivisionError("zero to a negative power")
        if len(self.terms) == 1:
            ((m, c),) = self.terms.items()
            out = Expr.const(c ** n)
            for a, e in m:
                if isinstance(a, Recip) and e * n < 0:
                    out = out * a.arg ** (-e * n)
                else:
                    out = out * Expr.atom(a, e * n)
            return out
        return _recip(self) ** (-n)


ZERO = Expr()
ONE = Expr({(): Fraction(1)})


def _leading(f: Expr):
    return min(f.terms.items(), key=lambda t: _mono_key(t[0]))


def _recip(f: Expr) -> Expr:
    # normalise the argument so its leading coefficient is 1
    _, lead = _leading(f)
    return Expr.atom(Recip(f.scale(1 / lead))).scale(1 / lead)


def const(c) -> Expr:
    return Expr.const(c)


def xvar(i: int) -> Expr:
    return Expr.atom(BaseVar(i))


def jetvar(a: int, index) -> Expr:
    if not isinstance(index, MultiIndex):
        index = MultiIndex(tuple(index))
    return Expr.atom(JetVar(a, index))


def opaque(name: str, index) -> Expr:
    if not isinstance(index, MultiIndex):
        index = MultiIndex(tuple(index))
    return Expr.atom(Opaque(name, index))


def _func(name: str, arg: Expr) -> Expr:
    arg = Expr._lift(arg)
    if arg.is_constant():
        v = arg.constant_value()
        if v == 0 and name in ("sin",):
            return ZERO
        if v == 0 and name in ("cos", "exp"):
            return ONE
        if v == 1 and name == "ln":
            return ZERO
    return Expr.atom(Func(name, arg))


def sin(arg) -> Expr:
    return _func("sin", arg)


def cos(arg) -> Expr:
    return _func("cos", arg)


def exp(arg) -> Expr:
    return _func("exp", arg)


def ln(arg) -> Expr:
    return _func("ln", arg)


def apply_function(name: str, arg: Expr) -> Expr:
    if name not in FUNCTIONS:
        raise ValueError(f"unknown function {name!r}")
    return _func(name, arg)


# ---------------------------------------------------------------------------
# canonicalisation


def canonicalize(f: Expr) -> Expr:
    """Rebuild ``f`` from its atoms.

    Expressions are normalised on construction, so this mostly re-normalises
    function arguments; it is idempotent and returns an equal value for any
    expression built through the public API.
    """
    return substitute(f, lambda a: None)


def is_zero(f: Expr) -> bool:
    return canonicalize(f).is_zero()


# ---------------------------------------------------------------------------
# derivations


def derive(f: Expr, rule: Callable[[Atom], Expr]) -> Expr:
    """Apply the derivation determined by its values ``rule(atom)`` on
    BaseVar, JetVar and Opaque atoms; Func and Recip follow the chain rule."""
    cache: dict[Atom, Expr] = {}

    def datom(a: Atom) -> Expr:
        got = cache.get(a)
        if got is None:
            if isinstance(a, Func):
                darg = derive(a.arg, rule)
                if darg.is_zero():
                    got = ZERO
                elif a.name == "sin":
                    got = cos(a.arg) * darg
                elif a.name == "cos":
                    got = -sin(a.arg) * darg
                elif a.name == "exp":
                    got = Expr.atom(a) * darg
                else:
                    got = darg * a.arg ** -1
            elif isinstance(a, Recip):
                darg = derive(a.arg, rule)
                got = ZERO if darg.is_zero() else -(Expr.atom(a, 2) * darg)
            else:
                got = rule(a)
            cache[a] = got
        return got

    acc: dict = {}
    for m, c in f.terms.items():
        for k, (a, e) in enumerate(m):
            da = datom(a)
            if not da.terms:
                continue
            rest = m[:k] + (((a, e - 1),) if e != 1 else ()) + m[k + 1:]
            ce = c * e
            for m2, c2 in da.terms.items():
                mm = _mono_mul(rest, m2)
                acc[mm] = acc.get(mm, 0) + ce * c2
    return Expr(acc)


def partial_base(f: Expr, i: int) -> Expr:
    """Partial derivative in x^i, jet coordinates held fixed."""

    def rule(a):
        if isinstance(a, BaseVar):
            return ONE if a.axis == i else ZERO
        if isinstance(a, Opaque):
            return Expr.atom(Opaque(a.name, mi_shift(a.index, i, +1)))
        return ZERO

    return derive(f, rule)


def partial_jet(f: Expr, a: int, index: MultiIndex) -> Expr:
    """Partial derivative in psi^a_N, every other coordinate held fixed."""
    target = JetVar(a, index)
    return derive(f, lambda atom: ONE if atom == target else ZERO)


def total_derivative_expr(f: Expr, i: int) -> Expr:
    """D_i f = df/dx^i + psi^a_{N+1_i} df/dpsi^a_N."""

    def rule(a):
        if isinstance(a, BaseVar):
            return ONE if a.axis == i else ZERO
        if isinstance(a, JetVar):
            return Expr.atom(JetVar(a.field, mi_shift(a.index, i, +1)))
        if isinstance(a, Opaque):
            return Expr.atom(Opaque(a.name, mi_shift(a.index, i, +1)))
        return ZERO

    return derive(f, rule)


@lru_cache(maxsize=4096)
def base_derivative(f: Expr, index: MultiIndex) -> Expr:
    """The iterated partial d^N f / dx^N (jet coordinates held fixed)."""
    for i, c in enumerate(index.counts):
        if c:
            return partial_base(base_derivative(f, mi_shift(index, i, -1)), i)
    return f


# ---------------------------------------------------------------------------
# substitution


def substitute(f: Expr, fn: Callable[[Atom], Expr | None]) -> Expr:
    """Replace atoms by ``fn(atom)`` (``None`` keeps the atom) and re-normalise.

    Function arguments are substituted recursively.
    """
    cache: dict[Atom, Expr] = {}

    def image(a: Atom) -> Expr:
        got = cache.get(a)
        if got is None:
            got = fn(a)
            if got is None:
                if isinstance(a, Func):
                    got = _func(a.name, substitute(a.arg, fn))
                elif isinstance(a, Recip):
                    got = substitute(a.arg, fn) ** -1
                else:
                    got = Expr.atom(a)
            cache[a] = got
        return got

    out = ZERO
    for m, c in f.terms.items():
        term = Expr.const(c)
        for a, e in m:
            term = term * image(a) ** e
        out = out + term
    return out


def _components(section) -> Sequence[Expr]:
    return getattr(section, "components", section)


def subst_jets(f: Expr, section) -> Expr:
    """Pull ``f`` back along a section: psi^a_N -> d^N u^a / dx^N.

    ``section`` is a :class:`jetvar.vforms.Section` or a plain sequence of
    component expressions in the base coordinates.
    """
    comps = _components(section)

    def fn(a):
        if isinstance(a, JetVar):
            return base_derivative(comps[a.field], a.index)
        return None

    return substitute(f, fn)


# ---------------------------------------------------------------------------
# inspection


def jet_atoms(f: Expr) -> set[JetVar]:
    return {a for a in f.all_atoms() if isinstance(a, JetVar)}


def jet_order(f: Expr) -> int:
    """Largest |N| among jet coordinates in ``f`` (0 if there are none)."""
    return max((a.index.order for a in jet_atoms(f)), default=0)


def has_jets(f: Expr) -> bool:
    return bool(jet_atoms(f))


def has_opaque(f: Expr) -> bool:
    return any(isinstance(a, Opaque) for a in f.all_atoms())


# ---------------------------------------------------------------------------
# numerics


@dataclass
class NumericPoint:
    """Values for base and jet coordinates; values may be floats or arrays."""

    base: Sequence = ()
    jets: Mapping = None

    def lookup(self, a: Atom):
        if isinstance(a, BaseVar):
            if a.axis < len(self.base):
                return self.base[a.axis]
        elif isinstance(a, JetVar) and self.jets is not None:
            key = (a.field, a.index)
            if key in self.jets:
                return self.jets[key]
        raise MissingAssignment(f"no value assigned to {a!r}")


def eval_numeric(f: Expr, pt: NumericPoint):
    """Evaluate in double precision; vectorises over array-valued points."""
    cache: dict[Atom, object] = {}

    def value(a: Atom):
        got = cache.get(a)
        if got is None:
            if isinstance(a, Opaque):
                raise OpaqueAtomPresent(f"cannot evaluate opaque atom {a!r}")
            if isinstance(a, Func):
                arg = eval_numeric(a.arg, pt)
                if a.name == "ln":
                    if np.any(np.asarray(arg) <= 0):
                        raise DomainError("ln of a non-positive value")
                    got = np.log(arg)
                else:
                    got = getattr(np, a.name)(arg)
            elif isinstance(a, Recip):
                arg = eval_numeric(a.arg, pt)
                if np.any(np.asarray(arg) == 0):
                    raise DomainError("division by zero")
                got = 1.0 / np.asarray(arg, dtype=float)
            else:
                got = np.asarray(pt.lookup(a), dtype=float)
            cache[a] = got
        return got

    total = 0.0
    for m, c in f.terms.items():
        term = float(c)
        for a, e in m:
            v = value(a)
            if e < 0:
                if np.any(v == 0):
                    raise DomainError("division by zero")
                term = term * (1.0 / v) ** (-e)
            else:
                term = term * v ** e
        total = total + term
    total = np.asarray(total, dtype=float)
    return float(total) if total.ndim == 0 else total


# ---------------------------------------------------------------------------
# text rendering (inverse of the parser)


def _display_key(m: Monomial):
    return tuple(sorted(((a.key, e) for a, e in m), reverse=True))


def display_terms(f: Expr) -> list[tuple[Monomial, Fraction]]:
    """Terms in display order: higher-order jets and higher degrees first."""
    return sorted(f.terms.items(), key=lambda t: _display_key(t[0]), reverse=True)


def _fmt_frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def atom_text(a: Atom, space: JetSpace) -> str:
    if isinstance(a, BaseVar):
        return space.coords[a.axis]
    if isinstance(a, JetVar):
        return space.jet_name(a.field, a.index)
    if isinstance(a, Opaque):
        sfx = space.suffix(a.index)
        return a.name + ("_" + sfx if sfx else "")
    if isinstance(a, Func):
        return f"{a.name}({to_text(a.arg, space)})"
    return f"({to_text(a.arg, space)})"


def _power_text(a: Atom, e: int, space: JetSpace) -> str:
    base = atom_text(a, space)
    if isinstance(a, Recip):
        e = -e
    return base if e == 1 else f"{base}^{e}"


def monomial_text(m: Monomial, space: JetSpace) -> str:
    return "*".join(_power_text(a, e, space) for a, e in m)


def _term_text(m: Monomial, c: Fraction, space: JetSpace) -> str:
    """Render |c|*m; the sign is handled by the caller."""
    c = abs(c)
    if not m:
        return _fmt_frac(c)
    body = monomial_text(m, space)
    if c == 1:
        return body
    coeff = _fmt_frac(c) if c.denominator == 1 else f"({_fmt_frac(c)})"
    return f"{coeff}*{body}"


def to_text(f: Expr, space: JetSpace) -> str:
    """Human-readable text that :func:`jetvar.parsing.parse_expr` reads back."""
    terms = display_terms(f)
    if not terms:
        return "0"
    if len(terms) > 1 and all(c < 0 for _, c in terms):
        return "-(" + to_text(-f, space) + ")"
    out = []
    for k, (m, c) in enumerate(terms):
        body = _term_text(m, c, space)
        if k == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)
