"""Vector-valued semi-basic forms on a jet space.

A :class:`VForm` of bidegree ``(d, l)`` is a finite sum

    sum  c_{I,C}  dpsi^{a_1}_{N_1} ^ ... ^ dpsi^{a_l}_{N_l}  (x)  dx^{i_1} ^ ... ^ dx^{i_d}

stored as ``{(I, C): c}`` with ``I`` a strictly increasing tuple of axes and
``C`` a strictly increasing tuple of contact covectors ``(a, N)``.  The two
factors antisymmetrise independently: swapping a contact covector past a
horizontal one never costs a sign.

Orders are carried as metadata: ``s`` bounds the jet order of coefficients,
``r`` the order of the contact covectors.  Equality ignores them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .errors import (
    BidegreeMismatch,
    DimensionMismatch,
    JetVariablePresent,
    OrderLowering,
    ZeroContactDegree,
)
from .multiindex import MultiIndex, mi_enumerate
from .symexpr import (
    ONE,
    ZERO,
    Expr,
    JetSpace,
    base_derivative,
    canonicalize,
    has_jets,
    jet_atoms,
    jet_order,
    partial_base,
    subst_jets,
)

Covector = tuple  # (field index, MultiIndex)


def covector_key(c: Covector):
    a, n = c
    return (a, n.order, n.counts)


def sort_with_sign(items, key=lambda x: x):
    """Sort ``items`` and return ``(sorted_tuple, sign)``; sign 0 on a repeat."""
    items = list(items)
    keys = [key(x) for x in items]
    if len(set(keys)) != len(keys):
        return None, 0
    sign = 1
    # parity of the permutation via inversion count; lists here are short
    for i in range(len(keys)):
        for j in range(i + 1, len(keys)):
            if keys[i] > keys[j]:
                sign = -sign
    order = sorted(range(len(items)), key=lambda k: keys[k])
    return tuple(items[k] for k in order), sign


class VForm:
    __slots__ = ("space", "d", "l", "s", "r", "terms")

    def __init__(self, space: JetSpace, d: int, l: int, terms: Mapping | None = None,
                 s: int | None = None, r: int | None = None):
        self.space = space
        self.d = d
        self.l = l
        self.terms = {k: c for k, c in (terms or {}).items() if not c.is_zero()}
        self.s = self._coeff_order() if s is None else s
        self.r = self._contact_order() if r is None else r

    # construction ---------------------------------------------------------
    @classmethod
    def zero(cls, space, d, l, s=0, r=0) -> VForm:
        return cls(space, d, l, {}, s, r)

    @classmethod
    def from_terms(cls, space, d, l, items: Iterable, s=None, r=None) -> VForm:
        """Build from ``(I, C, coeff)`` triples in any order, applying signs."""
        acc: dict = {}
        for I, C, coeff in items:
            _add_term(acc, tuple(I), tuple((a, _mi(n)) for a, n in C), Expr._lift(coeff), 1)
        return cls(space, d, l, acc, s, r)

    @classmethod
    def function(cls, space, f) -> VForm:
        return cls(space, 0, 0, {((), ()): Expr._lift(f)})

    @classmethod
    def top(cls, space, f) -> VForm:
        """``f dx^1 ^ ... ^ dx^p``; a Lagrangian when ``f`` is a function."""
        return cls(space, space.p, 0, {(tuple(range(space.p)), ()): Expr._lift(f)})

    # metadata ---------------------------------------------------------------
    def _coeff_order(self) -> int:
        return max((jet_order(c) for c in self.terms.values()), default=0)

    def _contact_order(self) -> int:
        return max((n.order for (_, C) in self.terms for _, n in C), default=0)

    @property
    def bidegree(self) -> tuple[int, int]:
        return (self.d, self.l)

    @property
    def orders(self) -> tuple[int, int]:
        return (self.s, self.r)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, I=None, C=()) -> Expr:
        I = tuple(range(self.space.p)) if I is None else tuple(I)
        return self.terms.get((I, tuple((a, _mi(n)) for a, n in C)), ZERO)

    def map_coefficients(self, fn: Callable[[Expr], Expr], s=None, r=None) -> VForm:
        return VForm(self.space, self.d, self.l,
                     {k: fn(c) for k, c in self.terms.items()},
                     s, self.r if r is None else r)

    def copy_with(self, s=None, r=None) -> VForm:
        return VForm(self.space, self.d, self.l, self.terms,
                     self.s if s is None else s, self.r if r is None else r)

    # algebra ----------------------------------------------------------------
    def _check(self, other: VForm):
        if not self.space.compatible(other.space):
            raise DimensionMismatch("forms live on different jet spaces")
        if self.bidegree != other.bidegree:
            raise BidegreeMismatch(f"bidegrees {self.bidegree} and {other.bidegree}")

    def __add__(self, other: VForm) -> VForm:
        self._check(other)
        acc = dict(self.terms)
        for k, c in other.terms.items():
            acc[k] = acc[k] + c if k in acc else c
        return VForm(self.space, self.d, self.l, acc, max(self.s, other.s), max(self.r, other.r))

    def __neg__(self) -> VForm:
        return VForm(self.space, self.d, self.l, {k: -c for k, c in self.terms.items()}, self.s, self.r)

    def __sub__(self, other: VForm) -> VForm:
        return self + (-other)

    def scale(self, f) -> VForm:
        f = Expr._lift(f)
        return VForm(self.space, self.d, self.l,
                     {k: f * c for k, c in self.terms.items()},
                     max(self.s, jet_order(f)), self.r)

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, VForm):
            return NotImplemented
        return vform_eq(self, other)

    __hash__ = None

    def __repr__(self):
        return f"VForm(bidegree={self.bidegree}, orders={self.orders}, {len(self.terms)} terms)"


def _mi(n) -> MultiIndex:
    return n if isinstance(n, MultiIndex) else MultiIndex(tuple(n))


def _add_term(acc: dict, I, C, coeff: Expr, sign: int) -> None:
    """Insert ``sign*coeff`` at (I, C) after sorting both factors."""
    I, si = sort_with_sign(I)
    if not si:
        return
    C, sc = sort_with_sign(C, covector_key)
    if not sc:
        return
    c = coeff if si * sc * sign == 1 else -coeff
    key = (I, C)
    if key in acc:
        acc[key] = acc[key] + c
    else:
        acc[key] = c


# ---------------------------------------------------------------------------
# basis elements


def dx(space: JetSpace, *axes: int) -> VForm:
    return VForm.from_terms(space, len(axes), 0, [(axes, (), ONE)])


def dpsi(space: JetSpace, *covectors) -> VForm:
    return VForm.from_terms(space, 0, len(covectors), [((), covectors, ONE)])


def volume(space: JetSpace) -> VForm:
    return VForm.top(space, ONE)


# ---------------------------------------------------------------------------
# sections and vertical fields


@dataclass(frozen=True)
class Section:
    """A section x -> (u^1(x), ..., u^q(x)); components are closed-form
    expressions in the base coordinates or opaque functions."""

    space: JetSpace
    components: tuple[Expr, ...]

    def __post_init__(self):
        comps = tuple(Expr._lift(c) for c in self.components)
        if len(comps) != self.space.q:
            raise DimensionMismatch(f"{len(comps)} components for {self.space.q} fields")
        for c in comps:
            if has_jets(c):
                raise JetVariablePresent("section components may not reference jet variables")
        object.__setattr__(self, "components", comps)

    @classmethod
    def opaque(cls, space: JetSpace, names=None) -> Section:
        from .symexpr import opaque
        names = names or [f.upper() for f in space.fields]
        return cls(space, tuple(opaque(n, MultiIndex.zero(space.p)) for n in names))

    def jet(self, a: int, index: MultiIndex) -> Expr:
        return base_derivative(self.components[a], index)

    def __add__(self, other: Section) -> Section:
        return Section(self.space, tuple(u + v for u, v in zip(self.components, other.components)))

    def scaled(self, c) -> Section:
        return Section(self.space, tuple(u.scale(c) for u in self.components))


@dataclass(frozen=True)
class VerticalField:
    """A vertical field sum v^a d/dpsi^a.

    Components may depend on the base coordinates and the order-0 jet
    coordinates; a variation along a section uses base coordinates only.
    """

    space: JetSpace
    components: tuple[Expr, ...]

    def __post_init__(self):
        comps = tuple(Expr._lift(c) for c in self.components)
        if len(comps) != self.space.q:
            raise DimensionMismatch(f"{len(comps)} components for {self.space.q} fields")
        for c in comps:
            if any(a.index.order > 0 for a in jet_atoms(c)):
                raise JetVariablePresent("vertical field components may only use order-0 jets")
        object.__setattr__(self, "components", comps)

    @classmethod
    def opaque(cls, space: JetSpace, names=None) -> VerticalField:
        from .symexpr import opaque
        names = names or [f"Y{f}" if space.q > 1 else "Y" for f in space.fields]
        return cls(space, tuple(opaque(n, MultiIndex.zero(space.p)) for n in names))

    def along(self) -> bool:
        """True if the components involve no jet coordinates at all."""
        return not any(has_jets(c) for c in self.components)


# ---------------------------------------------------------------------------
# operations


def wedge(w1: VForm, w2: VForm) -> VForm:
    """Tensor-split wedge: horizontal and contact factors multiply separately."""
    if not w1.space.compatible(w2.space):
        raise DimensionMismatch("forms live on different jet spaces")
    acc: dict = {}
    for (I1, C1), c1 in w1.terms.items():
        for (I2, C2), c2 in w2.terms.items():
            _add_term(acc, I1 + I2, C1 + C2, c1 * c2, 1)
    return VForm(w1.space, w1.d + w2.d, w1.l + w2.l, acc,
                 max(w1.s, w2.s), max(w1.r, w2.r))


def contract(V: Mapping[Covector, Expr], w: VForm) -> VForm:
    """Interior product of the prolonged field ``{(a, N): V^a_N}`` with the
    contact factor of ``w``; missing coefficients count as zero."""
    if w.l < 1:
        raise ZeroContactDegree("cannot contract a form of contact degree 0")
    acc: dict = {}
    for (I, C), c in w.terms.items():
        for k, cov in enumerate(C):
            v = V.get(cov)
            if v is None or v.is_zero():
                continue
            coeff = v * c
            if k % 2:
                coeff = -coeff
            key = (I, C[:k] + C[k + 1:])
            acc[key] = acc[key] + coeff if key in acc else coeff
    vs = max((jet_order(v) for v in V.values()), default=0)
    return VForm(w.space, w.d, w.l - 1, acc, max(w.s, vs), w.r)


def order_lift(w: VForm, s: int, r: int) -> VForm:
    """Regard ``w`` as a form of orders ``(s, r)``; the terms are unchanged."""
    if s < w.s or r < w.r:
        raise OrderLowering(f"cannot lower orders {w.orders} to {(s, r)}")
    return w.copy_with(s, r)


def pull_back_section(w: VForm, section: Section) -> VForm:
    """Substitute the jets of ``section`` into every coefficient.

    The contact factor is kept as an inert value slot.
    """
    return w.map_coefficients(lambda c: subst_jets(c, section), s=0)


def base_exterior_d(w: VForm) -> VForm:
    """Exterior derivative on the horizontal factor for coefficients on the base."""
    for c in w.terms.values():
        if has_jets(c):
            raise JetVariablePresent("base_exterior_d needs coefficients free of jet variables")
    acc: dict = {}
    for (I, C), c in w.terms.items():
        for i in range(w.space.p):
            dc = partial_base(c, i)
            if not dc.is_zero():
                _add_term(acc, (i,) + I, C, dc, 1)
    return VForm(w.space, w.d + 1, w.l, acc, 0, w.r)


def vform_eq(w1: VForm, w2: VForm) -> bool:
    """Exact equality of terms (orders are metadata and are not compared)."""
    if not w1.space.compatible(w2.space) or w1.bidegree != w2.bidegree:
        return False
    keys = set(w1.terms) | set(w2.terms)
    return all(canonicalize(w1.terms.get(k, ZERO) - w2.terms.get(k, ZERO)).is_zero() for k in keys)


def covectors_up_to(space: JetSpace, r: int) -> list[Covector]:
    return [(a, n) for a in range(space.q) for n in mi_enumerate(space.p, r)]
