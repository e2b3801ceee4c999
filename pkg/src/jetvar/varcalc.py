"""First variation, integration by parts, Euler-Lagrange and Green forms."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .errors import IdentityCheckFailed, NotLagrangian
from .jetops import d_pi, d_t, prolonged_coefficients, total_derivative_expr, variation_jets
from .multiindex import MultiIndex, mi_enumerate, mi_shift
from .symexpr import ZERO, Expr, jet_order, partial_jet, subst_jets
from .vforms import (
    Section,
    VerticalField,
    VForm,
    _add_term,
    base_exterior_d,
    contract,
    order_lift,
    pull_back_section,
)


@dataclass(frozen=True)
class ProlongedField:
    """Coefficients {(a, N): D_N v^a} of the order-r prolongation of a vertical field."""

    space: object
    r: int
    coefficients: dict = field(hash=False)

    def __getitem__(self, key):
        return self.coefficients[key]


def prolong_vertical(v: VerticalField, r: int) -> ProlongedField:
    return ProlongedField(v.space, r, prolonged_coefficients(v, r))


def prolong_truncate(P: ProlongedField, r: int) -> ProlongedField:
    if r > P.r:
        raise ValueError(f"cannot truncate order {P.r} to {r}")
    return ProlongedField(P.space, r, {k: v for k, v in P.coefficients.items() if k[1].order <= r})


# ---------------------------------------------------------------------------
# reduction strategies


def min_axis(n: MultiIndex) -> int:
    return next(i for i, c in enumerate(n.counts) if c)


def max_axis(n: MultiIndex) -> int:
    return max(i for i, c in enumerate(n.counts) if c)


STRATEGIES: dict[str, Callable[[MultiIndex], int]] = {
    "min-axis": min_axis,
    "max-axis": max_axis,
}


@dataclass
class DecompResult:
    epsilon: VForm
    kappa: VForm
    strategy: str
    order: int


def _require_lagrangian(lam: VForm) -> None:
    p = lam.space.p
    if lam.bidegree != (p, 0):
        raise NotLagrangian(f"expected bidegree ({p}, 0), got {lam.bidegree}")


def _density(lam: VForm) -> Expr:
    return lam.coefficient()


def lagrangian_order(lam: VForm) -> int:
    return max(lam.s, jet_order(_density(lam)))


def decompose(lam: VForm, strategy: str = "min-axis", check: bool = True) -> DecompResult:
    """Split d_pi(lam) = epsilon + d_t(kappa) by repeated integration by parts.

    Every term c dpsi^a_N (x) vol with |N| > 0 is rewritten as
    d_t(c dpsi^a_{N-1_i} (x) d_i -| vol) - D_i(c) dpsi^a_{N-1_i} (x) vol
    for the axis i picked by ``strategy``; what survives at N = 0 is epsilon.
    """
    _require_lagrangian(lam)
    pick = STRATEGIES[strategy]
    space = lam.space
    p = space.p
    r = lagrangian_order(lam)
    vol = tuple(range(p))

    pending: dict = {}
    for (_, C), c in d_pi(lam).terms.items():
        pending[C[0]] = c

    kappa_terms: dict = {}
    eps_terms: dict = {}
    while pending:
        # highest order first, so contributions merge before being processed
        cov = max(pending, key=lambda k: (k[1].order, k[0], k[1].counts))
        c = pending.pop(cov)
        if c.is_zero():
            continue
        a, n = cov
        if n.order == 0:
            eps_terms[(vol, (cov,))] = c
            continue
        i = pick(n)
        lower = (a, mi_shift(n, i, -1))
        hook = vol[:i] + vol[i + 1:]
        _add_term(kappa_terms, hook, (lower,), c if i % 2 == 0 else -c, 1)
        pending[lower] = pending.get(lower, ZERO) - total_derivative_expr(c, i)

    epsilon = VForm(space, p, 1, eps_terms, 2 * r, 0)
    kappa = VForm(space, p - 1, 1, kappa_terms, max(2 * r - 1, 0), max(r - 1, 0))
    result = DecompResult(epsilon, kappa, strategy, r)
    if check and not decomposition_holds(lam, result):
        raise IdentityCheckFailed("d_pi(lambda) != epsilon + d_t(kappa)")
    return result


def decomposition_residual(lam: VForm, result: DecompResult) -> VForm:
    r = result.order
    lhs = order_lift(d_pi(lam), max(2 * r, lam.s), max(r, d_pi(lam).r))
    return lhs - result.epsilon - d_t(result.kappa)


def decomposition_holds(lam: VForm, result: DecompResult) -> bool:
    return decomposition_residual(lam, result).is_zero()


def euler_lagrange(lam: VForm) -> VForm:
    """sum_a [ sum_N (-1)^|N| D_N (dL/dpsi^a_N) ] dpsi^a (x) vol."""
    _require_lagrangian(lam)
    space = lam.space
    L = _density(lam)
    r = lagrangian_order(lam)
    vol = tuple(range(space.p))
    terms = {}
    for a in range(space.q):
        total = ZERO
        for n in mi_enumerate(space.p, r):
            piece = partial_jet(L, a, n)
            if piece.is_zero():
                continue
            for i, cnt in enumerate(n.counts):
                for _ in range(cnt):
                    piece = total_derivative_expr(piece, i)
            total = total + (piece if n.order % 2 == 0 else -piece)
        terms[(vol, ((a, MultiIndex.zero(space.p)),))] = total
    return VForm(space, space.p, 1, terms, 2 * r, 0)


def _variation_on_base(y: VerticalField, section: Section, r: int) -> dict:
    return variation_jets(y, section, r)


def first_variation(lam: VForm, section: Section, y: VerticalField) -> VForm:
    """<prolonged y, (j section)^* d_pi lam>, a p-form on the base."""
    _require_lagrangian(lam)
    dp = pull_back_section(d_pi(lam), section)
    return contract(_variation_on_base(y, section, dp.r), dp)


def green_operator(kappa: VForm, section: Section, y: VerticalField) -> VForm:
    """<prolonged y, (j section)^* kappa>, a (p-1)-form on the base."""
    pk = pull_back_section(kappa, section)
    if pk.l == 0:
        return pk
    return contract(_variation_on_base(y, section, pk.r), pk)


def green_identity_residual(lam: VForm, section: Section, y: VerticalField,
                            strategy: str = "min-axis") -> VForm:
    """first variation - <y, epsilon along section> - d(G(y)); identically zero."""
    eps = euler_lagrange(lam)
    kappa = decompose(lam, strategy).kappa
    fv = first_variation(lam, section, y)
    bulk = contract(_variation_on_base(y, section, 0), pull_back_section(eps, section))
    if kappa.is_zero():
        return fv - bulk
    return fv - bulk - base_exterior_d(green_operator(kappa, section, y))


def prolongation_identity_holds(v: VerticalField, section: Section, r: int) -> bool:
    """subst(D_N v^a, section) == d^N/dx^N (v^a o section) for all |N| <= r."""
    from .symexpr import base_derivative

    coeffs = prolonged_coefficients(v, r)
    for (a, n), c in coeffs.items():
        composed = subst_jets(v.components[a], section)
        if not (subst_jets(c, section) - base_derivative(composed, n)).is_zero():
            return False
    return True
