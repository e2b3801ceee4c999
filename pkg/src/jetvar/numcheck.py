"""Numerical checks on the periodic box [0, 2pi)^p.

Integrals use the uniform sum (trapezoid rule on the torus), which is
spectrally accurate for smooth periodic integrands.  Fréchet derivatives of
the action are central differences along the straight line u + t*y.
"""

from __future__ import annotations

import itertools
import json
import math
import time
from dataclasses import asdict, dataclass
from functools import cached_property

import numpy as np

from .jetops import contract, lie_derivative_section, variation_jets
from .multiindex import MultiIndex, mi_enumerate
from .symexpr import (
    ONE,
    Expr,
    NumericPoint,
    base_derivative,
    cos,
    eval_numeric,
    jet_order,
    sin,
    xvar,
)
from .varcalc import (
    decompose,
    euler_lagrange,
    first_variation,
    green_operator,
)
from .vforms import Section, VerticalField, VForm, base_exterior_d, pull_back_section

DEFAULT_TOL = 1e-6
DEFAULT_STEP = 1e-5
DEFAULT_N = 64


@dataclass(frozen=True)
class Grid:
    p: int
    n: int = DEFAULT_N

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be >= 1")
        if self.n < 4:
            raise ValueError("need at least 4 points per axis")

    @cached_property
    def axis(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.n) / self.n

    @cached_property
    def points(self) -> tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*([self.axis] * self.p), indexing="ij"))

    @property
    def cell_volume(self) -> float:
        return (2 * np.pi / self.n) ** self.p

    def integrate(self, values) -> float:
        values = np.broadcast_to(np.asarray(values, dtype=float), (self.n,) * self.p)
        return float(values.sum() * self.cell_volume)

    def point(self, flat_index: int) -> tuple[float, ...]:
        idx = np.unravel_index(flat_index, (self.n,) * self.p)
        return tuple(float(self.axis[k]) for k in idx)


@dataclass
class CheckReport:
    name: str
    lhs: float
    rhs: float
    abs_err: float
    rel_err: float
    tol: float
    passed: bool
    runtime_ms: float | None = None

    def to_json(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return {k: d[k] for k in ("name", "lhs", "rhs", "abs_err", "rel_err", "tol", "pass", "runtime_ms")}

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def make_report(name: str, lhs: float, rhs: float, tol: float, runtime_ms: float | None = None) -> CheckReport:
    """Relative error against max(|lhs|, |rhs|); absolute below 1e-12."""
    abs_err = abs(lhs - rhs)
    scale = max(abs(lhs), abs(rhs))
    rel_err = abs_err / scale if scale > 1e-12 else abs_err
    return CheckReport(name, float(lhs), float(rhs), float(abs_err), float(rel_err),
                       float(tol), bool(rel_err <= tol), runtime_ms)


# ---------------------------------------------------------------------------
# evaluation helpers


def _on_base(f: Expr, points) -> np.ndarray:
    return eval_numeric(f, NumericPoint(base=points))


def section_jets(components, order: int, points, p: int) -> dict:
    """Numeric values of d^N u^a on ``points`` for |N| <= order."""
    out = {}
    for a, comp in enumerate(components):
        for n in mi_enumerate(p, order):
            out[(a, n)] = _on_base(base_derivative(comp, n), points)
    return out


def _density_values(lam: VForm, jets: dict, points):
    return eval_numeric(lam.coefficient(), NumericPoint(base=points, jets=jets))


def _require_top(lam: VForm):
    if lam.bidegree != (lam.space.p, 0):
        raise ValueError(f"expected a Lagrangian of bidegree ({lam.space.p}, 0)")


def action(lam: VForm, section: Section, grid: Grid) -> float:
    """S(u) = integral over the torus of L(j u)."""
    _require_top(lam)
    r = jet_order(lam.coefficient())
    jets = section_jets(section.components, r, grid.points, grid.p)
    return grid.integrate(_density_values(lam, jets, grid.points))


def fd_action_derivative(lam: VForm, section: Section, y: VerticalField, grid: Grid,
                         h: float = DEFAULT_STEP) -> float:
    """(S(u + h y) - S(u - h y)) / 2h."""
    _require_top(lam)
    if h <= 0:
        raise ValueError("step must be positive")
    r = jet_order(lam.coefficient())
    ju = section_jets(section.components, r, grid.points, grid.p)
    jy = section_jets(y.components, r, grid.points, grid.p)
    plus = {k: ju[k] + h * jy[k] for k in ju}
    minus = {k: ju[k] - h * jy[k] for k in ju}
    s_plus = grid.integrate(_density_values(lam, plus, grid.points))
    s_minus = grid.integrate(_density_values(lam, minus, grid.points))
    return (s_plus - s_minus) / (2 * h)


def _integrate_form(w: VForm, grid: Grid) -> float:
    return grid.integrate(_on_base(w.coefficient(), grid.points))


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, 1000 * (time.perf_counter() - t0)


def verify_first_variation(lam: VForm, section: Section, y: VerticalField, grid: Grid | None = None,
                           h: float = DEFAULT_STEP, tol: float = DEFAULT_TOL) -> CheckReport:
    grid = grid or Grid(lam.space.p)

    def run():
        lhs = fd_action_derivative(lam, section, y, grid, h)
        rhs = _integrate_form(first_variation(lam, section, y), grid)
        return lhs, rhs

    (lhs, rhs), ms = _timed(run)
    return make_report("first_variation", lhs, rhs, tol, ms)


def euler_lagrange_pairing(lam: VForm, section: Section, y: VerticalField, eps: VForm | None = None) -> VForm:
    """<y, (j u)^* epsilon>, a p-form on the base."""
    eps = euler_lagrange(lam) if eps is None else eps
    return contract(variation_jets(y, section, 0), pull_back_section(eps, section))


def verify_green(lam: VForm, section: Section, y: VerticalField, grid: Grid | None = None,
                 h: float = DEFAULT_STEP, tol: float = DEFAULT_TOL) -> CheckReport:
    """FD derivative of the action against the integrated Euler-Lagrange pairing;
    the exact boundary term integrates to zero on the torus."""
    grid = grid or Grid(lam.space.p)

    def run():
        lhs = fd_action_derivative(lam, section, y, grid, h)
        rhs = _integrate_form(euler_lagrange_pairing(lam, section, y), grid)
        return lhs, rhs

    (lhs, rhs), ms = _timed(run)
    return make_report("green", lhs, rhs, tol, ms)


def exact_term_integral(lam: VForm, section: Section, y: VerticalField, grid: Grid | None = None,
                        strategy: str = "min-axis") -> float:
    """Quadrature of d(G(y)) over the torus."""
    grid = grid or Grid(lam.space.p)
    kappa = decompose(lam, strategy).kappa
    G = green_operator(kappa, section, y)
    return _integrate_form(base_exterior_d(G), grid)


def fd_convergence(lam: VForm, section: Section, y: VerticalField, grid: Grid | None = None,
                   steps=(1e-3, 1e-4, 1e-5)) -> dict:
    """Errors of the FD derivative against the symbolic first variation, and the
    least-squares slope of log(error) against log(h)."""
    grid = grid or Grid(lam.space.p)
    exact = _integrate_form(first_variation(lam, section, y), grid)
    errors = [abs(fd_action_derivative(lam, section, y, grid, h) - exact) for h in steps]
    # absolute errors when the exact value vanishes, as in make_report
    scale = abs(exact) if abs(exact) > 1e-12 else 1.0
    logs = np.log(np.maximum(np.asarray(errors), 1e-300))
    slope = float(np.polyfit(np.log(steps), logs, 1)[0])
    return {"steps": list(steps), "errors": errors, "rel_errors": [e / scale for e in errors],
            "exact": exact, "slope": slope}


# ---------------------------------------------------------------------------
# pointwise oracles


def fourier_basis(p: int, K: int):
    """Products of {1, cos(kx), sin(kx)} per axis with 1 <= k <= K, and their
    squared L2 norms on the torus."""
    per_axis = []
    for i in range(p):
        x = xvar(i)
        fns = [(ONE, 2 * math.pi)]
        for k in range(1, K + 1):
            fns.append((cos(x.scale(k)), math.pi))
            fns.append((sin(x.scale(k)), math.pi))
        per_axis.append(fns)
    for combo in itertools.product(*per_axis):
        f = ONE
        norm = 1.0
        for g, nm in combo:
            f = f * g
            norm *= nm
        yield f, norm


def el_fd_oracle(lam: VForm, section: Section, grid: Grid, points, K: int,
                 h: float = DEFAULT_STEP) -> np.ndarray:
    """Euler-Lagrange expression at ``points`` recovered from the action alone.

    Each Fourier coefficient of E(u) is the FD derivative of S in the direction
    of that basis function divided by its squared norm; E(u) is a trigonometric
    polynomial of degree <= K for polynomial L and trigonometric u.  Returns an
    array of shape (q, len(points)).
    """
    space = lam.space
    pts = tuple(np.asarray([pt[i] for pt in points], dtype=float) for i in range(space.p))
    out = np.zeros((space.q, len(points)))
    zero = Expr()
    for a in range(space.q):
        for f, norm in fourier_basis(space.p, K):
            comps = tuple(f if b == a else zero for b in range(space.q))
            y = VerticalField(space, comps)
            coeff = fd_action_derivative(lam, section, y, grid, h) / norm
            out[a] += coeff * np.broadcast_to(_on_base(f, pts), (len(points),))
    return out


def el_symbolic_at(lam: VForm, section: Section, points) -> np.ndarray:
    space = lam.space
    eps = euler_lagrange(lam)
    pts = tuple(np.asarray([pt[i] for pt in points], dtype=float) for i in range(space.p))
    vals = np.zeros((space.q, len(points)))
    for a in range(space.q):
        c = eps.coefficient(C=[(a, MultiIndex.zero(space.p))])
        from .symexpr import subst_jets

        vals[a] = np.broadcast_to(_on_base(subst_jets(c, section), pts), (len(points),))
    return vals


def verify_el_pointwise(lam: VForm, section: Section, grid: Grid, points, K: int,
                        h: float = DEFAULT_STEP, tol: float = DEFAULT_TOL) -> list[CheckReport]:
    fd = el_fd_oracle(lam, section, grid, points, K, h)
    sym = el_symbolic_at(lam, section, points)
    reports = []
    for a in range(lam.space.q):
        for k, pt in enumerate(points):
            name = f"el[{lam.space.fields[a]}]@" + ",".join(f"{c:.4f}" for c in pt)
            reports.append(make_report(name, fd[a, k], sym[a, k], tol))
    return reports


def verify_lie_derivative(beta: VForm, section: Section, y: VerticalField, points,
                          h: float = DEFAULT_STEP, tol: float = DEFAULT_TOL) -> CheckReport:
    """Lie derivative of a semi-basic form along a variation against
    d/dt (u + t y)^* beta at t = 0, every component at every point.

    Errors are measured in the max norm relative to the largest magnitude seen.
    """
    space = beta.space
    npts = len(points)
    pts = tuple(np.asarray([pt[i] for pt in points], dtype=float) for i in range(space.p))
    sym = lie_derivative_section(y, beta, section)
    r = jet_order_of_form(beta)
    ju = section_jets(section.components, r, pts, space.p)
    jy = section_jets(y.components, r, pts, space.p)
    plus = NumericPoint(base=pts, jets={k: ju[k] + h * jy[k] for k in ju})
    minus = NumericPoint(base=pts, jets={k: ju[k] - h * jy[k] for k in ju})
    fd_vals, sym_vals = [], []
    for key in sorted(set(beta.terms) | set(sym.terms)):
        c = beta.terms.get(key)
        if c is None:
            fd = np.zeros(npts)
        else:
            fd = (np.asarray(eval_numeric(c, plus)) - np.asarray(eval_numeric(c, minus))) / (2 * h)
        s = sym.terms.get(key)
        sv = np.zeros(npts) if s is None else _on_base(s, pts)
        fd_vals.append(np.broadcast_to(fd, (npts,)))
        sym_vals.append(np.broadcast_to(sv, (npts,)))
    fd_all = np.concatenate(fd_vals) if fd_vals else np.zeros(1)
    sym_all = np.concatenate(sym_vals) if sym_vals else np.zeros(1)
    diff = np.abs(fd_all - sym_all)
    worst = int(np.argmax(diff))
    abs_err = float(diff[worst])
    scale = float(max(np.max(np.abs(fd_all)), np.max(np.abs(sym_all))))
    rel_err = abs_err / scale if scale > 1e-12 else abs_err
    return CheckReport("lie_derivative", float(fd_all[worst]), float(sym_all[worst]),
                       abs_err, rel_err, tol, rel_err <= tol)


def jet_order_of_form(w: VForm) -> int:
    return max((jet_order(c) for c in w.terms.values()), default=0)
