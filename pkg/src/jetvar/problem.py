"""Line-based problem files.

    base 1
    coords x
    field u
    order 1
    lagrangian (1/2)*u_x^2 - (1/2)*u^2
    section u = sin(x)        # optional, for verify
    variation u = cos(x)      # optional, for verify
    grid 64                   # optional
    fd_step 1e-5              # optional
    seed 42                   # optional

``field`` may list several names and may repeat; ``#`` starts a comment.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    DuplicateName,
    ExprSyntaxError,
    OrderExceeded,
    OrderMismatch,
    ProblemSyntaxError,
    UnknownIdentifier,
)
from .numcheck import DEFAULT_N, DEFAULT_STEP
from .parsing import parse_expr
from .symexpr import Expr, JetSpace, has_jets, jet_order
from .vforms import VForm

_PARSE_CAP = 64
_SINGLE = ("base", "coords", "order", "lagrangian", "grid", "fd_step", "seed")
_KEYWORDS = _SINGLE + ("field", "fields", "section", "variation")


@dataclass
class ProblemFile:
    space: JetSpace
    order: int
    lagrangian_text: str
    lagrangian: Expr
    sections: dict[str, Expr] = field(default_factory=dict)
    variations: dict[str, Expr] = field(default_factory=dict)
    grid: int = DEFAULT_N
    fd_step: float = DEFAULT_STEP
    seed: int = 0

    @property
    def form(self) -> VForm:
        return VForm.top(self.space, self.lagrangian)


def _names(rest: str, lineno: int, what: str) -> list[str]:
    names = rest.split()
    if not names:
        raise ProblemSyntaxError(f"'{what}' needs at least one name", lineno)
    return names


def _int(rest: str, lineno: int, what: str, minimum: int = 0) -> int:
    try:
        v = int(rest)
    except ValueError:
        raise ProblemSyntaxError(f"'{what}' expects an integer, got {rest!r}", lineno) from None
    if v < minimum:
        raise ProblemSyntaxError(f"'{what}' must be >= {minimum}", lineno)
    return v


def parse_problem_file(text: str) -> ProblemFile:
    seen: dict[str, tuple[str, int]] = {}
    coords: list[str] = []
    fields: list[str] = []
    assignments = {"section": [], "variation": []}
    lines = text.splitlines()

    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key not in _KEYWORDS:
            raise ProblemSyntaxError(f"unknown keyword {key!r}", lineno)
        if key in _SINGLE:
            if key in seen:
                raise ProblemSyntaxError(f"'{key}' given twice (first on line {seen[key][1]})", lineno)
            if not rest:
                raise ProblemSyntaxError(f"'{key}' needs a value", lineno)
            seen[key] = (rest, lineno)
        if key == "coords":
            coords = _names(rest, lineno, key)
        elif key in ("field", "fields"):
            for name in _names(rest, lineno, key):
                if name in fields:
                    raise DuplicateName(f"field {name!r} declared twice", lineno)
                fields.append(name)
            seen.setdefault("field", (rest, lineno))
        elif key in assignments:
            target, eq, expr = rest.partition("=")
            if not eq or not target.strip() or not expr.strip():
                raise ProblemSyntaxError(f"expected '{key} <field> = <expression>'", lineno)
            assignments[key].append((target.strip(), expr.strip(), lineno))

    for required in ("coords", "field", "order", "lagrangian"):
        if required not in seen:
            raise ProblemSyntaxError(f"missing '{required}' line", len(lines) + 1)

    coords_line = seen["coords"][1]
    if len(set(coords)) != len(coords):
        raise DuplicateName("repeated coordinate name", coords_line)
    clash = set(coords) & set(fields)
    if clash:
        raise DuplicateName(f"{sorted(clash)[0]!r} is both a coordinate and a field", seen["field"][1])
    if "base" in seen:
        p = _int(seen["base"][0], seen["base"][1], "base", 1)
        if p != len(coords):
            raise ProblemSyntaxError(f"base {p} but {len(coords)} coordinate names", seen["base"][1])
    order = _int(*seen["order"], "order")
    try:
        space = JetSpace(tuple(coords), tuple(fields), order)
    except ValueError as exc:
        raise ProblemSyntaxError(str(exc), coords_line) from None

    lag_text, lag_line = seen["lagrangian"]
    lag = _parse(lag_text, space.with_order(_PARSE_CAP), lag_line)
    if jet_order(lag) > order:
        raise OrderMismatch(f"lagrangian has order {jet_order(lag)} but 'order {order}' was declared", lag_line)

    parsed = {}
    for kind, items in assignments.items():
        parsed[kind] = {}
        for target, expr, lineno in items:
            if target not in fields:
                raise ProblemSyntaxError(f"{kind} for unknown field {target!r}", lineno)
            if target in parsed[kind]:
                raise DuplicateName(f"{kind} for {target!r} given twice", lineno)
            e = _parse(expr, space, lineno)
            if has_jets(e):
                raise ProblemSyntaxError(f"{kind} must depend on the coordinates only", lineno)
            parsed[kind][target] = e

    grid = _int(*seen["grid"], "grid", 4) if "grid" in seen else DEFAULT_N
    seed = _int(*seen["seed"], "seed") if "seed" in seen else 0
    fd_step = DEFAULT_STEP
    if "fd_step" in seen:
        txt, lineno = seen["fd_step"]
        try:
            fd_step = float(txt)
        except ValueError:
            raise ProblemSyntaxError(f"'fd_step' expects a number, got {txt!r}", lineno) from None
        if not fd_step > 0:
            raise ProblemSyntaxError("'fd_step' must be positive", lineno)

    return ProblemFile(space, order, lag_text, lag, parsed["section"], parsed["variation"],
                       grid, fd_step, seed)


def _parse(text: str, space: JetSpace, lineno: int) -> Expr:
    try:
        return parse_expr(text, space)
    except (ExprSyntaxError, UnknownIdentifier, OrderExceeded) as exc:
        raise ProblemSyntaxError(str(exc), lineno) from exc
