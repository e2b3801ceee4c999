"""Symbolic higher-order variational calculus on jet spaces."""

from .jetops import IotaMode, d_pi, d_t, iota, operator_E, total_derivative
from .multiindex import MultiIndex, mi_enumerate
from .parsing import parse_expr
from .symexpr import Expr, JetSpace, canonicalize, to_text
from .varcalc import decompose, euler_lagrange, first_variation, green_operator
from .vforms import Section, VerticalField, VForm, wedge

__all__ = [
    "Expr", "IotaMode", "JetSpace", "MultiIndex", "Section", "VForm", "VerticalField",
    "canonicalize", "d_pi", "d_t", "decompose", "euler_lagrange", "first_variation",
    "green_operator", "iota", "mi_enumerate", "operator_E", "parse_expr", "to_text",
    "total_derivative", "wedge",
]
