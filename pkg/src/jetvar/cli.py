"""``jetvar el|decompose|verify <file>``.

Exit codes: 0 success, 1 a check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import render as R
from .errors import JetvarError
from .jetops import IotaMode, operator_E
from .multiindex import MultiIndex
from .numcheck import Grid, make_report, verify_first_variation, verify_green
from .problem import ProblemFile, parse_problem_file
from .randgen import random_trig_poly, rng_from
from .symexpr import to_text
from .varcalc import decompose, decomposition_residual, euler_lagrange, green_identity_residual
from .vforms import Section, VerticalField, VForm

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _eps_lines(eps: VForm) -> list[str]:
    """One ``epsilon[u] = ...`` line per field when epsilon lives on dpsi^a_0."""
    sp = eps.space
    zero = MultiIndex.zero(sp.p)
    return [f"epsilon[{name}] = {to_text(eps.coefficient(C=[(a, zero)]), sp)}"
            for a, name in enumerate(sp.fields)]


def _is_el_shaped(eps: VForm) -> bool:
    return all(n.order == 0 for (_, C) in eps.terms for _, n in C)


def cmd_el(prob: ProblemFile, fmt: str = "text", iota: str | None = None) -> str:
    lam = prob.form
    if iota is None:
        eps, route = euler_lagrange(lam), "direct"
    else:
        eps, route = operator_E(lam, IotaMode(iota)), f"operator-E/{iota}"
    if fmt == "json":
        return R.dumps({"command": "el", "route": route, "epsilon": R.vform_json(eps)})
    if fmt == "latex":
        return R.vform_latex(eps)
    if _is_el_shaped(eps):
        return "\n".join(_eps_lines(eps))
    return "epsilon = " + R.vform_text(eps)


def cmd_decompose(prob: ProblemFile, fmt: str = "text", strategy: str = "min-axis") -> str:
    res = decompose(prob.form, strategy)
    if fmt == "json":
        return R.dumps({"command": "decompose", "strategy": strategy,
                        "epsilon": R.vform_json(res.epsilon), "kappa": R.vform_json(res.kappa)})
    if fmt == "latex":
        return "\n".join([
            "\\epsilon = " + R.vform_latex(res.epsilon),
            "\\kappa = " + R.vform_latex(res.kappa),
        ])
    return "\n".join(_eps_lines(res.epsilon) + ["kappa = " + R.vform_text(res.kappa)])


def verification_data(prob: ProblemFile) -> tuple[Section, VerticalField]:
    """Sections and variations from the file; missing components are seeded
    random trigonometric polynomials of degree <= 3."""
    sp = prob.space
    rng = rng_from(prob.seed)
    sec, var = [], []
    for name in sp.fields:
        sec.append(prob.sections[name] if name in prob.sections else random_trig_poly(sp.p, 3, rng))
    for name in sp.fields:
        var.append(prob.variations[name] if name in prob.variations else random_trig_poly(sp.p, 3, rng))
    return Section(sp, tuple(sec)), VerticalField(sp, tuple(var))


def _ms_since(t0: float) -> float:
    return 1000 * (time.perf_counter() - t0)


def run_verify(prob: ProblemFile, strategy: str = "min-axis", timing: bool = False):
    lam = prob.form
    section, y = verification_data(prob)
    grid = Grid(prob.space.p, prob.grid)
    reports = []

    t0 = time.perf_counter()
    res = decompose(lam, strategy, check=False)
    resid = decomposition_residual(lam, res)
    reports.append(make_report("decomposition_identity", float(len(resid.terms)), 0.0, 0.0,
                               _ms_since(t0)))

    t0 = time.perf_counter()
    sym = green_identity_residual(lam, Section.opaque(prob.space), VerticalField.opaque(prob.space), strategy)
    reports.append(make_report("green_residual_symbolic", float(len(sym.terms)), 0.0, 0.0,
                               _ms_since(t0)))

    reports.append(verify_first_variation(lam, section, y, grid, prob.fd_step))
    reports.append(verify_green(lam, section, y, grid, prob.fd_step))
    if not timing:
        for rep in reports:
            rep.runtime_ms = None
    return reports


def cmd_verify(prob: ProblemFile, fmt: str = "text", strategy: str = "min-axis",
               timing: bool = False) -> tuple[str, bool]:
    reports = run_verify(prob, strategy, timing)
    ok = all(r.passed for r in reports)
    if fmt == "json":
        out = R.dumps({"command": "verify", "pass": ok, "reports": [r.to_json() for r in reports]})
    elif fmt == "text":
        out = "\n".join(R.report_text(r) for r in reports)
    else:
        raise R.UnsupportedFormat("verify supports text and json output")
    return out, ok


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jetvar", description="Variational calculus on jet spaces.")
    ap.add_argument("command", choices=("el", "decompose", "verify"))
    ap.add_argument("file", help="problem file ('-' for stdin)")
    ap.add_argument("--format", choices=R.FORMATS, default="text")
    ap.add_argument("--iota", choices=("literal", "weighted"), default=None,
                    help="el: compute epsilon with the operator E in this mode")
    ap.add_argument("--strategy", choices=("min-axis", "max-axis"), default="min-axis")
    ap.add_argument("--timing", action="store_true", help="verify: record runtimes")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.file == "-":
            text = sys.stdin.read()
        else:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        prob = parse_problem_file(text)
        if args.command == "el":
            out, ok = cmd_el(prob, args.format, args.iota), True
        elif args.command == "decompose":
            out, ok = cmd_decompose(prob, args.format, args.strategy), True
        else:
            out, ok = cmd_verify(prob, args.format, args.strategy, args.timing)
    except OSError as exc:
        print(f"jetvar: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except JetvarError as exc:
        print(f"jetvar: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(out + "\n")
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
