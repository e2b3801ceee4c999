"""Error of the central-difference action derivative against the symbolic
first variation as the step shrinks, for each problem file."""

import argparse
from dataclasses import dataclass, field
from pathlib import Path

from jetvar.cli import verification_data
from jetvar.numcheck import Grid, fd_convergence
from jetvar.problem import parse_problem_file

ROOT = Path(__file__).resolve().parents[1]


@dataclass
class Config:
    problems: list = field(default_factory=lambda: sorted((ROOT / "problems").glob("*.jv")))
    steps: tuple = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)


def run(cfg: Config):
    for path in cfg.problems:
        prob = parse_problem_file(Path(path).read_text())
        section, y = verification_data(prob)
        conv = fd_convergence(prob.form, section, y, Grid(prob.space.p, prob.grid), cfg.steps)
        print(f"{Path(path).stem}: exact = {conv['exact']:.12e}, fitted slope = {conv['slope']:.3f}")
        for h, e in zip(conv["steps"], conv["rel_errors"]):
            print(f"   h = {h:.0e}   rel_err = {e:.3e}   rel_err / h^2 = {e / h ** 2:.3e}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("problems", nargs="*", help="problem files (default: problems/*.jv)")
    ap.add_argument("--steps", type=float, nargs="+", default=None)
    a = ap.parse_args()
    cfg = Config()
    if a.problems:
        cfg.problems = a.problems
    if a.steps:
        cfg.steps = tuple(a.steps)
    run(cfg)


if __name__ == "__main__":
    main()
