"""Compare the literal and weighted iota readings of the operator E against
the Euler-Lagrange form on random Lagrangians of each order."""

import argparse
from dataclasses import dataclass

from jetvar.jetops import IotaMode, operator_E
from jetvar.randgen import random_lagrangian
from jetvar.render import vform_text
from jetvar.symexpr import JetSpace
from jetvar.varcalc import euler_lagrange


@dataclass
class Config:
    p_max: int = 3
    r_max: int = 3
    seeds: int = 5
    show: bool = False


def run(cfg: Config):
    coords = ("x", "y", "z")
    print(f"{'p':>2} {'r':>2} {'weighted==EL':>13} {'literal==EL':>12}")
    for p in range(1, cfg.p_max + 1):
        for r in range(1, cfg.r_max + 1):
            sp = JetSpace(coords[:p], ("u",), r)
            agree = {mode: 0 for mode in IotaMode}
            for seed in range(cfg.seeds):
                lam = random_lagrangian(sp, r, 3, 3, rng=seed)
                eps = euler_lagrange(lam)
                for mode in IotaMode:
                    E = operator_E(lam, mode)
                    agree[mode] += E == eps
                    if cfg.show and mode is IotaMode.LITERAL and E != eps and seed == 0:
                        print("   literal - EL =", vform_text(E - eps))
            print(f"{p:>2} {r:>2} {agree[IotaMode.WEIGHTED]:>10}/{cfg.seeds} "
                  f"{agree[IotaMode.LITERAL]:>9}/{cfg.seeds}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p-max", type=int, default=3)
    ap.add_argument("--r-max", type=int, default=3)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--show", action="store_true", help="print one literal-mode discrepancy per row")
    a = ap.parse_args()
    run(Config(a.p_max, a.r_max, a.seeds, a.show))


if __name__ == "__main__":
    main()
