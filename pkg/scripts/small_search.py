"""Exact maximum |A||B| for small ground sets, by kind.

n <= 3 uses the symmetry-reduced exhaustive walk; larger n uses branch and
bound (n = 4 finishes in seconds, n = 5 needs a large budget and may stop
early, in which case the value is only a lower bound).
"""

import argparse
from dataclasses import dataclass, field

from sandglass.search import KINDS, bnb_max_product, exhaustive_max_product, verify_witness
from sandglass.setfam import format_pair


@dataclass
class Config:
    n_max: int = 4
    budget: int = 10**7
    kinds: tuple = field(default=KINDS)
    show_witness: bool = False


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=Config.n_max)
    ap.add_argument("--budget", type=int, default=Config.budget)
    ap.add_argument("--kinds", nargs="+", choices=KINDS, default=list(KINDS))
    ap.add_argument("--show-witness", action="store_true")
    a = ap.parse_args()
    cfg = Config(a.n_max, a.budget, tuple(a.kinds), a.show_witness)

    print(f"{'n':>2} {'kind':>18} {'max':>5} {'exact':>5} {'nodes':>9}  witness ok")
    for n in range(1, cfg.n_max + 1):
        for kind in cfg.kinds:
            if n <= 3:
                res = exhaustive_max_product(n, kind)
            else:
                res = bnb_max_product(n, kind, budget=cfg.budget)
            print(f"{n:>2} {kind:>18} {res.best_product:>5} {str(res.exhaustive):>5} "
                  f"{res.nodes_explored:>9}  {verify_witness(res)}")
            if cfg.show_witness:
                print("   " + format_pair(res.witness).replace("\n", "\n   "))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
