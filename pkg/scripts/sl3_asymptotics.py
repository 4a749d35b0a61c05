"""Compare the top coefficient of the SL_3 level polynomial with 3^g S(m,m,m)/(64^(g-1) pi^(6(g-1))),
m = 2(g-1), and show V_k / k^(8(g-1)) approaching it.

    python3 scripts/sl3_asymptotics.py --g 2 3 --levels 10 20 40 80 160
"""

import argparse
from dataclasses import dataclass, field

from sln_verlinde.exact import format_rational
from sln_verlinde.witten_zeta import sl3_leading_check


@dataclass
class Config:
    gs: list = field(default_factory=lambda: [2, 3])
    levels: list = field(default_factory=lambda: [10, 20, 40, 80])


def main(cfg: Config):
    for g in cfg.gs:
        rep = sl3_leading_check(g, cfg.levels)
        print(f"g={g}: polynomial {format_rational(rep.polynomial_coefficient)}, "
              f"Tornheim prediction {format_rational(rep.predicted)}, equal: {rep.exact_match}")
        target = float(rep.predicted)
        for k, r in rep.ratios:
            print(f"  k={k:4d}  V_k/k^{8 * (g - 1)} = {float(r):.6e}  ratio to limit {float(r) / target:.5f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("--g", type=int, nargs="+", default=[2, 3])
    p.add_argument("--levels", type=int, nargs="+", default=[10, 20, 40, 80])
    a = p.parse_args()
    main(Config(a.g, a.levels))
