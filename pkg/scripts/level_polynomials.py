"""Tabulate level polynomials V_k^{SL_n}(g), their timings, and spot checks against sums.

    python3 scripts/level_polynomials.py --n 2 3 4 --g 2 3
"""

import argparse
import time
from dataclasses import dataclass, field

from sln_verlinde.verlinde import verlinde_polynomial, verlinde_sum


@dataclass
class Config:
    ns: list = field(default_factory=lambda: [2, 3])
    gs: list = field(default_factory=lambda: [2, 3])
    check_levels: int = 4  # compare with the trigonometric sum at this many levels


def main(cfg: Config):
    for n in cfg.ns:
        for g in cfg.gs:
            t = time.perf_counter()
            P = verlinde_polynomial(n, g)
            dt = time.perf_counter() - t
            ks = range(n, n + cfg.check_levels)
            agree = all(P.evaluate_integer(k) == verlinde_sum(n, k, g) for k in ks)
            print(f"SL{n} g={g}: degree {P.degree}, {dt:.3f}s, matches sums at k={ks.start}..{ks.stop - 1}: {agree}")
            print(f"  V(k) = {P}")


if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("--n", type=int, nargs="+", default=[2, 3])
    p.add_argument("--g", type=int, nargs="+", default=[2, 3])
    p.add_argument("--check-levels", type=int, default=4)
    a = p.parse_args()
    main(Config(a.n, a.g, a.check_levels))
