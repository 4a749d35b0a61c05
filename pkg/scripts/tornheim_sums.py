"""S(2g,2g,2g) three ways: diagonal summation with a certified tail, Bernoulli integral, residue.

    python3 scripts/tornheim_sums.py --g 1 2 3 --target 1e-15
"""

import argparse
from dataclasses import dataclass, field

import mpmath

from sln_verlinde.exact import format_rational
from sln_verlinde.witten_zeta import TornheimRequest, mzv_bernoulli, mzv_direct, mzv_residue


@dataclass
class Config:
    gs: list = field(default_factory=lambda: [1, 2, 3])
    target: float = 1e-15
    precision_bits: int = 256


def main(cfg: Config):
    ctx = mpmath.MPContext()
    ctx.prec = cfg.precision_bits
    for g in cfg.gs:
        b = mzv_bernoulli(g)
        r = mzv_residue(g)
        d = mzv_direct(TornheimRequest(2 * g, 2 * g, 2 * g, cfg.target), cfg.precision_bits)
        err = abs(b.to_mpf(ctx) - d.value)
        print(f"S({2*g},{2*g},{2*g}) = {format_rational(b.coefficient)} pi^{b.pi_power}"
              f"  (residue route agrees: {r == b.coefficient})")
        print(f"  direct: {mpmath.nstr(d.value, 20)} +- {mpmath.nstr(d.error_bound, 3)}"
              f" over {d.diagonals} diagonals, actual error {mpmath.nstr(err, 3)}")


if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("--g", type=int, nargs="+", default=[1, 2, 3])
    p.add_argument("--target", type=float, default=1e-15)
    a = p.parse_args()
    main(Config(a.g, a.target))
