"""Print the SL_3 residue matrix M_k(g) and its column sums.

    python3 scripts/residue_matrix_table.py --k 6 --g 2
"""

import argparse
from dataclasses import dataclass

import mpmath

from sln_verlinde.verlinde import RoundingGuardError, residue_matrix, residue_matrix_values


@dataclass
class Config:
    k: int = 6
    g: int = 2
    precision_bits: int = 256


def main(cfg: Config):
    try:
        M = residue_matrix(cfg.k, cfg.g, cfg.precision_bits)
    except RoundingGuardError:
        print(f"M_{cfg.k}({cfg.g}) has non-integer entries; showing 12 digits")
        for row in residue_matrix_values(cfg.k, cfg.g, cfg.precision_bits):
            print("  ".join(mpmath.nstr(x.real, 12).rjust(16) for x in row))
        return
    width = max(len(str(x)) for r in M.rows() for x in r)
    for row in M.rows():
        print(" ".join(str(x).rjust(width) for x in row))
    print("column sums:", M.column_sums())


if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("--k", type=int, default=Config.k)
    p.add_argument("--g", type=int, default=Config.g)
    p.add_argument("--precision-bits", type=int, default=Config.precision_bits)
    a = p.parse_args()
    main(Config(a.k, a.g, a.precision_bits))
