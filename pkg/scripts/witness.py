"""Non-normal witness on the dyadic sequence 1 - 2^-n.

Builds the solution with prescribed zeros and derivatives and prints the
normality functional (1 - zeta_n^2)|f'(zeta_n)| against delta 2^n and 2^n.
"""
import argparse

import numpy as np

from disc_osc.constructions import (
    build_nonnormal_witness,
    dyadic_separation_constant,
    dyadic_zeros,
    removability_check,
)
from disc_osc.verifiers import normality_functional


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-N", type=int, default=15, help="number of dyadic zeros")
    args = ap.parse_args()
    zs = dyadic_zeros(args.N)
    W = build_nonnormal_witness(zs)
    delta = dyadic_separation_constant()
    print(f"delta = {delta:.7f}")
    print(f"max interpolation residual = {np.max(W.metadata['interpolation_residuals']):.2e}")
    print(f"removability spread = {removability_check(W.A, zs):.2e}")
    print("   n  zeta_n               functional        / 2^n")
    for n, v in normality_functional(W.f, zs):
        print(f"  {n:2d}  {zs[n - 1]:.15f}  {v:.6e}  {v / 2.0**n:.6f}")


if __name__ == "__main__":
    main()
