"""Zeros and critical points of the gamma and q examples on the real axis.

Prints the located zeros next to the closed forms, the consecutive hyperbolic
gaps, and the zero/critical distances against the separation bound.
"""
import argparse
import math

import numpy as np

from disc_osc.constructions import example_gamma, example_q, gamma_zero, q_zero
from disc_osc.hyperbolic import hyperbolic_distance
from disc_osc.locator import scan_real_critical_points, scan_real_zeros
from disc_osc.ode import SolutionBasis
from disc_osc.verifiers import default_gauge, gauge_sup_estimate, zero_critical_bound


def solve(W):
    basis = SolutionBasis(W.A)
    d = W.f.jet(np.array(0j), 1).taylor()
    return basis.with_initial_data(complex(d[0]), complex(d[1]))


def gamma_table(gamma, n):
    W = example_gamma(gamma)
    f = solve(W)
    top = min(np.nextafter(1.0, 0.0), gamma_zero(gamma, n + 0.5))
    z = scan_real_zeros(f, 0.0, top)
    z = z[z > 1e-14]
    c = scan_real_critical_points(f, 0.0, top)
    g = default_gauge(norm=W.metadata["norm"])
    print(f"gamma = {gamma:g}: gap should be pi/(2 gamma) = {math.pi / (2 * gamma):.12f}")
    print(f"  default gauge c = {g.c:.6f}, bound artanh(c) = {math.atanh(g.c):.6f}")
    print("   n  zero                 closed form          gap to next       nearest critical distance")
    for i, x in enumerate(z):
        gap = hyperbolic_distance(x, z[i + 1]) if i + 1 < len(z) else math.nan
        near = min((hyperbolic_distance(x, a) for a in c), default=math.nan)
        print(f"  {i + 1:2d}  {x:.17f}  {gamma_zero(gamma, i + 1):.17f}  {gap:.12f}  {near:.6f}")


def q_table(q, n):
    W = example_q(q)
    f = solve(W)
    top = q_zero(q, n + 0.5)
    z = scan_real_zeros(f, 0.0, top)
    c = scan_real_critical_points(f, 0.0, top)
    M = gauge_sup_estimate(W.A, W.gauge.psi).estimate
    print(f"q = {q:g}: M = {M:.6f}, K = {W.gauge.known_K:.6f}")
    print("   n  zero                 closed form          critical a_n         distance   bound      ratio")
    for i in range(len(z) - 1):
        a = c[(c > z[i]) & (c < z[i + 1])]
        if len(a) != 1:
            continue
        a = float(a[0])
        dist = min(hyperbolic_distance(z[i], a), hyperbolic_distance(z[i + 1], a))
        bound = zero_critical_bound(W.gauge, M, a)
        print(f"  {i + 1:2d}  {z[i]:.17f}  {q_zero(q, i + 1):.17f}  {a:.17f}  {dist:.6f}  {bound:.6f}  {dist / bound:.3f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gamma", type=float, action="append")
    ap.add_argument("--q", type=float, action="append")
    ap.add_argument("-n", type=int, default=8, help="number of positive zeros")
    args = ap.parse_args()
    for g in args.gamma or ([] if args.q else [0.5, 1.0, 2.0]):
        gamma_table(g, args.n)
        print()
    for q in args.q or ([] if args.gamma else [2.0]):
        q_table(q, max(args.n, 20))


if __name__ == "__main__":
    main()
