"""Boundary profile of Lappan's function.

Compares the circle maxima of (1 - r^2) w^# (the normality gauge) and of
(1 - r^2)^2 |S_w| as r approaches 1.
"""
import argparse

import numpy as np

from disc_osc.constructions import lappan_function
from disc_osc.kernel import Derivative, schwarzian


def circle_max(values, r, n):
    z = r * np.exp(2j * np.pi * np.arange(n) / n)
    v = values(z)
    k = int(np.argmax(v))
    return float(v[k]), complex(z[k])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=4096, help="samples per circle")
    args = ap.parse_args()
    w = lappan_function()
    dw = Derivative(w)

    def gauge(z):
        return (1 - np.abs(z) ** 2) * np.abs(dw(z)) / (1 + np.abs(w(z)) ** 2)

    def schw(z):
        return (1 - np.abs(z) ** 2) ** 2 * np.abs(np.array([schwarzian(w, x) for x in z]))

    print("  1-r        max (1-r^2) w#   argmax                    max (1-r^2)^2 |S_w|")
    for k in range(1, 9):
        r = 1 - 10.0**-k if k > 1 else 0.9
        g, zg = circle_max(gauge, r, args.points)
        s, _ = circle_max(schw, r, min(args.points, 512))
        print(f"  {1 - r:.0e}  {g:.6f}         {zg.real:+.6f}{zg.imag:+.6f}i    {s:.6f}")


if __name__ == "__main__":
    main()
