"""Margin tables for the built-in kernels' well-posedness checks.

Prints the certified triangle-norm value against its threshold across a
parameter sweep: amplitude for the log kernel, contraction factor for
the linear kernel, and horizon for the saturating-memory kernel.
"""

import argparse
import math

import numpy as np

import volterra as vt


def log_kernel_table(grid):
    print("log kernel: admissible iff a_bar^2 < 35/8 = 4.375")
    print(f"{'a_bar^2':>8} {'norm^2':>10} {'threshold':>10} {'margin':>10} {'pass':>5}")
    for ab2 in (0.5, 1.0, 2.0, 4.0, 4.374, 4.376, 5.0):
        rep = vt.check_A3(vt.example1_kernel(math.sqrt(ab2)), grid)
        print(f"{ab2:>8.3f} {rep.norm_value**2:>10.4f} {rep.threshold**2:>10.4f} "
              f"{rep.margin:>10.4f} {str(rep.passed):>5}")


def linear_kernel_table(grid):
    print("\nlinear kernel: admissible iff |lambda|/sqrt(2) < 1/2")
    print(f"{'lambda':>8} {'norm':>10} {'margin':>10} {'pass':>5}")
    for lam in (0.1, 0.3, 0.5, 0.70, 0.7071, 0.71, 0.9):
        rep = vt.check_A4(vt.linear_kernel(lam), grid)
        print(f"{lam:>8.4f} {rep.norm_value:>10.4f} {rep.margin:>10.4f} "
              f"{str(rep.passed):>5}")


def horizon_table():
    print("\nsaturating-memory kernel (w' = 1, A = 1): admissible iff T < 1")
    print(f"{'T':>6} {'value':>10} {'threshold':>10} {'pass':>5}")
    w_prime = lambda s: np.ones_like(s)
    for T in (0.5, 0.7, 0.9, 0.99, 1.0, 1.1):
        rep = vt.check_example2(w_prime, A=1.0, T=T, grid=vt.Grid(0.0, T, 200))
        print(f"{T:>6.2f} {rep.norm_value:>10.5f} {rep.threshold:>10.5f} "
              f"{str(rep.passed):>5}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cells", type=int, default=200)
    args = ap.parse_args()
    grid = vt.Grid(0.0, 1.0, args.cells)
    log_kernel_table(grid)
    linear_kernel_table(grid)
    horizon_table()


if __name__ == "__main__":
    main()
