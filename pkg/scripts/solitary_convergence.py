"""Petviashvili solitary waves and their long-wave limit as epsilon halves."""

import argparse

from fput_micropteron.dispersion import WaveParameters
from fput_micropteron.solitary import rescaled_error, solve_monatomic


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", type=float, nargs="+", default=[0.4, 0.2, 0.1, 0.05])
    args = ap.parse_args()
    print(f"{'eps':>6} {'L':>6} {'N':>6} {'iters':>5} {'residual':>9} {'err (1/16)sech^2':>17} {'err (1/4)sech^2':>16}")
    prev = None
    for eps in args.eps:
        s = solve_monatomic(WaveParameters.from_epsilon(eps))
        e1, e2 = rescaled_error(s, eps, "derived"), rescaled_error(s, eps, "seed")
        tail = f"  ratio {prev / e1:.2f}" if prev else ""
        print(f"{eps:6.3f} {s.grid.half_length:6.0f} {s.grid.n_points:6d} {s.iterations:5d} {s.residual:9.1e} "
              f"{e1:17.3e} {e2:16.4f}{tail}")
        prev = e1


if __name__ == "__main__":
    main()
