"""Phase shift of the adjoint Jost solution and the solvability constant across epsilon."""

import argparse

from fput_micropteron.dispersion import WaveParameters
from fput_micropteron.jost import (chi_c, functional_iota, iota_chi_derived, iota_chi_stated,
                                   jost_adjoint_residual, neumann_jost)
from fput_micropteron.solitary import solve_monatomic


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", type=float, nargs="+", default=[0.4, 0.3, 0.2, 0.1, 0.05])
    args = ap.parse_args()
    print(f"{'eps':>6} {'theta':>12} {'theta/eps':>10} {'|L* g|':>8} {'contract':>8} "
          f"{'iota[chi]':>12} {'(c^2w+sin w)s':>14} {'(2c^2w-sin w)s':>15}")
    for eps in args.eps:
        p = WaveParameters.from_epsilon(eps)
        s = solve_monatomic(p)
        j = neumann_jost(p, s)
        iq = functional_iota(j, chi_c(p, s, j.omega))
        print(f"{eps:6.3f} {j.theta:12.9f} {j.theta / eps:10.6f} {jost_adjoint_residual(p, s, j):8.1e} "
              f"{j.contraction:8.4f} {iq:12.9f} {iota_chi_derived(p, j):14.9f} {iota_chi_stated(p, j):15.9f}")


if __name__ == "__main__":
    main()
