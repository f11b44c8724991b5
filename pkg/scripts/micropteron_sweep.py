"""Beale iteration across mass detunings, including the subsonic cut-off."""

import argparse

from fput_micropteron.dispersion import WaveParameters, sound_speed_squared
from fput_micropteron.jost import neumann_jost
from fput_micropteron.micropteron import BealeNonContraction, beale_iterate, supersonic_margin
from fput_micropteron.solitary import solve_monatomic


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", type=float, default=0.2)
    ap.add_argument("--mus", type=float, nargs="+", default=[4e-3, 3e-3, 2e-3, 1e-3, 5e-4, 2.5e-4, -1e-3])
    args = ap.parse_args()
    p = WaveParameters.from_epsilon(args.eps)
    s = solve_monatomic(p)
    j = neumann_jost(p, s)
    print(f"eps={args.eps}  c^2={p.c**2:.6f}  theta={j.theta:.6f}")
    print(f"{'mu':>9} {'c^2-c_s^2':>10} {'sweeps':>6} {'residual':>9} {'|eta|':>10} {'|eta|/mu':>9} {'a':>10}")
    for mu in args.mus:
        q = p.with_mu(mu)
        try:
            r = beale_iterate(q, s, j)
            print(f"{mu:9.2e} {supersonic_margin(q):10.2e} {r.iterations:6d} {r.residual:9.1e} "
                  f"{r.eta_sup():10.3e} {r.eta_sup() / abs(mu):9.4f} {r.a:10.1e}")
        except BealeNonContraction:
            print(f"{mu:9.2e} {supersonic_margin(q):10.2e}   no contraction (c_s^2={sound_speed_squared(mu):.6f})")


if __name__ == "__main__":
    main()
