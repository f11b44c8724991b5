"""Direct lattice runs: translation error and energy-error order for exact waves and generic data."""

import argparse

import numpy as np

from fput_micropteron.dispersion import WaveParameters
from fput_micropteron.jost import neumann_jost
from fput_micropteron.lattice_sim import (LatticeState, TravelingProfile, energy, init_from_profiles,
                                          mass_pattern, run_and_compare, step)
from fput_micropteron.micropteron import assemble_profiles, beale_iterate
from fput_micropteron.solitary import solve_monatomic


def drift(state, T, dt):
    e0, worst = energy(state), 0.0
    for _ in range(int(round(T / dt))):
        state = step(state, dt)
        worst = max(worst, abs(energy(state) - e0))
    return worst


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", type=float, default=0.2)
    ap.add_argument("--mu", type=float, default=2e-3)
    ap.add_argument("--T", type=float, default=50.0)
    args = ap.parse_args()
    p = WaveParameters.from_epsilon(args.eps)
    s = solve_monatomic(p)
    mono = TravelingProfile(s.profile, s.profile, s.c, 0.0)
    print("monatomic solitary wave")
    prev = None
    for dt in (0.04, 0.02, 0.01, 0.005):
        rep = run_and_compare(init_from_profiles(mono), mono, args.T, dt)
        ratio = f"{prev / rep.energy_drift:6.2f}" if prev else "      "
        print(f"  dt={dt:<6} shift {rep.shift_error:.2e}  energy drift {rep.energy_drift:.3e} {ratio}")
        prev = rep.energy_drift
    M = 256
    j0 = -M // 2
    sites = j0 + np.arange(M)
    gen = LatticeState(0.1 * np.exp(-(sites / 5.0) ** 2), np.zeros(M), mass_pattern(M, 0.1, j0), first_site=j0)
    print("generic Gaussian data, mu=0.1")
    prev = None
    for dt in (0.04, 0.02, 0.01):
        d = drift(gen, 20.0, dt)
        print(f"  dt={dt:<6} energy drift {d:.3e} {'' if prev is None else f'{prev / d:6.2f}'}")
        prev = d
    q = p.with_mu(args.mu)
    r = beale_iterate(q, s, neumann_jost(p, s))
    pr = assemble_profiles(r, s)
    micro = TravelingProfile(pr["p1"], pr["p2"], q.c, args.mu)
    rep = run_and_compare(init_from_profiles(micro), micro, args.T, 0.01)
    print(f"micropteron mu={args.mu}: shift {rep.shift_error:.2e}, far field "
          f"{rep.far_field_initial:.3e} -> {rep.far_field_final:.3e}, a={r.a:.1e}")


if __name__ == "__main__":
    main()
