"""Critical frequency versus speed, and its first-order shift under mass detuning."""

import argparse
import math

import numpy as np

from fput_micropteron.dispersion import WaveParameters, critical_frequency, critical_frequency_mu


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--mu", type=float, default=5e-3)
    args = ap.parse_args()
    print(f"{'c':>8} {'omega_c':>16} {'|B(omega_c)|':>12} {'d omega/d mu':>14}")
    for c in np.linspace(1.02, 1.6, 12):
        p = WaveParameters(float(c))
        cf = critical_frequency(p)
        slope = (critical_frequency_mu(p.with_mu(args.mu)).omega - cf.omega) / args.mu
        print(f"{c:8.4f} {cf.omega:16.12f} {cf.residual:12.1e} {slope:14.6f}")
    c = math.sqrt(2)
    w0 = critical_frequency(WaveParameters(c)).omega
    print("\nc = sqrt 2, linear scaling of the shift:")
    for mu in (1e-2, 5e-3, 2.5e-3, 1.25e-3):
        print(f"  mu={mu:<8} |dw|/mu = {abs(critical_frequency_mu(WaveParameters(c, mu)).omega - w0) / mu:.6f}")


if __name__ == "__main__":
    main()
