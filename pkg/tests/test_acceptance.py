"""Acceptance criteria 1-9, each checked at its stated tolerance.

Every test prints one ``CRITERION n: PASS|FAIL`` line and then asserts the
criterion as stated.  Where a stated criterion is unattainable the test fails;
companion tests named ``*_companion`` check the corrected statement.
"""

import math
import time

import numpy as np
import pytest

from fput_micropteron.dispersion import WaveParameters, critical_frequency, critical_frequency_mu
from fput_micropteron.jost import (chi_c, functional_iota, iota_chi_derived, iota_chi_stated,
                                   jost_adjoint_residual, neumann_jost, random_odd_panel,
                                   solvability_defect)
from fput_micropteron.lattice_sim import TravelingProfile, energy, init_from_profiles, run_and_compare, step
from fput_micropteron.micropteron import (BealeNonContraction, assemble_profiles, beale_iterate,
                                          supersonic_margin)
from fput_micropteron.periodic import solve_periodic
from fput_micropteron.solitary import rescaled_error, solve_monatomic
from fput_micropteron.spectral_ops import (Grid, GridFunction, ProfilePair, apply_Dmu, bilinear_Q,
                                           residual_G)

from conftest import jost_at, solitary_at


# 1 -----------------------------------------------------------------------------
def test_criterion_1_dispersion(report_criterion):
    t0 = time.perf_counter()
    rows, ok = [], True
    for c in (1.05, 1.1, math.sqrt(2)):
        cf = critical_frequency(WaveParameters(c))
        good = cf.residual <= 1e-12 and math.sqrt(2) / c < cf.omega < math.pi / 2
        ok &= good
        rows.append(f"c={c:.4f} w={cf.omega:.12f} |B|={cf.residual:.1e}")
    dt = time.perf_counter() - t0
    ok &= dt < 1.0
    report_criterion(1, ok, "; ".join(rows) + f"; {dt:.3f}s")
    assert ok


# 2 -----------------------------------------------------------------------------
def test_criterion_2_frequency_perturbation(report_criterion):
    t0 = time.perf_counter()
    c = math.sqrt(2)
    w0 = critical_frequency(WaveParameters(c)).omega
    slopes = [abs(critical_frequency_mu(WaveParameters(c, mu)).omega - w0) / mu for mu in (1e-2, 5e-3, 2.5e-3)]
    spread = (max(slopes) - min(slopes)) / min(slopes)
    dt = time.perf_counter() - t0
    ok = spread < 0.10 and dt < 1.0
    report_criterion(2, ok, f"slopes={['%.6f' % s for s in slopes]} spread={spread:.2%}; {dt:.3f}s")
    assert ok


# 3 -----------------------------------------------------------------------------
def _solitary_rows(limit):
    rows = []
    for eps in (0.4, 0.2, 0.1):
        s = solitary_at(eps)
        rows.append((eps, s.residual, bool(np.all(s.profile.values > 0)), rescaled_error(s, eps, limit)))
    return rows


def test_criterion_3_solitary(report_criterion):
    t0 = time.perf_counter()
    rows = _solitary_rows("seed")  # the stated limit eps^-2 varsigma(x/eps) -> (1/4) sech^2(x/2)
    dt = time.perf_counter() - t0
    factors = [rows[i][3] / rows[i + 1][3] for i in range(2)]
    ok = all(r[1] <= 1e-10 and r[2] for r in rows) and all(f >= 3 for f in factors) and dt < 30
    report_criterion(3, ok, "errors vs (1/4)sech^2(x/2): " + ", ".join(f"{r[3]:.3e}" for r in rows)
                     + f"; halving factors {factors[0]:.3f}, {factors[1]:.3f}; residuals "
                     + ", ".join(f"{r[1]:.1e}" for r in rows) + f"; {dt:.2f}s")
    assert ok


def test_criterion_3_companion_derived_limit():
    rows = _solitary_rows("derived")  # (1/16) sech^2(x / (2 sqrt 2))
    assert all(r[1] <= 1e-10 and r[2] for r in rows)
    assert all(rows[i][3] / rows[i + 1][3] >= 3 for i in range(2))


# 4 -----------------------------------------------------------------------------
def test_criterion_4_periodic(report_criterion):
    t0 = time.perf_counter()
    c = math.sqrt(2)
    ok, parts = True, []
    for mu in (0.0, 0.01):
        p = WaveParameters(c, mu)
        waves = {a: solve_periodic(p, a) for a in (0.0, 1e-3, 2e-3)}
        res = max(w.residual for w in waves.values())
        w0 = waves[0.0]
        trivial = w0.psi_norm() == 0.0 and w0.omega == critical_frequency_mu(p).omega
        slope = abs(waves[2e-3].omega - waves[1e-3].omega) / 1e-3
        ratios = [waves[a].psi_norm() / a for a in (1e-3, 2e-3)]
        good = res <= 1e-10 and trivial and math.isfinite(slope) and max(ratios) < 1.0
        ok &= good
        parts.append(f"mu={mu}: res={res:.1e} trivial={trivial} slope={slope:.2e} |psi|/a={ratios[0]:.4f},{ratios[1]:.4f}")
    dt = time.perf_counter() - t0
    ok &= dt < 60
    report_criterion(4, ok, "; ".join(parts) + f"; {dt:.2f}s")
    assert ok


# 5 -----------------------------------------------------------------------------
def _jost_measurements():
    eps = 0.2
    p = WaveParameters.from_epsilon(eps)
    s = solitary_at(eps)
    j = neumann_jost(p, s)
    iq = functional_iota(j, chi_c(p, s, j.omega))
    return {
        "adjoint": jost_adjoint_residual(p, s, j),
        "tail": j.tail_misfit,
        "iota": iq,
        "stated": iota_chi_stated(p, j),
        "derived": iota_chi_derived(p, j),
        "margin": j.sin_margin,
        "panel": solvability_defect(p, s, j, random_odd_panel(s.grid, 10, seed=2024)),
    }


def test_criterion_5_jost(report_criterion):
    t0 = time.perf_counter()
    m = _jost_measurements()
    dt = time.perf_counter() - t0
    rel = abs(m["iota"] - m["stated"]) / abs(m["stated"])
    checks = {
        "adjoint<=1e-8": m["adjoint"] <= 1e-8,
        "tail<=1e-6": m["tail"] <= 1e-6,
        "iota_closed_form_rel<=1e-6": rel <= 1e-6,
        "sin_margin!=0": abs(m["margin"]) > 0,
        "panel<=1e-7": m["panel"] <= 1e-7,
        "runtime<120s": dt < 120,
    }
    ok = all(checks.values())
    report_criterion(5, ok, f"|L*g|={m['adjoint']:.1e} tail={m['tail']:.1e} iota={m['iota']:.10f} "
                     f"stated={m['stated']:.10f} (rel {rel:.2e}) sin(w th)={m['margin']:.5f} "
                     f"panel={m['panel']:.1e}; failed: {[k for k, v in checks.items() if not v]}; {dt:.2f}s")
    assert ok


def test_criterion_5_companion_derived_closed_form():
    m = _jost_measurements()
    assert abs(m["iota"] - m["derived"]) <= 1e-6 * abs(m["derived"])
    assert m["adjoint"] <= 1e-8 and m["tail"] <= 1e-6 and m["panel"] <= 1e-7 and m["margin"] != 0


# 6 -----------------------------------------------------------------------------
def test_criterion_6_phase_shift_scaling(report_criterion):
    t0 = time.perf_counter()
    ratios = {eps: jost_at(eps).theta / eps for eps in (0.3, 0.2, 0.1)}
    dt = time.perf_counter() - t0
    vals = list(ratios.values())
    band = max(vals) / min(vals)
    ok = min(vals) > 0 and band <= 2.0 and dt < 300
    report_criterion(6, ok, ", ".join(f"theta/eps({e})={r:.6f}" for e, r in ratios.items()) + f"; band {band:.5f}; {dt:.2f}s")
    assert ok


# 7 -----------------------------------------------------------------------------
def test_criterion_7_micropteron(report_criterion):
    t0 = time.perf_counter()
    eps = 0.2
    p = WaveParameters.from_epsilon(eps)
    s, j = solitary_at(eps), jost_at(eps)
    results, parts = {}, []
    for mu in (4e-3, 2e-3, 1e-3):
        try:
            r = beale_iterate(p.with_mu(mu), s, j)
            prof = assemble_profiles(r, s)
            res = residual_G(p.with_mu(mu), prof["rho"]).sup()
            results[mu] = (True, res, r.size())
            parts.append(f"mu={mu}: {r.iterations} sweeps, residual {res:.1e}, size/mu {r.size() / mu:.4f}")
        except BealeNonContraction as err:
            results[mu] = (False, math.inf, math.inf)
            parts.append(f"mu={mu}: no contraction (c^2 - c_s^2 = {supersonic_margin(p.with_mu(mu)):.2e})")
    trivial = beale_iterate(p, s, j)
    triv_ok = trivial.iterations == 1 and not np.any(trivial.eta1.values) and trivial.a == 0.0
    mus = (4e-3, 2e-3, 1e-3)
    halving = [results[mus[i + 1]][2] / results[mus[i]][2] if results[mus[i]][0] and results[mus[i + 1]][0]
               else math.nan for i in range(2)]
    dt = time.perf_counter() - t0
    ok = (all(results[m][0] and results[m][1] <= 1e-8 for m in mus)
          and all(h <= 0.75 for h in halving) and triv_ok and dt < 600)
    report_criterion(7, ok, "; ".join(parts) + f"; halving ratios {halving}; mu=0 trivial={triv_ok}; {dt:.1f}s")
    assert ok


def test_criterion_7_companion_supersonic_range():
    p = WaveParameters.from_epsilon(0.2)
    s, j = solitary_at(0.2), jost_at(0.2)
    sizes = {}
    for mu in (2e-3, 1e-3, 5e-4):
        r = beale_iterate(p.with_mu(mu), s, j)
        assert residual_G(p.with_mu(mu), assemble_profiles(r, s)["rho"]).sup() <= 1e-8
        sizes[mu] = r.size()
    assert sizes[1e-3] / sizes[2e-3] <= 0.75 and sizes[5e-4] / sizes[1e-3] <= 0.75


# 8 -----------------------------------------------------------------------------
def _energy_drift(prof, T, dt):
    st = init_from_profiles(prof)
    e0 = energy(st)
    worst = 0.0
    for _ in range(int(round(T / dt))):
        st = step(st, dt)
        worst = max(worst, abs(energy(st) - e0))
    return worst


def test_criterion_8_lattice(report_criterion):
    t0 = time.perf_counter()
    s = solitary_at(0.2)
    mono = TravelingProfile(s.profile, s.profile, s.c, 0.0)
    rep = run_and_compare(init_from_profiles(mono), mono, T=50.0, dt=0.01)
    d1 = _energy_drift(mono, 50.0, 0.01)
    d2 = _energy_drift(mono, 50.0, 0.005)
    ratio = d1 / d2
    mu = 2e-3
    p = WaveParameters.from_epsilon(0.2, mu)
    r = beale_iterate(p, s, jost_at(0.2))
    pr = assemble_profiles(r, s)
    micro = TravelingProfile(pr["p1"], pr["p2"], p.c, mu)
    rep2 = run_and_compare(init_from_profiles(micro), micro, T=50.0, dt=0.01)
    band_ok = rep2.far_field_final <= rep2.far_field_initial * (1 + 1e-3) + 1e-12
    dt = time.perf_counter() - t0
    checks = {"mono_shift<=1e-3": rep.shift_error <= 1e-3, "energy_ratio_4+-20%": 3.2 <= ratio <= 4.8,
              "micro_shift<=5e-3": rep2.shift_error <= 5e-3, "ripple_band_non_growing": band_ok,
              "runtime<300s": dt < 300}
    ok = all(checks.values())
    report_criterion(8, ok, f"mono shift {rep.shift_error:.1e}; drift dt=0.01 {d1:.2e}, dt=0.005 {d2:.2e}, "
                     f"ratio {ratio:.2f}; micro shift {rep2.shift_error:.1e}; far field "
                     f"{rep2.far_field_initial:.3e} -> {rep2.far_field_final:.3e}; "
                     f"failed: {[k for k, v in checks.items() if not v]}; {dt:.1f}s")
    assert ok


def test_criterion_8_companion_second_order_energy_on_generic_data():
    """Second-order energy error appears for generic data; the exact wave shows fourth order."""
    M, mu = 256, 0.1
    jj = -M // 2 + np.arange(M)
    from fput_micropteron.lattice_sim import LatticeState, mass_pattern
    base = LatticeState(0.1 * np.exp(-(jj / 5.0) ** 2), np.zeros(M), mass_pattern(M, mu, -M // 2), first_site=-M // 2)
    drifts = []
    for dt in (0.02, 0.01):
        st, e0, worst = base, energy(base), 0.0
        for _ in range(int(round(20.0 / dt))):
            st = step(st, dt)
            worst = max(worst, abs(energy(st) - e0))
        drifts.append(worst)
    assert 3.2 <= drifts[0] / drifts[1] <= 4.8


# 9 -----------------------------------------------------------------------------
def test_criterion_9_symmetry_suite(report_criterion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(9)
    grid = Grid(32.0, 512)
    x = grid.x
    worst = 0.0
    violations = 0
    for _ in range(1000):
        w = rng.uniform(1.0, 6.0, size=2)
        a = rng.normal(size=4)
        r1 = a[0] * np.exp(-(x / w[0]) ** 2) + a[1] * np.cos(x / w[1]) * np.exp(-(x / 8) ** 2)
        r2 = a[2] * x / w[0] * np.exp(-(x / w[0]) ** 2) + a[3] * np.sin(x / w[1]) * np.exp(-(x / 8) ** 2)
        r2[0] = 0.0  # x = -L is its own mirror on the periodic box, so odd data vanish there
        rho = ProfilePair(GridFunction(grid, r1, "even"), GridFunction(grid, r2, "odd"))
        mu = rng.uniform(-0.5, 0.5)
        c = rng.uniform(1.01, 1.6)
        outs = [apply_Dmu(mu, rho), bilinear_Q(rho, rho), residual_G(WaveParameters(c, mu), rho)]
        for o in outs:
            scale = max(1.0, o.sup())
            d = max(o.rho1.parity_defect(), o.rho2.parity_defect()) / scale
            worst = max(worst, d)
            if d > 1e-12:
                violations += 1
        for o in (outs[0], outs[2]):
            m = abs(np.mean(o.rho1.values)) / max(1.0, o.sup())
            worst = max(worst, m)
            if m > 1e-12 or not o.rho1.mean_zero:
                violations += 1
    dt = time.perf_counter() - t0
    ok = violations == 0 and dt < 10
    report_criterion(9, ok, f"1000 inputs, violations {violations}, worst defect {worst:.1e}; {dt:.2f}s")
    assert ok
