"""Beale's fixed point for the micropteron profile.

Ansatz rho = varsigma e1 + a phi[a] + eta with phi[a] the unit periodic wave of
amplitude a.  Since G is quadratic, G(rho) = 0 becomes

    (H_c eta1, L_c eta2) = h1 + ... + h5 (first slot), l1 + ... + l5 (second slot)

    (h1, l1) = -mu Dd(varsigma + Q(varsigma, varsigma))
    (h2, l2) = -mu Dd(eta + 2 Q(varsigma, eta))
    (h3, l3) = -2a D_mu Q(varsigma, phi)
    (h4, l4) = -2a D_mu Q(phi, eta)
    (h5, l5) = -D_mu Q(eta, eta)

with Dd = (D_mu - D_0)/mu.  The leading part of l3 is -a chi_B where
chi_B = 2 D_0 Q(varsigma e1, (0, sin(omega_c .))) e2 = 2 (2 + A)(varsigma sin(omega_c .)),
so with ltilde3 = l3 + a chi_B the solvability condition iota[sum l] = 0 reads
a = iota[sum ltilde]/iota[chi_B] and eta2 = L_c^{-1} P_c sum ltilde.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.sparse.linalg import LinearOperator, gmres

from .dispersion import WaveParameters, sound_speed_squared
from .jost import JostSolution, chi_c, functional_iota
from .periodic import PeriodicWave, solve_periodic
from .solitary import SolitaryWave
from .spectral_ops import (Grid, GridFunction, KrylovFailure, ProfilePair, apply_Dmu,
                           apply_Dmu_derivative, apply_Lc, bilinear_Q, multiply, residual_arrays,
                           solve_Hc)


class BealeNonContraction(RuntimeError):
    pass


class SolvabilityError(RuntimeError):
    pass


@dataclass(frozen=True)
class BealeTerms:
    h: tuple
    l: tuple
    ltilde3: GridFunction

    def h_sum(self) -> GridFunction:
        out = self.h[0]
        for t in self.h[1:]:
            out = out + t
        return out

    def ltilde_sum(self) -> GridFunction:
        out = self.l[0] + self.l[1] + self.ltilde3 + self.l[3] + self.l[4]
        return out.with_values(out.values, parity="odd")


@dataclass(frozen=True)
class MicropteronSolution:
    eta1: GridFunction
    eta2: GridFunction
    a: float
    iterations: int
    residual: float
    mu: float
    c: float
    periodic: Optional[PeriodicWave] = field(repr=False, default=None)
    distances: tuple = field(repr=False, default=())
    solvability_multiplier: float = 0.0

    def eta_sup(self) -> float:
        return max(self.eta1.sup(), self.eta2.sup())

    def size(self) -> float:
        return float(self.eta1.sup() + self.eta2.sup() + abs(self.a))


def chi_beale(params: WaveParameters, solitary: SolitaryWave, omega: float) -> GridFunction:
    return chi_c(params, solitary, omega).scale(2.0)


def _unit_periodic(wave: Optional[PeriodicWave], grid: Grid) -> ProfilePair:
    if wave is None:
        return ProfilePair.zeros(grid)
    p1, p2 = wave.components(wave.omega * grid.x)
    return ProfilePair(GridFunction(grid, p1, "even"), GridFunction(grid, p2, "odd"))


def assemble_terms(params: WaveParameters, eta1: GridFunction, eta2: GridFunction, a: float,
                   solitary: SolitaryWave, periodic: Optional[PeriodicWave], jost: JostSolution,
                   chi: Optional[GridFunction] = None) -> BealeTerms:
    """Evaluate the ten forcing terms and the modified third solvability term."""
    grid = solitary.grid
    if eta1.grid != grid or eta2.grid != grid or jost.grid != grid:
        raise ValueError("grid mismatch between ingredients")
    mu = params.mu
    sig = solitary.pair
    eta = ProfilePair(eta1, eta2)
    phi = _unit_periodic(periodic, grid)

    t1 = apply_Dmu_derivative(sig + bilinear_Q(sig, sig)).scale(-mu)
    t2 = apply_Dmu_derivative(eta + bilinear_Q(sig, eta).scale(2.0)).scale(-mu)
    t3 = apply_Dmu(mu, bilinear_Q(sig, phi)).scale(-2.0 * a)
    t4 = apply_Dmu(mu, bilinear_Q(phi, eta)).scale(-2.0 * a)
    t5 = apply_Dmu(mu, bilinear_Q(eta, eta)).scale(-1.0)
    terms = (t1, t2, t3, t4, t5)
    if chi is None:
        chi = chi_beale(params, solitary, jost.omega)
    lt3 = t3.rho2 + chi.scale(a)
    return BealeTerms(h=tuple(t.rho1 for t in terms), l=tuple(t.rho2 for t in terms), ltilde3=lt3)


def project(jost: JostSolution, chi: GridFunction, rhs: GridFunction, iota_chi: Optional[float] = None) -> GridFunction:
    if iota_chi is None:
        iota_chi = functional_iota(jost, chi)
    return rhs - chi.scale(functional_iota(jost, rhs) / iota_chi)


def solve_Lc_projected(params: WaveParameters, solitary: SolitaryWave, jost: JostSolution,
                       rhs: GridFunction, chi: Optional[GridFunction] = None,
                       tol: float = 1e-12, maxiter: int = 400):
    """Solve L_c eta = P_c rhs for odd localized eta.

    Returns (eta, multiplier) where multiplier = iota[P_c rhs - L_c eta]/iota[chi]
    measures the leftover component along chi (zero when P_c rhs is in range).
    """
    if chi is None:
        chi = chi_c(params, solitary, jost.omega)
    ic = functional_iota(jost, chi)
    if abs(ic) < 1e-8:
        raise SolvabilityError("iota[chi] vanishes; the phase-shift condition fails numerically")
    grid = rhs.grid
    prhs = project(jost, chi, rhs, ic).values
    k = grid.k
    bsym = -params.c**2 * k * k + 2.0 + 2.0 * np.cos(k)
    msym = 2.0 * (2.0 + 2.0 * np.cos(k))
    s = solitary.profile.values
    n = grid.n_points
    b_rhs = multiply(prhs, 1.0 / bsym)
    if not np.any(b_rhs):
        return GridFunction.zeros(grid, "odd"), 0.0
    op = LinearOperator((n, n), matvec=lambda f: f + multiply(multiply(s * f, msym), 1.0 / bsym), dtype=float)
    scale = np.linalg.norm(b_rhs)
    eta, info = gmres(op, b_rhs / scale, rtol=tol, atol=0.0, restart=100, maxiter=maxiter)
    if info != 0:
        raise KrylovFailure(f"L_c solve did not converge (info={info})")
    eta = GridFunction(grid, eta * scale, "odd").symmetrized()
    lam = functional_iota(jost, GridFunction(grid, prhs, "odd") - apply_Lc(params, solitary.profile, eta)) / ic
    return eta, lam


def assembled_residual(params: WaveParameters, solitary: SolitaryWave, eta1: GridFunction,
                       eta2: GridFunction, a: float, periodic: Optional[PeriodicWave]) -> float:
    """sup |G(varsigma + a phi + eta)| using G(u + v) = G(u) + G(v) + 2 D_mu Q(u, v).

    u = varsigma + eta is localized and handled on the box; v = a phi is the
    exact periodic wave, whose own residual is measured on its phase circle.
    """
    grid = solitary.grid
    u1 = solitary.profile.values + eta1.values
    u2 = eta2.values
    g1, g2 = residual_arrays(params.c, params.mu, grid.k, u1, u2)
    if periodic is not None and a != 0.0:
        phi = _unit_periodic(periodic, grid)
        cross = apply_Dmu(params.mu, bilinear_Q(ProfilePair(GridFunction(grid, u1, "even"),
                                                            GridFunction(grid, u2, "odd")), phi))
        g1 = g1 + 2.0 * a * cross.rho1.values
        g2 = g2 + 2.0 * a * cross.rho2.values
        per = periodic.residual
    else:
        per = 0.0
    g1 = g1 - np.mean(g1)
    return float(max(np.max(np.abs(g1)), np.max(np.abs(g2))) + per)


def beale_iterate(params: WaveParameters, solitary: SolitaryWave, jost: JostSolution,
                  tol: float = 1e-11, maxiter: int = 200, refresh: float = 1e-9) -> MicropteronSolution:
    """Fixed-point sweep a -> eta2 -> eta1 from the zero initial guess."""
    grid = solitary.grid
    mu = params.mu
    eta1 = GridFunction.zeros(grid, "even")
    eta2 = GridFunction.zeros(grid, "odd")
    if mu == 0.0:
        return MicropteronSolution(eta1, eta2, 0.0, 1, assembled_residual(params, solitary, eta1, eta2, 0.0, None),
                                   mu, params.c)
    chi = chi_beale(params, solitary, jost.omega)
    ic = functional_iota(jost, chi)
    if abs(ic) < 1e-8:
        raise SolvabilityError("iota[chi] vanishes; the phase-shift condition fails numerically")
    a = 0.0
    wave = solve_periodic(params, 0.0)
    a_wave = 0.0
    dists = []
    lam = 0.0
    for it in range(1, maxiter + 1):
        terms = assemble_terms(params, eta1, eta2, a, solitary, wave, jost, chi)
        a_new = functional_iota(jost, terms.ltilde_sum()) / ic
        if abs(a_new - a_wave) > refresh:
            wave = solve_periodic(params, a_new)
            a_wave = a_new
        terms = assemble_terms(params, eta1, eta2, a_new, solitary, wave, jost, chi)
        eta2_new, lam = solve_Lc_projected(params, solitary, jost, terms.ltilde_sum(), chi)
        terms = assemble_terms(params, eta1, eta2_new, a_new, solitary, wave, jost, chi)
        eta1_new = solve_Hc(params, solitary.profile, terms.h_sum())
        dist = (float(np.max(np.abs(eta1_new.values - eta1.values)))
                + float(np.max(np.abs(eta2_new.values - eta2.values))) + abs(a_new - a))
        eta1, eta2, a = eta1_new, eta2_new, a_new
        dists.append(dist)
        if not np.isfinite(dist):
            raise BealeNonContraction("iterates became non-finite")
        if dist < tol:
            break
        if len(dists) >= 4 and all(dists[-j] > dists[-j - 1] for j in (1, 2, 3)):
            raise BealeNonContraction(f"iterates growing at mu={mu}: {dists[-4:]}")
    else:
        raise BealeNonContraction(f"no convergence in {maxiter} sweeps at mu={mu}")
    if abs(a - a_wave) > 0:
        wave = solve_periodic(params, a)
    res = assembled_residual(params, solitary, eta1, eta2, a, wave)
    return MicropteronSolution(eta1, eta2, a, it, res, mu, params.c, wave, tuple(dists), lam)


def supersonic_margin(params: WaveParameters) -> float:
    """c^2 minus the dimer long-wave speed squared; must be positive for a localized core."""
    return params.c**2 - sound_speed_squared(params.mu)


def mu_sweep(params: WaveParameters, solitary: SolitaryWave, jost: JostSolution, mus, **kw):
    """Solve for each mu; on non-contraction halve mu until it converges or gets tiny."""
    out = []
    for mu in mus:
        m = mu
        while True:
            try:
                out.append(beale_iterate(params.with_mu(m), solitary, jost, **kw))
                break
            except (BealeNonContraction, KrylovFailure) as err:
                m *= 0.5
                if abs(m) < 1e-7:
                    raise BealeNonContraction(f"no contraction down to mu={m}") from err
    return out


def assemble_profiles(sol: MicropteronSolution, solitary: SolitaryWave) -> dict:
    """rho = (varsigma + a phi1 + eta1, a phi2 + eta2) and p = (rho1 + rho2, rho1 - rho2)."""
    grid = solitary.grid
    phi = _unit_periodic(sol.periodic, grid)
    r1 = solitary.profile.values + sol.a * phi.rho1.values + sol.eta1.values
    r2 = sol.a * phi.rho2.values + sol.eta2.values
    rho = ProfilePair(GridFunction(grid, r1, "even"), GridFunction(grid, r2, "odd"))
    return {"rho": rho, "p1": GridFunction(grid, r1 + r2), "p2": GridFunction(grid, r1 - r2)}
