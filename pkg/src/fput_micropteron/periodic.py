"""Small-amplitude periodic traveling waves of the mass dimer.

Work in the phase variable theta = omega x, where the profile is 2 pi periodic.
With Gamma[omega] = c^2 omega^2 d^2/dtheta^2 + D_mu[omega] (shifts by omega in
theta) the wave a*phi solves

    Gamma[omega] phi + a D_mu[omega] Q(phi, phi) = 0,

phi = nu + psi, nu = (upsilon cos, sin) spans the kernel of Gamma at the
critical frequency omega_c^mu and psi is orthogonal to nu.  The frequency
correction xi and the corrector psi are found by an alternating fixed point.

Mode vectors are stored as complex FFT coefficients f^(k) = (1/2pi) int f e^{-ik theta};
the pairing is <f, g> = sum_k f^(k) conj(g^(k)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dispersion import WaveParameters, critical_frequency_mu, kernel_coefficient, mu_threshold
from .spectral_ops import Grid, GridFunction, ProfilePair

K_MAX = 64
N_THETA = 256


class PeriodicNonConvergence(RuntimeError):
    pass


def _modes(n: int = N_THETA) -> np.ndarray:
    return np.fft.fftfreq(n, d=1.0 / n)


def _truncate(F: np.ndarray, kmax: int = K_MAX) -> np.ndarray:
    F = F.copy()
    F[..., np.abs(_modes(F.shape[-1])) > kmax] = 0.0
    return F


def symbol_D(mu: float, K):
    """Entries (d11, d12, d21, d22) of the dimer symbol at physical wavenumber K."""
    cs, sn = np.cos(K), np.sin(K)
    return ((2 + mu) * (1 - cs), 1j * mu * sn, -1j * mu * sn, (2 + mu) * (1 + cs))


def symbol_D_dK(mu: float, K):
    cs, sn = np.cos(K), np.sin(K)
    return ((2 + mu) * sn, 1j * mu * cs, -1j * mu * cs, -(2 + mu) * sn)


class ModalOps:
    """Gamma, D and Q acting on 2 x N_THETA arrays of mode coefficients."""

    def __init__(self, c: float, mu: float, n_theta: int = N_THETA, kmax: int = K_MAX):
        self.c, self.mu, self.n, self.kmax = c, mu, n_theta, kmax
        self.k = _modes(n_theta)

    def D(self, omega: float, F: np.ndarray) -> np.ndarray:
        d11, d12, d21, d22 = symbol_D(self.mu, omega * self.k)
        return np.array([d11 * F[0] + d12 * F[1], d21 * F[0] + d22 * F[1]])

    def gamma(self, omega: float, F: np.ndarray) -> np.ndarray:
        return self.D(omega, F) - (self.c * omega * self.k) ** 2 * F

    def gamma_domega(self, omega: float, F: np.ndarray) -> np.ndarray:
        d11, d12, d21, d22 = symbol_D_dK(self.mu, omega * self.k)
        k = self.k
        out = np.array([k * (d11 * F[0] + d12 * F[1]), k * (d21 * F[0] + d22 * F[1])])
        return out - 2.0 * self.c**2 * omega * k**2 * F

    def to_theta(self, F: np.ndarray) -> np.ndarray:
        return np.fft.ifft(F * self.n, axis=-1).real

    def from_theta(self, f: np.ndarray) -> np.ndarray:
        return np.fft.fft(f, axis=-1) / self.n

    def Q(self, F: np.ndarray, G: np.ndarray) -> np.ndarray:
        f, g = self.to_theta(F), self.to_theta(G)
        q = np.array([f[0] * g[0] + f[1] * g[1], f[0] * g[1] + g[0] * f[1]])
        return _truncate(self.from_theta(q), self.kmax)


def pairing(F: np.ndarray, G: np.ndarray) -> float:
    return float(np.real(np.sum(F * np.conj(G))))


def kernel_modes(upsilon: float, n: int = N_THETA) -> np.ndarray:
    """Mode coefficients of nu = (upsilon cos theta, sin theta)."""
    F = np.zeros((2, n), dtype=complex)
    F[0, 1] = F[0, -1] = 0.5 * upsilon
    F[1, 1], F[1, -1] = -0.5j, 0.5j
    return F


@dataclass(frozen=True)
class KernelVector:
    upsilon: float

    def modes(self, n: int = N_THETA) -> np.ndarray:
        return kernel_modes(self.upsilon, n)


def bifurcation_terms(params: WaveParameters):
    """The three pieces of <d_omega Gamma nu, nu> at the critical frequency.

    I is the mu = 0 structure, II carries upsilon^2, III the off-diagonal coupling.
    """
    w = critical_frequency_mu(params).omega
    ups = kernel_coefficient(params, w)
    c2, mu = params.c**2, params.mu
    half = 1.0 + 0.5 * mu
    term1 = -(c2 * w + half * math.sin(w))
    term2 = ups**2 * (-c2 * w + half * math.sin(w))
    term3 = ups * mu * math.cos(w)
    return term1, term2, term3


def bifurcation_denominator(params: WaveParameters) -> float:
    val = sum(bifurcation_terms(params))
    if abs(val) < 1e-8:
        raise PeriodicNonConvergence("bifurcation denominator vanishes")
    return val


def project_off_kernel(F: np.ndarray, nu: np.ndarray) -> np.ndarray:
    return F - (pairing(F, nu) / pairing(nu, nu)) * nu


def gamma_solve_modes(ops: ModalOps, omega: float, G: np.ndarray, nu: np.ndarray) -> np.ndarray:
    """Solve Gamma[omega] F = G for F orthogonal to nu, G orthogonal to nu."""
    k = ops.k
    d11, d12, d21, d22 = symbol_D(ops.mu, omega * k)
    m = (ops.c * omega * k) ** 2
    a11, a22 = d11 - m, d22 - m
    F = np.zeros_like(G, dtype=complex)
    det = a11 * a22 - d12 * d21
    big = np.abs(k) >= 2
    big &= np.abs(k) <= ops.kmax
    if np.any(np.abs(det[big]) < 1e-12):
        raise PeriodicNonConvergence("near-singular mode block; mu outside the valid regime")
    F[0, big] = (a22[big] * G[0, big] - d12[big] * G[1, big]) / det[big]
    F[1, big] = (-d21[big] * G[0, big] + a11[big] * G[1, big]) / det[big]
    # k = 0: first component is mean zero, second block is 2(2+mu)
    F[1, 0] = G[1, 0] / a22[0]
    for idx in (1, ops.n - 1):
        M = np.array([[a11[idx], d12[idx]], [d21[idx], a22[idx]]])
        v = nu[:, idx] / np.linalg.norm(nu[:, idx])
        u = np.array([-np.conj(v[1]), np.conj(v[0])])  # orthonormal complement
        lam = np.vdot(u, M @ u)
        F[:, idx] = (np.vdot(u, G[:, idx]) / lam) * u
    return F


@dataclass(frozen=True)
class PeriodicWave:
    a: float
    omega: float
    omega_critical: float
    upsilon: float
    psi1: np.ndarray = field(repr=False)  # cosine coefficients, k = 0..K_MAX
    psi2: np.ndarray = field(repr=False)  # sine coefficients, k = 0..K_MAX
    mu: float
    c: float
    residual: float
    iterations: int
    orthogonality: float

    @property
    def xi(self) -> float:
        return self.omega - self.omega_critical

    def psi_norm(self) -> float:
        return float(np.sum(np.abs(self.psi1)) + np.sum(np.abs(self.psi2)))

    def components(self, theta: np.ndarray, derivative: bool = False):
        """(phi1, phi2) = nu + psi, or their theta-derivatives, at phases theta."""
        kk = np.arange(len(self.psi1))
        ct, st = np.cos(np.outer(theta, kk)), np.sin(np.outer(theta, kk))
        if derivative:
            p1 = -self.upsilon * np.sin(theta) - st @ (kk * self.psi1)
            p2 = np.cos(theta) + ct @ (kk * self.psi2)
        else:
            p1 = self.upsilon * np.cos(theta) + ct @ self.psi1
            p2 = np.sin(theta) + st @ self.psi2
        return p1, p2


def _real_coeffs(F: np.ndarray, kmax: int):
    c1 = np.zeros(kmax + 1)
    s2 = np.zeros(kmax + 1)
    c1[0] = F[0, 0].real
    c1[1:] = 2.0 * F[0, 1:kmax + 1].real
    s2[1:] = -2.0 * F[1, 1:kmax + 1].imag
    return c1, s2


def _symmetrize(F: np.ndarray) -> np.ndarray:
    """Impose first component real-even (real coefficients), second odd (imaginary)."""
    G = F.copy()
    n = F.shape[1]
    neg = (-np.arange(n)) % n
    G[0] = 0.5 * (F[0] + np.conj(F[0, neg]))
    G[0] = G[0].real + 0j
    G[1] = 0.5 * (F[1] + np.conj(F[1, neg]))
    G[1] = 1j * G[1].imag
    G[0, 0] = 0.0
    return G


def periodic_residual(ops: ModalOps, omega: float, a: float, phi: np.ndarray) -> float:
    """sup over theta of the scaled traveling-wave equation for a*phi."""
    R = ops.gamma(omega, a * phi) + ops.D(omega, ops.Q(a * phi, a * phi))
    return float(np.max(np.abs(ops.to_theta(R))))


def solve_periodic(params: WaveParameters, a: float, tol: float = 1e-14, maxiter: int = 200,
                   kmax: int = K_MAX, n_theta: int = N_THETA, enforce_threshold: bool = False) -> PeriodicWave:
    """Alternating fixed point for the frequency correction and the corrector."""
    if enforce_threshold and abs(params.mu) > mu_threshold(params.c):
        raise ValueError("mu exceeds the periodic-wave threshold")
    cf = critical_frequency_mu(params)
    w0 = cf.omega
    ups = kernel_coefficient(params, w0)
    ops = ModalOps(params.c, params.mu, n_theta, kmax)
    nu = kernel_modes(ups, n_theta)
    denom = pairing(ops.gamma_domega(w0, nu), nu)
    if abs(denom) < 1e-8:
        raise PeriodicNonConvergence("bifurcation denominator vanishes")

    def sweep(psi, xi):
        phi = nu + psi
        w = w0 + xi
        dG = ops.gamma(w, phi) - ops.gamma(w0, phi)
        lin = xi * ops.gamma_domega(w0, nu)
        rem = -(dG - lin) - a * ops.D(w, ops.Q(phi, phi))
        xi_new = pairing(rem, nu) / denom
        w = w0 + xi_new
        T = -(ops.gamma(w, phi) - ops.gamma(w0, phi)) - a * ops.D(w, ops.Q(phi, phi))
        T = project_off_kernel(_truncate(T, kmax), nu)
        psi_new = _symmetrize(gamma_solve_modes(ops, w0, T, nu))
        psi_new = project_off_kernel(psi_new, nu)
        return psi_new, xi_new

    psi = np.zeros((2, n_theta), dtype=complex)
    xi = 0.0
    it = 0
    if a != 0.0:
        damping = 1.0
        dists = []
        for it in range(1, maxiter + 1):
            psi_n, xi_n = sweep(psi, xi)
            dist = float(np.max(np.abs(psi_n - psi))) + abs(xi_n - xi)
            psi = psi + damping * (psi_n - psi)
            xi = xi + damping * (xi_n - xi)
            dists.append(dist)
            if dist < tol:
                break
            if len(dists) >= 4 and all(dists[-j] > dists[-j - 1] for j in (1, 2, 3)):
                if damping == 1.0:
                    damping, dists = 0.5, []
                else:
                    raise PeriodicNonConvergence(f"no contraction at a={a}, mu={params.mu}")
        else:
            raise PeriodicNonConvergence(f"no convergence in {maxiter} sweeps at a={a}")
    w = w0 + xi
    res = periodic_residual(ops, w, a, nu + psi)
    c1, s2 = _real_coeffs(psi, kmax)
    return PeriodicWave(a=a, omega=w, omega_critical=w0, upsilon=ups, psi1=c1, psi2=s2,
                        mu=params.mu, c=params.c, residual=res, iterations=it,
                        orthogonality=abs(pairing(psi, nu)))


def evaluate_periodic(wave: PeriodicWave, grid: Grid) -> ProfilePair:
    """Samples of a*phi(omega x) on a grid."""
    p1, p2 = wave.components(wave.omega * grid.x)
    return ProfilePair(GridFunction(grid, wave.a * p1, "even"), GridFunction(grid, wave.a * p2, "odd"))


def evaluate_periodic_at(wave: PeriodicWave, x: np.ndarray, derivative: bool = False):
    """Arrays a*phi(omega x), or d/dx of it, at arbitrary points x."""
    p1, p2 = wave.components(wave.omega * np.asarray(x, dtype=float), derivative)
    s = wave.a * (wave.omega if derivative else 1.0)
    return s * p1, s * p2
