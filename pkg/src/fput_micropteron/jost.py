"""Jost solution of the adjoint linearization and the solvability functional.

gamma solves L_c^* gamma = 0 and behaves like sin(omega_c (x + theta)) as
x -> +infinity.  It is built from f = e^{i omega x} + g with

    g = [B_c^-]^{-1} Sigma^* (e^{i omega x} + g),   Sigma^* h = -varsigma M h,

M = 2 (2 + A), where [B_c^-]^{-1} inverts B_c among functions that decay at
+infinity.  The iteration is carried out for u = e^{q x} g, which is localized,
so every FFT sees decaying data.  On x < 0 the function g is recovered from the
opposite one-sided inverse plus the two residues at +-omega:

    [B^-]^{-1} r - [B^+]^{-1} r = alpha e^{i omega x} + beta e^{-i omega x},
    alpha = -i r^(omega)/B'(omega),  beta = -i r^(-omega)/B'(-omega),

with r^(z) = int r(x) e^{-i z x} dx.  Then f~(x) = f(x) - f(-x) is odd and its
imaginary (or real) part, normalized to unit tail amplitude, is gamma.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dispersion import WaveParameters, critical_frequency, eval_symbol_B, symbol_B_derivative
from .solitary import SolitaryWave
from .spectral_ops import Grid, GridFunction, apply_Lc, multiply

BLEND_WIDTH = 4.0


class NeumannDivergence(RuntimeError):
    """Raised when the Neumann series for the Jost solution fails to contract."""


class StripZeroError(ValueError):
    pass


def _weighted_symbol(c: float, k: np.ndarray, q: float) -> np.ndarray:
    """Symbol of e^{-qx} B_c e^{qx}, namely B_c(-k + iq)."""
    return -c * c * (-k + 1j * q) ** 2 + 2.0 + 2.0 * np.cos(-k + 1j * q)


def strip_margin(c: float, grid: Grid, q: float) -> float:
    return float(np.min(np.abs(_weighted_symbol(c, grid.k, q))))


def invert_B_weighted(params: WaveParameters, q: float, g: GridFunction) -> GridFunction:
    """Solution f of B_c f = g with e^{-qx} f bounded.

    f = e^{qx} F^{-1}[F[e^{-qx} g]/B_c(-k + iq)].  For q > 0 the result decays at
    -infinity and may grow like e^{qx} at +infinity; for q < 0 the reverse.
    """
    if not 0.0 < abs(q) < 1.0:
        raise ValueError("weight must satisfy 0 < |q| < 1")
    grid = g.grid
    sym = _weighted_symbol(params.c, grid.k, q)
    if np.min(np.abs(sym)) < 1e-10:
        raise StripZeroError("shifted symbol nearly vanishes on the grid")
    x = grid.x
    u = np.fft.ifft(np.fft.fft(np.exp(-q * x) * g.values) / sym)
    f = np.exp(q * x) * u
    if not np.iscomplexobj(g.values):
        f = f.real
    return GridFunction(grid, f, g.parity)


def inverse_kernel_l1(params: WaveParameters, grid: Grid, q: float) -> float:
    """L^1 norm of x -> e^{qx} F^{-1}[1/B_c(-k+iq)](x), an operator-norm proxy."""
    sym = _weighted_symbol(params.c, grid.k, q)
    kern = np.fft.ifft(1.0 / sym) / grid.dx
    kern = np.fft.fftshift(kern)
    xs = grid.dx * (np.arange(grid.n_points) - grid.n_points // 2)
    return float(np.sum(np.abs(np.exp(q * xs) * kern)) * grid.dx)


def _laplace_pair(x: np.ndarray, dx: float, f: np.ndarray, z: complex):
    """(L+[f](z), L-[f](z)) by the trapezoid rule on the two half-lines."""
    w = np.where(x == 0.0, 0.5, 1.0) * dx
    pos, neg = x >= 0, x <= 0
    lp = np.sum(w[pos] * f[pos] * np.exp(-z * x[pos]))
    lm = np.sum(w[neg] * f[neg] * np.exp(-z * x[neg]))
    return lp, lm


def residue_coefficients(params: WaveParameters, solitary: SolitaryWave, h: GridFunction,
                         omega: Optional[float] = None):
    """Residues (alpha, beta) produced by varsigma h at the zeros +-omega of B_c."""
    if omega is None:
        omega = critical_frequency(params).omega
    grid = h.grid
    r = solitary.profile.values * h.values
    return _residues(params, grid, r, omega)


def _residues(params, grid, r, omega):
    x = grid.x
    lp, lm = _laplace_pair(x, grid.dx, r, 1j * omega)
    alpha = -1j * (lp + lm) / symbol_B_derivative(params, omega)
    lp, lm = _laplace_pair(x, grid.dx, r, -1j * omega)
    beta = -1j * (lp + lm) / symbol_B_derivative(params, -omega)
    return complex(alpha), complex(beta)


@dataclass(frozen=True)
class JostSolution:
    gamma: GridFunction
    theta: float
    omega: float
    alpha: complex
    beta: complex
    q: float
    tail_misfit: float
    derivative_misfit: float
    iterations: int
    contraction: float
    branch: str
    amplitude: float
    remainder: np.ndarray = field(repr=False)

    @property
    def grid(self) -> Grid:
        return self.gamma.grid

    @property
    def sin_margin(self) -> float:
        return math.sin(self.omega * self.theta)

    def blend(self, x: np.ndarray) -> np.ndarray:
        return _blend(x, self.omega, self.theta)


def _blend(x, w, th, order: int = 0):
    """Smooth odd function equal to sin(w(x + th)) for x >> 0; or its second derivative."""
    t = np.tanh(x / BLEND_WIDTH)
    ct, st = math.cos(w * th), math.sin(w * th)
    if order == 0:
        return ct * np.sin(w * x) + st * t * np.cos(w * x)
    tp = (1.0 - t * t) / BLEND_WIDTH
    tpp = -2.0 * t * tp / BLEND_WIDTH
    return (-w * w * ct * np.sin(w * x)
            + st * (tpp * np.cos(w * x) - 2.0 * w * tp * np.sin(w * x) - w * w * t * np.cos(w * x)))


def neumann_jost(params: WaveParameters, solitary: SolitaryWave, q: Optional[float] = None,
                 tol: float = 1e-15, maxiter: int = 200) -> JostSolution:
    """Jost solution by the weighted Neumann series and the residue split."""
    grid = solitary.grid
    x, k, dx = grid.x, grid.k, grid.dx
    c = params.c
    s = solitary.profile.values
    omega = critical_frequency(params).omega
    if q is None:
        rate = solitary.fitted_tail_rate if np.isfinite(solitary.fitted_tail_rate) else solitary.tail_rate
        q = min(0.5 * rate, 0.25)
    sym_minus = _weighted_symbol(c, k, -q)  # acts on u = e^{qx} g
    sym_plus = _weighted_symbol(c, k, q)
    if min(np.min(np.abs(sym_minus)), np.min(np.abs(sym_plus))) < 1e-10:
        raise StripZeroError("shifted symbol nearly vanishes on the grid")
    m_shift = 2.0 * (2.0 + 2.0 * np.cos(k + 1j * q))  # e^{qx} M e^{-qx}
    m_tilde = 2.0 * (2.0 + 2.0 * math.cos(omega))
    ew = np.exp(1j * omega * x)
    eq = np.exp(q * x)

    def T(u):
        return -np.fft.ifft(np.fft.fft(s * np.fft.ifft(m_shift * np.fft.fft(u))) / sym_minus)

    b = -np.fft.ifft(np.fft.fft(m_tilde * s * eq * ew) / sym_minus)
    if np.any(s):
        contraction = float(np.linalg.norm(T(b)) / np.linalg.norm(b))
    else:
        contraction = 0.0
    if contraction >= 1.0:
        raise NeumannDivergence(f"Neumann contraction estimate {contraction:.3f} >= 1; invertibility unverified")
    u = b.copy()
    it = 0
    prev = np.inf
    for it in range(1, maxiter + 1):
        un = b + T(u)
        d = float(np.max(np.abs(un - u)))
        u = un
        if d < tol * max(1.0, float(np.max(np.abs(u)))):
            break
        if d > prev and it > 3:
            raise NeumannDivergence("Neumann iterates stopped contracting")
        prev = d
    # data r = Sigma^* h on the whole line, in weighted forms
    s_mu = -s * np.fft.ifft(m_shift * np.fft.fft(u))       # e^{qx} Sigma^* g
    r = -m_tilde * s * ew + s_mu / eq
    alpha, beta = _residues(params, grid, r, omega)
    g_right = u / eq
    r_left = -m_tilde * s * ew / eq + s_mu / eq**2          # e^{-qx} r
    g_left = eq * np.fft.ifft(np.fft.fft(r_left) / sym_plus) + alpha * ew + beta / ew
    g = np.where(x >= 0, g_right, g_left)
    f = ew + g
    mirror = grid.mirror_index()
    ft = f - f[mirror]
    im_amp = math.hypot(2.0 + alpha.real - beta.real, alpha.imag + beta.imag)
    re_amp = math.hypot(beta.imag - alpha.imag, alpha.real + beta.real)
    if im_amp >= re_amp:
        branch, part = "imag", ft.imag
        a_sin, b_cos = 2.0 + alpha.real - beta.real, -(alpha.imag + beta.imag)
    else:
        branch, part = "real", ft.real
        a_sin, b_cos = beta.imag - alpha.imag, -(alpha.real + beta.real)
    amp = math.hypot(a_sin, b_cos)
    gam = math.copysign(1.0, a_sin) * part / amp
    theta = math.atan(b_cos / a_sin) / omega
    gam[0] = 0.0
    gam = 0.5 * (gam - gam[mirror])
    L = grid.half_length
    tail = (x > 0.75 * L) & (x < 0.9 * L)
    misfit = float(np.max(np.abs(gam[tail] - np.sin(omega * (x[tail] + theta)))))
    remainder = gam - _blend(x, omega, theta)
    remainder[0] = 0.0
    dgam = multiply(remainder, 1j * k) + omega * (
        math.cos(omega * theta) * np.cos(omega * x)
        + math.sin(omega * theta) * (_tanh_d(x) * np.cos(omega * x) / omega - np.tanh(x / BLEND_WIDTH) * np.sin(omega * x)))
    dmis = float(np.max(np.abs(dgam[tail] - omega * np.cos(omega * (x[tail] + theta)))))
    return JostSolution(gamma=GridFunction(grid, gam, "odd"), theta=theta, omega=omega,
                        alpha=alpha, beta=beta, q=q, tail_misfit=misfit, derivative_misfit=dmis,
                        iterations=it, contraction=contraction, branch=branch, amplitude=amp,
                        remainder=remainder)


def _tanh_d(x):
    t = np.tanh(x / BLEND_WIDTH)
    return (1.0 - t * t) / BLEND_WIDTH


def _shift_sum_blend(x, w, th):
    return _blend(x + 1.0, w, th) + _blend(x - 1.0, w, th)


def jost_adjoint_residual(params: WaveParameters, solitary: SolitaryWave, jost: JostSolution,
                          interior: float = 0.9) -> float:
    """sup |L_c^* gamma| over |x| <= interior * L.

    gamma = blend + remainder; the blend is handled analytically so the
    periodic box never sees the non-decaying tail.
    """
    grid = jost.grid
    x, k = grid.x, grid.k
    c2 = params.c**2
    w, th = jost.omega, jost.theta
    rem = jost.remainder
    a_gam = _shift_sum_blend(x, w, th) + multiply(rem, 2.0 * np.cos(k))
    gpp = _blend(x, w, th, order=2) + multiply(rem, -k * k)
    gam = jost.gamma.values
    out = c2 * gpp + 2.0 * gam + a_gam + 2.0 * solitary.profile.values * (2.0 * gam + a_gam)
    mask = np.abs(x) <= interior * grid.half_length
    return float(np.max(np.abs(out[mask])))


def functional_iota(jost: JostSolution, g: GridFunction, decay_tol: float = 1e-10) -> float:
    """iota[g] = int g gamma by the trapezoid rule on the box."""
    v = g.values
    scale = max(float(np.max(np.abs(v))), 1e-300)
    edge = max(abs(v[0]), abs(v[1]), abs(v[-1]))
    if edge > decay_tol * max(scale, 1.0):
        warnings.warn("iota applied to a function that has not decayed at the box edges", RuntimeWarning)
    return float(np.sum(v * jost.gamma.values) * jost.grid.dx)


def chi_c(params: WaveParameters, solitary: SolitaryWave, omega: Optional[float] = None) -> GridFunction:
    """(2 + A)(varsigma sin(omega_c x))."""
    if omega is None:
        omega = critical_frequency(params).omega
    grid = solitary.grid
    v = solitary.profile.values * np.sin(omega * grid.x)
    return GridFunction(grid, 2.0 * v + multiply(v, 2.0 * np.cos(grid.k)), "odd")


def iota_chi_stated(params: WaveParameters, jost: JostSolution) -> float:
    """(2 c^2 omega - sin omega) sin(omega theta): the closed form as usually quoted."""
    w = jost.omega
    return (2.0 * params.c**2 * w - math.sin(w)) * math.sin(w * jost.theta)


def iota_chi_derived(params: WaveParameters, jost: JostSolution) -> float:
    """(c^2 omega + sin omega) sin(omega theta).

    From L^* gamma = 0, varsigma (2 + A) gamma = -B gamma / 2, so
    iota[chi] = -(1/2) int sin(omega x) B gamma; integrating by parts on [-R, R]
    leaves only boundary terms, which evaluate to the expression above for a
    unit-amplitude tail.
    """
    w = jost.omega
    return (params.c**2 * w + math.sin(w)) * math.sin(w * jost.theta)


def random_odd_panel(grid: Grid, n: int = 10, seed: int = 0, spread: float = 30.0) -> list:
    """Odd Gaussian bumps with random centers, widths and amplitudes."""
    rng = np.random.default_rng(seed)
    x = grid.x
    out = []
    for _ in range(n):
        x0 = rng.uniform(-spread, spread)
        w = rng.uniform(1.5, 8.0)
        amp = rng.normal()
        f = amp * (np.exp(-((x - x0) / w) ** 2) - np.exp(-((x + x0) / w) ** 2) + x / w * np.exp(-(x / w) ** 2))
        f[0] = 0.0
        out.append(GridFunction(grid, f, "odd"))
    return out


def solvability_defect(params: WaveParameters, solitary: SolitaryWave, jost: JostSolution,
                       panel: list) -> float:
    """max over the panel of |iota[L_c f]| / sup|f|; zero when gamma spans coker L_c."""
    worst = 0.0
    for f in panel:
        v = functional_iota(jost, apply_Lc(params, solitary.profile, f))
        worst = max(worst, abs(v) / f.sup())
    return worst
