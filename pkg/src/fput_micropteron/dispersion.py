"""Dispersion symbols of the monatomic and diatomic FPUT traveling-wave problems.

The monatomic symbol is B_c(k) = -c^2 k^2 + 2 + 2 cos k.  Its unique positive
zero omega_c is the ripple frequency of every wave built in this package.  For
the mass dimer the relevant object is the upper eigencurve lambda_mu^+ and the
root of c^2 w^2 = lambda_mu^+(w).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

_BRACKET_PAD = 1e-9
_ROOT_XTOL = 1e-13


@dataclass(frozen=True)
class WaveParameters:
    """Speed, mass detuning and diagnostic weight of a traveling wave.

    ``mu = 1/m - 1`` where ``m`` is the second mass of the dimer.  When
    ``epsilon`` is given the speed is tied to it by c^2 = 1 + epsilon^2/24.
    """

    c: float
    mu: float = 0.0
    epsilon: Optional[float] = None
    q: float = 0.1

    def __post_init__(self):
        if not math.isfinite(self.c) or abs(self.c) <= 1.0:
            raise ValueError(f"wave speed requires |c| > 1, got c={self.c}")
        if not abs(self.mu) < 1.0:
            raise ValueError(f"mass detuning requires |mu| < 1, got mu={self.mu}")
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"weight requires 0 < q < 1, got q={self.q}")
        if self.epsilon is not None:
            if self.epsilon <= 0:
                raise ValueError("epsilon must be positive")
            c2 = 1.0 + self.epsilon**2 / 24.0
            if abs(self.c**2 - c2) > 8 * np.finfo(float).eps * c2:
                raise ValueError("c and epsilon violate c^2 = 1 + epsilon^2/24")

    @classmethod
    def from_epsilon(cls, epsilon: float, mu: float = 0.0, q: float = 0.1) -> "WaveParameters":
        if epsilon <= 0:
            raise ValueError("epsilon must be positive")
        return cls(c=math.sqrt(1.0 + epsilon**2 / 24.0), mu=mu, epsilon=epsilon, q=q)

    @property
    def near_sonic_epsilon(self) -> float:
        """epsilon implied by c, whether or not it was supplied."""
        if self.epsilon is not None:
            return self.epsilon
        return math.sqrt(24.0 * (self.c**2 - 1.0))

    def with_mu(self, mu: float) -> "WaveParameters":
        return WaveParameters(c=self.c, mu=mu, epsilon=self.epsilon, q=self.q)

    def with_q(self, q: float) -> "WaveParameters":
        return WaveParameters(c=self.c, mu=self.mu, epsilon=self.epsilon, q=q)


@dataclass(frozen=True)
class CriticalFrequency:
    omega: float
    residual: float
    bracket: tuple
    certificate: float = field(default=float("nan"))


def eval_symbol_B(params: WaveParameters, k):
    """Monatomic symbol -c^2 k^2 + 2 + 2 cos k; accepts complex k."""
    k = np.asarray(k)
    out = -params.c**2 * k**2 + 2.0 + 2.0 * np.cos(k)
    return out if out.ndim else out[()]


def symbol_B_derivative(params: WaveParameters, k):
    k = np.asarray(k)
    out = -2.0 * params.c**2 * k - 2.0 * np.sin(k)
    return out if out.ndim else out[()]


def _bracket(c: float) -> tuple:
    return (math.sqrt(2.0) / abs(c) + _BRACKET_PAD, math.pi / 2 - _BRACKET_PAD)


def critical_frequency(params: WaveParameters) -> CriticalFrequency:
    """Positive zero of the monatomic symbol, located by Brent's method."""
    lo, hi = _bracket(params.c)
    f = lambda w: float(eval_symbol_B(params, w))
    if f(lo) * f(hi) > 0:
        raise ValueError(f"no sign change of the symbol on {(lo, hi)}; c={params.c}")
    w = brentq(f, lo, hi, xtol=_ROOT_XTOL, rtol=4 * np.finfo(float).eps, maxiter=200)
    cert = 2.0 * abs(params.c**2 * w - math.sin(w))
    return CriticalFrequency(omega=w, residual=abs(f(w)), bracket=(lo, hi), certificate=cert)


def eigencurves(mu: float, K):
    """Eigenvalues (lambda_minus, lambda_plus) of the dimer symbol at wavenumber K."""
    if not abs(mu) < 1.0:
        raise ValueError("eigencurves require |mu| < 1")
    K = np.asarray(K, dtype=float)
    if mu == 0.0:
        ac = np.abs(np.cos(K))
        lm, lp = 2.0 - 2.0 * ac, 2.0 + 2.0 * ac
    else:
        rad = np.sqrt(mu**2 + 4.0 * (1.0 + mu) * np.cos(K) ** 2)
        lm, lp = 2.0 + mu - rad, 2.0 + mu + rad
    if lm.ndim == 0:
        return float(lm), float(lp)
    return lm, lp


def mu_threshold(c: float) -> float:
    """Conservative detuning bound under which the dimer root analysis applies."""
    return min(0.1, (c**2 - 1.0) / 4.0, (2.0 * math.cos(1.0) - 1.0) / 8.0)


def sound_speed_squared(mu: float) -> float:
    """Long-wave speed squared of the dimer, lim lambda_mu^-(K)/K^2."""
    return 2.0 * (1.0 + mu) / (2.0 + mu)


def critical_frequency_mu(params: WaveParameters) -> CriticalFrequency:
    """Root of c^2 w^2 = lambda_mu^+(w) on the same bracket as the monatomic case."""
    if params.mu == 0.0:
        return critical_frequency(params)
    lo, hi = _bracket(params.c)
    c2, mu = params.c**2, params.mu
    f = lambda w: c2 * w * w - eigencurves(mu, w)[1]
    if f(lo) * f(hi) > 0:
        raise ValueError(f"no root of c^2 w^2 = lambda_plus on {(lo, hi)}; mu={mu} is outside the valid regime")
    w = brentq(f, lo, hi, xtol=_ROOT_XTOL, rtol=4 * np.finfo(float).eps, maxiter=200)
    rad = math.sqrt(mu**2 + 4.0 * (1.0 + mu) * math.cos(w) ** 2)
    cert = abs(2.0 * c2 * w - 4.0 * (1.0 + mu) * math.cos(w) * math.sin(w) / rad)
    return CriticalFrequency(omega=w, residual=abs(f(w)), bracket=(lo, hi), certificate=cert)


def kernel_coefficient(params: WaveParameters, omega: Optional[float] = None) -> float:
    """First-component weight upsilon of the periodic kernel vector (upsilon cos, sin)."""
    mu = params.mu
    if omega is None:
        omega = critical_frequency_mu(params).omega
    if mu == 0.0:
        return 0.0
    denom = eigencurves(mu, omega)[1] - (2.0 + mu) * (1.0 - math.cos(omega))
    if abs(denom) < 1e-8:
        raise ValueError("kernel coefficient denominator vanishes; mu outside the valid regime")
    return mu * math.sin(omega) / denom


def solitary_decay_rate(c: float) -> float:
    """Decay rate b > 0 of the linearized solitary tail: c^2 b^2 + 2 - 2 cosh b = 0."""
    c2 = c * c
    f = lambda b: c2 * b * b + 2.0 - 2.0 * math.cosh(b)
    hi = 1.0
    while f(hi) > 0:
        hi *= 2.0
    lo = min(1e-3, math.sqrt(24.0 * (c2 - 1.0)) / 8.0)
    return brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
