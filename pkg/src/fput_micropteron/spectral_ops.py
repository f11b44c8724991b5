"""Grid functions on a symmetric periodic box and the lattice operators acting on them.

Functions on the line are represented by N samples on x_j = -L + 2Lj/N.  All
advance-delay operators are Fourier multipliers, so they are applied exactly
(up to roundoff) with the FFT:

    A = S^1 + S^-1     multiplier 2 cos k
    delta = S^1 - S^-1 multiplier 2i sin k
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.sparse.linalg import LinearOperator, gmres

from .dispersion import WaveParameters

PARITIES = ("even", "odd", "none")
_PARITY_TOL = 1e-12


@dataclass(frozen=True)
class Grid:
    """Uniform grid of N points on [-L, L) with periodic wraparound."""

    half_length: float = 128.0
    n_points: int = 4096

    def __post_init__(self):
        n = self.n_points
        if n < 4 or n & (n - 1):
            raise ValueError("n_points must be a power of two")
        if self.half_length <= 0:
            raise ValueError("half_length must be positive")

    @property
    def dx(self) -> float:
        return 2.0 * self.half_length / self.n_points

    @property
    def x(self) -> np.ndarray:
        return -self.half_length + self.dx * np.arange(self.n_points)

    @property
    def k(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)

    def mirror_index(self) -> np.ndarray:
        """Index of -x_j; index 0 (x=-L) is its own mirror on the periodic box."""
        return (-np.arange(self.n_points)) % self.n_points

    @classmethod
    def for_epsilon(cls, epsilon: float, dx: float = 0.125, min_half_length: float = 128.0) -> "Grid":
        """Box wide enough that epsilon^2 exp(-b L / 2) is below 1e-16, b the solitary decay rate."""
        b = epsilon / math.sqrt(2.0)
        need = 2.0 * (37.0 + 2.0 * math.log(min(epsilon, 1.0))) / b
        L = 2.0 ** math.ceil(math.log2(max(min_half_length, need)))
        n = int(round(2 * L / dx))
        n = 2 ** int(round(math.log2(n)))
        return cls(half_length=L, n_points=n)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples of a real or complex function together with a parity tag."""

    grid: Grid
    values: np.ndarray
    parity: str = "none"
    mean_zero: bool = False

    def __post_init__(self):
        if self.parity not in PARITIES:
            raise ValueError(f"parity must be one of {PARITIES}")
        v = np.array(self.values, copy=True)
        if v.shape != (self.grid.n_points,):
            raise ValueError("values do not match the grid size")
        if not np.iscomplexobj(v):
            v = v.astype(float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, grid: Grid, fn: Callable, parity: str = "none", mean_zero: bool = False):
        return cls(grid, fn(grid.x), parity, mean_zero)

    @classmethod
    def zeros(cls, grid: Grid, parity: str = "none", mean_zero: bool = False):
        return cls(grid, np.zeros(grid.n_points), parity, mean_zero)

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    def coefficients(self) -> np.ndarray:
        return np.fft.fft(self.values)

    def parity_defect(self) -> float:
        v = self.values
        if self.parity == "none":
            return 0.0
        m = v[self.grid.mirror_index()]
        d = v - m if self.parity == "even" else v + m
        d = d[1:]
        if self.parity == "odd":
            d = np.append(d, v[self.grid.n_points // 2])
        return float(np.max(np.abs(d))) if d.size else 0.0

    def check(self, tol: float = _PARITY_TOL) -> None:
        """Raise if the parity or mean-zero tags are violated."""
        scale = max(1.0, float(np.max(np.abs(self.values))))
        if self.parity_defect() > tol * scale:
            raise AssertionError(f"parity '{self.parity}' violated by {self.parity_defect():.3e}")
        if self.mean_zero:
            m = abs(np.sum(self.values)) / self.grid.n_points
            if m > tol * scale:
                raise AssertionError(f"mean-zero flag violated by {m:.3e}")

    def sup(self, interior: float = 1.0) -> float:
        mask = np.abs(self.x) <= interior * self.grid.half_length
        return float(np.max(np.abs(self.values[mask])))

    def integral(self) -> float:
        return float(np.sum(self.values) * self.grid.dx)

    def with_values(self, values, parity: Optional[str] = None, mean_zero: Optional[bool] = None):
        return GridFunction(self.grid, values,
                            self.parity if parity is None else parity,
                            self.mean_zero if mean_zero is None else mean_zero)

    def __add__(self, other: "GridFunction") -> "GridFunction":
        _same_grid(self, other)
        par = self.parity if self.parity == other.parity else "none"
        return GridFunction(self.grid, self.values + other.values, par, self.mean_zero and other.mean_zero)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        return self + other.scale(-1.0)

    def scale(self, s) -> "GridFunction":
        return GridFunction(self.grid, s * self.values, self.parity, self.mean_zero)

    def symmetrized(self) -> "GridFunction":
        """Project onto the tagged parity (and mean zero) to scrub roundoff."""
        v = np.array(self.values)
        if self.parity != "none":
            m = v[self.grid.mirror_index()]
            v = 0.5 * (v + m) if self.parity == "even" else 0.5 * (v - m)
        if self.mean_zero:
            v = v - np.mean(v)
        return self.with_values(v)

    # serialization -------------------------------------------------------
    def to_csv(self) -> str:
        """CSV with a one-line JSON header; repr() keeps doubles bit-exact."""
        head = {"half_length": self.grid.half_length, "n_points": self.grid.n_points,
                "parity": self.parity, "mean_zero": self.mean_zero,
                "complex": bool(np.iscomplexobj(self.values))}
        out = io.StringIO()
        out.write("# " + json.dumps(head) + "\n")
        if head["complex"]:
            out.write("x,value_real,value_imag\n")
            for xi, vi in zip(self.x, self.values):
                out.write(f"{float(xi)!r},{float(vi.real)!r},{float(vi.imag)!r}\n")
        else:
            out.write("x,value\n")
            for xi, vi in zip(self.x, self.values):
                out.write(f"{float(xi)!r},{float(vi)!r}\n")
        return out.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "GridFunction":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("#"):
            raise ValueError("missing JSON header line")
        head = json.loads(lines[0][1:])
        grid = Grid(float(head["half_length"]), int(head["n_points"]))
        rows = [ln.split(",") for ln in lines[2:] if ln.strip()]
        if head.get("complex"):
            vals = np.array([float(r[1]) + 1j * float(r[2]) for r in rows])
        else:
            vals = np.array([float(r[1]) for r in rows])
        return cls(grid, vals, head["parity"], bool(head["mean_zero"]))


@dataclass(frozen=True)
class ProfilePair:
    """(rho1, rho2) with rho1 even and rho2 odd."""

    rho1: GridFunction
    rho2: GridFunction

    def __post_init__(self):
        _same_grid(self.rho1, self.rho2)

    @property
    def grid(self) -> Grid:
        return self.rho1.grid

    @classmethod
    def zeros(cls, grid: Grid) -> "ProfilePair":
        return cls(GridFunction.zeros(grid, "even"), GridFunction.zeros(grid, "odd"))

    def __add__(self, other):
        return ProfilePair(self.rho1 + other.rho1, self.rho2 + other.rho2)

    def scale(self, s):
        return ProfilePair(self.rho1.scale(s), self.rho2.scale(s))

    def sup(self, interior: float = 1.0) -> float:
        return max(self.rho1.sup(interior), self.rho2.sup(interior))

    def check(self, tol: float = _PARITY_TOL) -> None:
        if self.rho1.parity != "even" or self.rho2.parity != "odd":
            raise AssertionError("ProfilePair must be tagged (even, odd)")
        self.rho1.check(tol)
        self.rho2.check(tol)


def _same_grid(f: GridFunction, g: GridFunction) -> None:
    if f.grid != g.grid:
        raise ValueError("grid mismatch")


# ---------------------------------------------------------------------------
# array-level multipliers

def multiply(values: np.ndarray, symbol: np.ndarray, real: Optional[bool] = None) -> np.ndarray:
    out = np.fft.ifft(symbol * np.fft.fft(values))
    if real is None:
        real = not np.iscomplexobj(values)
    return out.real if real else out


def shift_sum_symbol(k):
    return 2.0 * np.cos(k)


def shift_diff_symbol(k):
    return 2j * np.sin(k)


def _flip(parity: str) -> str:
    return {"even": "odd", "odd": "even"}.get(parity, "none")


def apply_shift_sum(f: GridFunction) -> GridFunction:
    """A f = f(. + 1) + f(. - 1)."""
    return f.with_values(multiply(f.values, shift_sum_symbol(f.grid.k)), mean_zero=f.mean_zero)


def apply_shift_diff(f: GridFunction) -> GridFunction:
    """delta f = f(. + 1) - f(. - 1); flips parity and kills the mean."""
    v = multiply(f.values, shift_diff_symbol(f.grid.k))
    return f.with_values(v - np.mean(v), parity=_flip(f.parity), mean_zero=True)


def second_derivative(f: GridFunction) -> GridFunction:
    k = f.grid.k
    return f.with_values(multiply(f.values, -k * k), mean_zero=True)


def dmu_arrays(mu: float, k: np.ndarray, r1: np.ndarray, r2: np.ndarray, derivative: bool = False):
    """Apply D_mu (or its mu-derivative) to (r1, r2) given as sample arrays."""
    h1, h2 = np.fft.fft(r1), np.fft.fft(r2)
    cs, sn = np.cos(k), np.sin(k)
    if derivative:
        a, b = 0.5, 0.5
    else:
        a, b = 1.0 + 0.5 * mu, 0.5 * mu
    o1 = a * 2.0 * (1.0 - cs) * h1 + b * 2j * sn * h2
    o2 = -b * 2j * sn * h1 + a * 2.0 * (1.0 + cs) * h2
    o1[0] = 0.0
    real = not (np.iscomplexobj(r1) or np.iscomplexobj(r2))
    o1, o2 = np.fft.ifft(o1), np.fft.ifft(o2)
    return (o1.real, o2.real) if real else (o1, o2)


def apply_Dmu(mu: float, rho: ProfilePair) -> ProfilePair:
    """D_mu = 1/2 [[(2+mu)(2-A), mu delta], [-mu delta, (2+mu)(2+A)]]."""
    o1, o2 = dmu_arrays(mu, rho.grid.k, rho.rho1.values, rho.rho2.values)
    return ProfilePair(GridFunction(rho.grid, o1, "even", True), GridFunction(rho.grid, o2, "odd"))


def apply_Dmu_derivative(rho: ProfilePair) -> ProfilePair:
    """(D_mu - D_0)/mu = 1/2 [[2-A, delta], [-delta, 2+A]], exact in mu."""
    o1, o2 = dmu_arrays(0.0, rho.grid.k, rho.rho1.values, rho.rho2.values, derivative=True)
    return ProfilePair(GridFunction(rho.grid, o1, "even", True), GridFunction(rho.grid, o2, "odd"))


def bilinear_Q(rho: ProfilePair, other: ProfilePair) -> ProfilePair:
    """Q(rho, rho') = (rho1 rho1' + rho2 rho2', rho1 rho2' + rho1' rho2)."""
    _same_grid(rho.rho1, other.rho1)
    a1, a2 = rho.rho1.values, rho.rho2.values
    b1, b2 = other.rho1.values, other.rho2.values
    return ProfilePair(GridFunction(rho.grid, a1 * b1 + a2 * b2, "even"),
                       GridFunction(rho.grid, a1 * b2 + b1 * a2, "odd"))


def residual_arrays(c: float, mu: float, k: np.ndarray, r1: np.ndarray, r2: np.ndarray):
    n1, n2 = r1 + r1 * r1 + r2 * r2, r2 + 2.0 * r1 * r2
    d1, d2 = dmu_arrays(mu, k, n1, n2)
    c2k2 = c * c * k * k
    return d1 + multiply(r1, -c2k2), d2 + multiply(r2, -c2k2)


def residual_G(params: WaveParameters, rho: ProfilePair) -> ProfilePair:
    """c^2 rho'' + D_mu rho + D_mu Q(rho, rho); vanishes on traveling waves."""
    o1, o2 = residual_arrays(params.c, params.mu, rho.grid.k, rho.rho1.values, rho.rho2.values)
    o1 = o1 - np.mean(o1)
    return ProfilePair(GridFunction(rho.grid, o1, "even", True), GridFunction(rho.grid, o2, "odd"))


# ---------------------------------------------------------------------------
# linearizations about the monatomic solitary wave

def symbol_Mc(c: float, k):
    """-c^2 k^2 + 2 - 2 cos k, the far-field symbol of H_c."""
    return -c * c * k * k + 2.0 - 2.0 * np.cos(k)


def ratio_symbol(c: float, k: np.ndarray) -> np.ndarray:
    """(2 - 2 cos k)/(-c^2 k^2 + 2 - 2 cos k) with its k=0 limit 1/(1 - c^2)."""
    out = np.empty_like(k, dtype=float)
    nz = k != 0
    out[nz] = (2.0 - 2.0 * np.cos(k[nz])) / symbol_Mc(c, k[nz])
    out[~nz] = 1.0 / (1.0 - c * c)
    return out


def apply_Hc(params: WaveParameters, varsigma: GridFunction, f: GridFunction) -> GridFunction:
    """H_c f = c^2 f'' + (2 - A)((1 + 2 varsigma) f)."""
    k = f.grid.k
    v = multiply(f.values, -params.c**2 * k * k) + multiply((1.0 + 2.0 * varsigma.values) * f.values, 2.0 - 2.0 * np.cos(k))
    return f.with_values(v - np.mean(v), mean_zero=True)


def invert_Mc(c: float, grid: Grid, g: np.ndarray) -> np.ndarray:
    """Decaying solution of M_c f = g for localized mean-zero even g.

    The k=0 coefficient is the limit of g^(k)/M_c(k), fixed by the second moment
    of g: integral f = -integral x^2 g / (2 (1 - c^2)).
    """
    k = grid.k
    gh = np.fft.fft(g)
    fh = np.zeros_like(gh)
    nz = k != 0
    fh[nz] = gh[nz] / symbol_Mc(c, k[nz])
    fh[0] = -np.sum(grid.x**2 * g) / (2.0 * (1.0 - c * c))
    out = np.fft.ifft(fh)
    return out if np.iscomplexobj(g) else out.real


class KrylovFailure(RuntimeError):
    pass


def solve_Hc(params: WaveParameters, varsigma: GridFunction, g: GridFunction,
             tol: float = 1e-12, maxiter: int = 400) -> GridFunction:
    """Decaying even solution of H_c f = g by GMRES on (I + 2 R varsigma) f = M_c^{-1} g.

    R is the multiplier (2 - 2 cos k)/M_c(k); the preconditioned operator is a
    compact perturbation of the identity.
    """
    grid = g.grid
    c = params.c
    R = ratio_symbol(c, grid.k)
    s = varsigma.values
    gv = np.asarray(g.values, dtype=float) - np.mean(g.values)
    rhs = invert_Mc(c, grid, gv)
    if not np.any(rhs):
        return GridFunction.zeros(grid, "even")
    n = grid.n_points
    op = LinearOperator((n, n), matvec=lambda f: f + 2.0 * multiply(s * f, R), dtype=float)
    scale = np.linalg.norm(rhs)
    f, info = gmres(op, rhs / scale, rtol=tol, atol=0.0, restart=80, maxiter=maxiter)
    if info != 0:
        raise KrylovFailure(f"H_c solve did not converge (info={info}); check the grid choice")
    return GridFunction(grid, f * scale, "even").symmetrized()


def apply_B(c: float, grid: Grid, f: np.ndarray) -> np.ndarray:
    k = grid.k
    return multiply(f, -c * c * k * k + 2.0 + 2.0 * np.cos(k))


def apply_Lc(params: WaveParameters, varsigma: GridFunction, f: GridFunction) -> GridFunction:
    """L_c f = c^2 f'' + (2 + A) f + 2 (2 + A)(varsigma f)."""
    k = f.grid.k
    v = apply_B(params.c, f.grid, f.values) + 2.0 * multiply(varsigma.values * f.values, 2.0 + 2.0 * np.cos(k))
    return f.with_values(v)


def apply_Lc_star(params: WaveParameters, varsigma: GridFunction, g: GridFunction) -> GridFunction:
    """L_c^* g = c^2 g'' + (2 + A) g + 2 varsigma (2 + A) g, the L^2 adjoint of L_c."""
    k = g.grid.k
    v = apply_B(params.c, g.grid, g.values) + 2.0 * varsigma.values * multiply(g.values, 2.0 + 2.0 * np.cos(k))
    return g.with_values(v)


def inner(f: GridFunction, g: GridFunction) -> float:
    """Trapezoid approximation of the L^2 pairing on the periodic box."""
    _same_grid(f, g)
    return float(np.sum(f.values * g.values) * f.grid.dx)
