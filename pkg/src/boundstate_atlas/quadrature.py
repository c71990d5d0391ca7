"""Periodic quadrature on the 2-torus and the Gram integrals built on it.

All integrals use the uniform periodic (trapezoidal) rule on an n x n grid of
[-pi, pi)^2, which is spectrally accurate for smooth periodic integrands.
The Gram integrands are even in p1 and in p2 separately, so the kernels sum
over the quarter [0, pi]^2 with weights 1 on the 0/pi lines and 2 elsewhere;
this is the same trapezoidal sum, reordered.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, special

from . import kernels
from .lattice import EssentialBand, Quasimomentum, essential_band

EDGE_GUARD = 1e-8
K0 = Quasimomentum(0.0, 0.0)
BAND0 = EssentialBand(0.0, 8.0)
# only tables at least this long are memoised (scan grids, not bisection steps)
_CACHE_MIN = 32


class BandError(ValueError):
    """Spectral parameter inside the essential band or too close to an edge."""


@dataclass(frozen=True)
class GridSpec:
    n: int = 512

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 16 or self.n % 2:
            raise ValueError(f"grid size must be an even integer >= 16, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def h(self) -> float:
        return 2.0 * math.pi / self.n

    def nodes(self) -> np.ndarray:
        return -math.pi + self.h * np.arange(self.n)

    def refined(self) -> "GridSpec":
        return GridSpec(2 * self.n)


DEFAULT_GRID = GridSpec(512)


def integrate_torus(f, grid: GridSpec = DEFAULT_GRID) -> float:
    """(2 pi / n)^2 * sum of f over the n x n periodic grid.

    ``f(p1, p2)`` must accept broadcast arrays and be finite at every node.
    """
    if not isinstance(grid, GridSpec):
        grid = GridSpec(grid)
    p = grid.nodes()
    p1, p2 = np.meshgrid(p, p, indexing="ij")
    vals = np.broadcast_to(np.asarray(f(p1, p2), dtype=float), p1.shape)
    if not np.all(np.isfinite(vals)):
        raise ValueError("integrand is not finite at every grid node")
    return float(grid.h ** 2 * np.sum(vals))


@lru_cache(maxsize=8)
def _quarter(n: int):
    m = n // 2
    p = np.arange(m + 1) * (2.0 * math.pi / n)
    w = np.full(m + 1, 2.0)
    w[0] = w[-1] = 1.0
    p1, p2 = np.meshgrid(p, p, indexing="ij")
    wt = np.outer(w, w).ravel()
    return p1.ravel(), p2.ravel(), wt


@lru_cache(maxsize=32)
def _node_data(n: int, b1: float, b2: float, kind: str):
    p1, p2, wt = _quarter(n)
    c1, c2 = np.cos(p1), np.cos(p2)
    energy = 2.0 * (1.0 - b1 * c1) + 2.0 * (1.0 - b2 * c2)
    if b1 == 1.0 and b2 == 1.0:
        # exact zero at p = 0 and exact 8 at p = (pi, pi) for the edge-node rule
        energy = 4.0 - 2.0 * c1 - 2.0 * c2
    c21, c22 = np.cos(2 * p1), np.cos(2 * p2)
    if kind == "anti":
        feats = np.stack([c1 - c2, c21 - c22], axis=1)
        odd = None
    elif kind == "full":
        feats = np.stack([np.ones_like(c1), c1, c2, c21, c22, c1 * c2], axis=1)
        odd = (np.sin(p1) * np.sin(p2))[:, None]
    elif kind == "sym":
        feats = np.stack([np.ones_like(c1), c1 + c2, c21 + c22, c1 * c2], axis=1)
        odd = (np.sin(p1) * np.sin(p2))[:, None]
    else:
        raise KeyError(kind)
    return np.ascontiguousarray(feats), None if odd is None else np.ascontiguousarray(odd), wt, energy


def _raw_table(n, b1, b2, kind, zs):
    feats, odd, wt, energy = _node_data(n, b1, b2, kind)
    g = kernels.weighted_gram(feats, wt, energy, zs)
    if odd is None:
        return g
    # sin p1 sin p2 is odd in each variable: orthogonal to every even kernel
    go = kernels.weighted_gram(odd, wt, energy, zs)
    m = g.shape[1]
    out = np.zeros((zs.size, m + 1, m + 1))
    out[:, :m, :m] = g
    out[:, m, m] = go[:, 0, 0]
    return out


@lru_cache(maxsize=24)
def _cached_table(n, b1, b2, kind, zbytes):
    t = _raw_table(n, b1, b2, kind, np.frombuffer(zbytes, dtype=float))
    t.flags.writeable = False
    return t


def _table(grid, K, kind, zs, scale):
    zs = np.ascontiguousarray(np.atleast_1d(np.asarray(zs, dtype=float)))
    b1, b2 = K.hopping
    if zs.size >= _CACHE_MIN:
        t = _cached_table(grid.n, b1, b2, kind, zs.tobytes())
    else:
        t = _raw_table(grid.n, b1, b2, kind, zs)
    return t * (scale / grid.n ** 2)


def check_outside(z, band: EssentialBand, allow_edges: bool = False):
    """Reject spectral parameters inside the band or within EDGE_GUARD of an edge."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if not np.all(np.isfinite(z)):
        raise BandError("spectral parameter must be finite")
    at_edge = (z == band.e_min) | (z == band.e_max)
    if allow_edges and not band.degenerate:
        ok_edge = at_edge
    else:
        ok_edge = np.zeros_like(at_edge)
    inside = (z >= band.e_min) & (z <= band.e_max) & ~ok_edge
    if np.any(inside):
        raise BandError(f"z = {z[inside][0]!r} lies in the essential band "
                        f"[{band.e_min}, {band.e_max}]")
    near = (np.minimum(np.abs(z - band.e_min), np.abs(z - band.e_max)) < EDGE_GUARD) & ~ok_edge
    if np.any(near):
        raise BandError(f"z = {z[near][0]!r} is within {EDGE_GUARD} of a band edge")


@dataclass(frozen=True)
class GramMatrix2:
    """Antisymmetric-sector Gram integrals a_ij(z) at K = 0.

    a_ij(z) = 1/(8 pi^2) * int phi_i phi_j / (E_0 - z) dp with
    phi_1 = cos p1 - cos p2 and phi_2 = cos 2p1 - cos 2p2.
    """

    a11: float
    a12: float
    a22: float
    z: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a12, self.a22]])


@dataclass(frozen=True)
class GramMatrix7:
    """g_mn(K, z) = 1/(4 pi^2) int e_m e_n / (E_K - z) dp over the seven kernels
    (1, cos p1, cos p2, cos 2p1, cos 2p2, cos p1 cos p2, sin p1 sin p2)."""

    g: np.ndarray
    K: Quasimomentum
    z: float


def gram2_many(zs, grid: GridSpec = DEFAULT_GRID) -> np.ndarray:
    """Stack of 2x2 a-matrices, shape (len(zs), 2, 2). Band edges 0 and 8 are allowed."""
    check_outside(zs, BAND0, allow_edges=True)
    return _table(grid, K0, "anti", zs, 0.5)


def gram2(z: float, grid: GridSpec = DEFAULT_GRID) -> GramMatrix2:
    a = gram2_many([z], grid)[0]
    return GramMatrix2(float(a[0, 0]), float(a[0, 1]), float(a[1, 1]), float(z))


def gram7_many(K: Quasimomentum, zs, grid: GridSpec = DEFAULT_GRID) -> np.ndarray:
    check_outside(zs, essential_band(K))
    return _table(grid, K, "full", zs, 1.0)


def gram7(K: Quasimomentum, z: float, grid: GridSpec = DEFAULT_GRID) -> GramMatrix7:
    return GramMatrix7(gram7_many(K, [z], grid)[0], K, float(z))


def gram_sym5_many(zs, grid: GridSpec = DEFAULT_GRID) -> np.ndarray:
    """K = 0 swap-symmetric kernels (1, cos p1 + cos p2, cos 2p1 + cos 2p2,
    cos p1 cos p2, sin p1 sin p2), same 1/(4 pi^2) convention as gram7."""
    check_outside(zs, BAND0)
    return _table(grid, K0, "sym", zs, 1.0)


@dataclass(frozen=True)
class EdgeConstants:
    """Limits of a_ij(z) as z rises to the lower band edge 0, and derived data.

    The lower-edge hyperbola C+(lam, mu) = 0 has asymptotes lam = lambda_star,
    mu = mu_star and offset kappa: (lam - lambda_star)(mu - mu_star) = kappa.
    """

    e11: float
    e12: float
    e22: float

    @property
    def d(self) -> float:
        return self.e11 * self.e22 - self.e12 ** 2

    @property
    def mu_star(self) -> float:
        return self.e11 / self.d

    @property
    def lambda_star(self) -> float:
        return self.e22 / self.d

    @property
    def kappa(self) -> float:
        return (self.e12 / self.d) ** 2

    @classmethod
    def exact(cls) -> "EdgeConstants":
        """Closed forms (4-pi)/(2pi), (16-5pi)/(2pi), (32-10pi)/pi."""
        pi = math.pi
        return cls((4 - pi) / (2 * pi), (16 - 5 * pi) / (2 * pi), (32 - 10 * pi) / pi)


def edge_constants(grid: GridSpec = DEFAULT_GRID) -> EdgeConstants:
    """a_ij(0) with the single singular node p = 0 given integrand value 0."""
    g = gram2(0.0, grid)
    return EdgeConstants(g.a11, g.a12, g.a22)


def bessel_a11(z: float) -> float:
    """Independent oracle for a11(z), z < 0, via the heat-kernel representation

        a11(z) = 1/2 int_0^inf e^{zt} [I0 (I0 + I2) - 2 I1^2](2t) e^{-4t} dt,

    using exponentially scaled Bessel functions. For z > 8 the band reflection
    a11(z) = -a11(8 - z) is applied.
    """
    if z > 8.0:
        return -bessel_a11(8.0 - z)
    if z > 0.0:
        raise BandError("Bessel oracle defined for z <= 0 or z > 8")

    def integrand(t):
        i0, i1, i2 = special.ive(0, 2 * t), special.ive(1, 2 * t), special.ive(2, 2 * t)
        return math.exp(z * t) * (i0 * (i0 + i2) - 2.0 * i1 * i1)

    val, _ = integrate.quad(integrand, 0.0, np.inf, limit=500, epsabs=1e-14, epsrel=1e-13)
    return 0.5 * val


def bessel_a11_edge() -> float:
    """a11(0) = 1/2 - int_0^inf e^{-2t} (I0(t) - I1(t))^2 dt."""
    val, _ = integrate.quad(lambda t: (special.i0e(t) - special.i1e(t)) ** 2, 0.0, np.inf,
                            limit=500, epsabs=1e-14, epsrel=1e-13)
    return 0.5 - val
