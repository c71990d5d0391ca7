"""Couplings, momenta, dispersions, pair potentials and the essential band."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


def _half_cos(k: float) -> float:
    c = math.cos(k / 2.0)
    # cos(pi/2) is 6e-17 in floating point; keep the K = pi band exactly degenerate
    return 0.0 if abs(c) < 1e-15 else c


def reduce_angle(x):
    """Map angles (scalar or array) into [-pi, pi)."""
    r = np.mod(np.asarray(x, dtype=float) + math.pi, TWO_PI) - math.pi
    if np.ndim(r) == 0:
        return float(r)
    return r


@dataclass(frozen=True)
class CouplingParams:
    """On-site (gamma), nearest- (lam) and next-nearest-neighbour (mu) magnitudes."""

    gamma: float = 0.0
    lam: float = 0.0
    mu: float = 0.0

    def __post_init__(self):
        for name in ("gamma", "lam", "mu"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"coupling {name} must be finite, got {v}")
            object.__setattr__(self, name, v)


@dataclass(frozen=True)
class TorusPoint:
    p1: float
    p2: float

    def __post_init__(self):
        object.__setattr__(self, "p1", reduce_angle(self.p1))
        object.__setattr__(self, "p2", reduce_angle(self.p2))

    def __iter__(self):
        return iter((self.p1, self.p2))


@dataclass(frozen=True)
class Quasimomentum:
    """Total pair quasimomentum K, reduced into [-pi, pi)^2."""

    k1: float = 0.0
    k2: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "k1", reduce_angle(self.k1))
        object.__setattr__(self, "k2", reduce_angle(self.k2))

    def __iter__(self):
        return iter((self.k1, self.k2))

    @property
    def hopping(self) -> tuple[float, float]:
        """cos(K_i / 2) per axis, the effective hopping amplitudes of the pair."""
        return _half_cos(self.k1), _half_cos(self.k2)

    @property
    def is_zero(self) -> bool:
        return self.k1 == 0.0 and self.k2 == 0.0


@dataclass(frozen=True)
class LatticeVector:
    x1: int
    x2: int

    def __post_init__(self):
        for name in ("x1", "x2"):
            v = getattr(self, name)
            if int(v) != v:
                raise ValueError(f"lattice coordinate {name} must be an integer, got {v}")
            object.__setattr__(self, name, int(v))

    @property
    def norm1(self) -> int:
        return abs(self.x1) + abs(self.x2)


@dataclass(frozen=True)
class EssentialBand:
    e_min: float
    e_max: float

    def __post_init__(self):
        if self.e_min > self.e_max:
            raise ValueError(f"empty band [{self.e_min}, {self.e_max}]")

    @property
    def degenerate(self) -> bool:
        return self.e_min == self.e_max

    def contains(self, z: float) -> bool:
        return self.e_min <= z <= self.e_max

    def distance(self, z: float) -> float:
        """Distance from z to the band (0 inside)."""
        if z < self.e_min:
            return self.e_min - z
        if z > self.e_max:
            return z - self.e_max
        return 0.0


def _coords(p):
    if isinstance(p, (TorusPoint, Quasimomentum)):
        a, b = p
        return a, b
    p = np.asarray(p, dtype=float)
    return p[..., 0], p[..., 1]


def single_dispersion(p):
    """eps(p) = sum_i (1 - cos p_i); accepts a TorusPoint or an (..., 2) array."""
    p1, p2 = _coords(p)
    return (1.0 - np.cos(p1)) + (1.0 - np.cos(p2))


def pair_dispersion_xy(K: Quasimomentum, p1, p2):
    b1, b2 = K.hopping
    return 2.0 * (1.0 - b1 * np.cos(p1)) + 2.0 * (1.0 - b2 * np.cos(p2))


def pair_dispersion(K: Quasimomentum, p):
    """E_K(p) = 2 sum_i (1 - cos(K_i/2) cos p_i)."""
    p1, p2 = _coords(p)
    return pair_dispersion_xy(K, p1, p2)


def essential_band(K: Quasimomentum) -> EssentialBand:
    b1, b2 = K.hopping
    return EssentialBand(2.0 * ((1.0 - b1) + (1.0 - b2)), 2.0 * ((1.0 + b1) + (1.0 + b2)))


def potential_position(x: LatticeVector, c: CouplingParams) -> float:
    """Pair potential on the relative coordinate, supported on |x|_1 <= 2."""
    r = x.norm1
    if r == 0:
        return c.gamma
    if r == 1:
        return c.lam / 2.0
    if r == 2:
        return c.mu / 2.0
    return 0.0


def potential_support() -> list[LatticeVector]:
    """The 13 sites with |x|_1 <= 2."""
    return [LatticeVector(a, b) for a in range(-2, 3) for b in range(-2, 3) if abs(a) + abs(b) <= 2]


def potential_momentum(p, c: CouplingParams):
    """v(p) = gamma + lam sum cos p_i + mu sum cos 2p_i + 2 mu cos p1 cos p2."""
    p1, p2 = _coords(p)
    c1, c2 = np.cos(p1), np.cos(p2)
    return (c.gamma + c.lam * (c1 + c2) + c.mu * (np.cos(2 * p1) + np.cos(2 * p2))
            + 2.0 * c.mu * c1 * c2)


def hopping_coefficient(s: LatticeVector) -> float:
    """Single-particle hopping table: 2 on site, -1/2 to the four neighbours."""
    r = s.norm1
    if r == 0:
        return 2.0
    if r == 1:
        return -0.5
    return 0.0
