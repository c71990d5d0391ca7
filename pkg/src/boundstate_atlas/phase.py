"""The (lam, mu) coupling plane: threshold polynomials, hyperbolas, regions.

C+(lam, mu) is the limit of det2 at the upper band edge, C-(lam, mu) the
limit at the lower edge.  Both follow from the edge constants alone:

    C+(lam, mu) = (1 - lam e11)(1 - mu e22) - lam mu e12^2,
    C-(lam, mu) = C+(-lam, -mu).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .quadrature import EdgeConstants

EPS_BOUNDARY = 1e-6


class Side(enum.IntEnum):
    PLUS = 1
    MINUS = -1

    @classmethod
    def parse(cls, s) -> "Side":
        if isinstance(s, Side):
            return s
        key = str(s).strip().lower()
        if key in ("plus", "+", "above", "1", "+1"):
            return cls.PLUS
        if key in ("minus", "-", "below", "-1"):
            return cls.MINUS
        raise ValueError(f"unknown side {s!r}")


BOUNDARY = "B"


def c_plus(lam: float, mu: float, e: EdgeConstants) -> float:
    return (1.0 - lam * e.e11) * (1.0 - mu * e.e22) - lam * mu * e.e12 ** 2


def c_minus(lam: float, mu: float, e: EdgeConstants) -> float:
    return c_plus(-lam, -mu, e)


def threshold(lam: float, mu: float, e: EdgeConstants, side) -> float:
    return c_plus(lam, mu, e) if Side.parse(side) is Side.PLUS else c_minus(lam, mu, e)


@dataclass(frozen=True)
class PhaseCurve:
    """Branch pair of the hyperbola (lam - s lambda_star)(mu - s mu_star) = kappa, s = +-1."""

    mu_star: float
    lambda_star: float
    kappa: float
    side: Side

    @classmethod
    def from_edge(cls, e: EdgeConstants, side) -> "PhaseCurve":
        return cls(e.mu_star, e.lambda_star, e.kappa, Side.parse(side))

    def __call__(self, mu: float) -> float | None:
        s = int(self.side)
        if mu == s * self.mu_star:
            return None
        return self.kappa / (mu - s * self.mu_star) + s * self.lambda_star

    def residual(self, lam: float, mu: float) -> float:
        s = int(self.side)
        return (lam - s * self.lambda_star) * (mu - s * self.mu_star) - self.kappa


def lambda_curve(mu: float, side, e: EdgeConstants) -> float | None:
    """lam on the C^side = 0 curve at this mu; None on the vertical asymptote."""
    return PhaseCurve.from_edge(e, side)(mu)


@dataclass(frozen=True)
class RegionLabel:
    """Bound-state counts (below, above) the band, or BOUNDARY on a threshold curve."""

    k_minus: int | str
    k_plus: int | str

    @property
    def on_boundary(self) -> bool:
        return self.k_minus == BOUNDARY or self.k_plus == BOUNDARY

    def __str__(self):
        return f"G{self.k_minus}{self.k_plus}"


def classify(lam: float, mu: float, e: EdgeConstants, eps_b: float = EPS_BOUNDARY) -> RegionLabel:
    cp = c_plus(lam, mu, e)
    cm = c_minus(lam, mu, e)
    if abs(cp) <= eps_b:
        kp = BOUNDARY
    elif cp < 0:
        kp = 1
    else:
        kp = 2 if mu > e.mu_star else 0
    if abs(cm) <= eps_b:
        km = BOUNDARY
    elif cm < 0:
        km = 1
    else:
        km = 2 if mu < -e.mu_star else 0
    return RegionLabel(km, kp)


@dataclass(frozen=True)
class Prediction:
    """Exact antisymmetric-sector counts at K = 0 and lower bounds for all K."""

    alpha: int
    beta: int

    @property
    def exact_antisymmetric(self) -> tuple[int, int]:
        return self.alpha, self.beta

    @property
    def lower_bound(self) -> tuple[int, int]:
        return self.alpha, self.beta

    def admits(self, n_minus: int, n_plus: int) -> bool:
        """True when full-operator counts respect the lower bounds."""
        return n_minus >= self.alpha and n_plus >= self.beta


def predicted_counts(label: RegionLabel) -> Prediction | None:
    """None for boundary points: no prediction is made on a threshold curve."""
    if label.on_boundary:
        return None
    return Prediction(int(label.k_minus), int(label.k_plus))
