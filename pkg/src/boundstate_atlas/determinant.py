"""Fredholm determinants of the finite-rank fiber problem and their zeros.

At K = 0 the swap-antisymmetric sector reduces to the 2x2 determinant

    det2(lam, mu, z) = (1 + lam a11)(1 + mu a22) - lam mu a12^2,

and for general K the full even problem is the 7x7 determinant
det(I + W G(K, z)) with weights W = diag(gamma, lam, lam, mu, mu, 2mu, 2mu).
Zeros off the essential band are the bound-state energies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize

from .lattice import CouplingParams, EssentialBand, Quasimomentum, essential_band
from .quadrature import (
    BAND0,
    DEFAULT_GRID,
    GridSpec,
    gram2_many,
    gram7_many,
    gram_sym5_many,
)

K0 = Quasimomentum(0.0, 0.0)

SCAN_POINTS = 2000
SETTLE = 1e-4          # |det - 1| below this marks the far end of a scan
XTOL = 1e-10           # bisection bracket width
SPLIT_TOL = 1e-8       # zeros closer than this are flagged as a possible double root
REFINE_FACTOR = 10
TANGENT_RTOL = 1e-4    # vertex depth, relative to neighbours, that counts as touching zero
# det2 integrands vanish at the band-edge minimiser, so it can be scanned much
# closer to the edge than det7, whose 1/(E - z) peak needs ~ n sqrt(d) >> 1
DET2_GAP = 1e-7


def weights7(c: CouplingParams) -> np.ndarray:
    return np.array([c.gamma, c.lam, c.lam, c.mu, c.mu, 2 * c.mu, 2 * c.mu])


def weights5(c: CouplingParams) -> np.ndarray:
    """Swap-symmetric block weights for the kernel order of gram_sym5_many."""
    return np.array([c.gamma, c.lam / 2, c.mu / 2, 2 * c.mu, 2 * c.mu])


def default_gap(grid: GridSpec) -> float:
    """Closest approach of a det7 scan to a band edge for this grid.

    The trapezoidal error for 1/(E - z) decays like exp(-n sqrt(d)); keeping
    n sqrt(d) >= 24 holds it near 1e-10.
    """
    return (24.0 / grid.n) ** 2


@dataclass(frozen=True)
class LSMatrix2:
    """I - B for the antisymmetric K = 0 sector at one z."""

    lam: float
    mu: float
    z: float
    a: np.ndarray = field(repr=False)

    @property
    def matrix(self) -> np.ndarray:
        a = self.a
        return np.array([[1 + self.lam * a[0, 0], self.lam * a[0, 1]],
                         [self.mu * a[0, 1], 1 + self.mu * a[1, 1]]])

    @property
    def det(self) -> float:
        a = self.a
        return float((1 + self.lam * a[0, 0]) * (1 + self.mu * a[1, 1])
                     - self.lam * self.mu * a[0, 1] ** 2)


@dataclass(frozen=True)
class LSMatrix7:
    c: CouplingParams
    K: Quasimomentum
    z: float
    g: np.ndarray = field(repr=False)

    @property
    def matrix(self) -> np.ndarray:
        return np.eye(7) + weights7(self.c)[:, None] * self.g

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))


def ls_matrix2(lam: float, mu: float, z: float, grid: GridSpec = DEFAULT_GRID) -> LSMatrix2:
    return LSMatrix2(float(lam), float(mu), float(z), gram2_many([z], grid)[0])


def ls_matrix7(c: CouplingParams, K: Quasimomentum, z: float,
               grid: GridSpec = DEFAULT_GRID) -> LSMatrix7:
    return LSMatrix7(c, K, float(z), gram7_many(K, [z], grid)[0])


def det2_from_gram(lam, mu, a):
    """Vectorised det2 from a stack of a-matrices, shape (..., 2, 2)."""
    a11, a12, a22 = a[..., 0, 0], a[..., 0, 1], a[..., 1, 1]
    return (1 + lam * a11) * (1 + mu * a22) - lam * mu * a12 * a12


def det2_many(lam: float, mu: float, zs, grid: GridSpec = DEFAULT_GRID) -> np.ndarray:
    zs = np.asarray(zs, dtype=float)
    return det2_from_gram(lam, mu, gram2_many(zs.ravel(), grid)).reshape(zs.shape)


def det2(lam: float, mu: float, z: float, grid: GridSpec = DEFAULT_GRID) -> float:
    """Antisymmetric-sector determinant at K = 0; z outside [0, 8] (edges allowed)."""
    return float(det2_many(lam, mu, np.array([z]), grid)[0])


def _det_weighted(w, g):
    m = g.shape[-1]
    return np.linalg.det(np.eye(m) + w[:, None] * g)


def det7_many(c: CouplingParams, K: Quasimomentum, zs,
              grid: GridSpec = DEFAULT_GRID) -> np.ndarray:
    zs = np.asarray(zs, dtype=float)
    return _det_weighted(weights7(c), gram7_many(K, zs.ravel(), grid)).reshape(zs.shape)


def det7(c: CouplingParams, K: Quasimomentum, z: float, grid: GridSpec = DEFAULT_GRID) -> float:
    """det(I + W G(K, z)) for the full even fiber problem."""
    return float(det7_many(c, K, np.array([z]), grid)[0])


def det5(c: CouplingParams, z: float, grid: GridSpec = DEFAULT_GRID) -> float:
    """Swap-symmetric block determinant at K = 0."""
    return float(_det_weighted(weights5(c), gram_sym5_many([z], grid))[0])


@dataclass(frozen=True)
class ZeroReport:
    """Sign-change zeros of a determinant on each side of the band.

    ``below_tol``/``above_tol`` hold the final bisection bracket width for
    each zero; ``inconclusive`` lists places where a double root cannot be
    excluded (near-tangent minima or two zeros closer than SPLIT_TOL).
    Nothing closer than ``gap`` to a band edge is scanned.
    """

    below: tuple[float, ...] = ()
    above: tuple[float, ...] = ()
    below_tol: tuple[float, ...] = ()
    above_tol: tuple[float, ...] = ()
    inconclusive: tuple[float, ...] = ()
    gap: float = 0.0

    @property
    def counts(self) -> tuple[int, int]:
        return len(self.below), len(self.above)

    @property
    def conclusive(self) -> bool:
        return not self.inconclusive

    def as_dict(self) -> dict:
        return {
            "below": list(self.below),
            "above": list(self.above),
            "below_tol": list(self.below_tol),
            "above_tol": list(self.above_tol),
            "inconclusive": list(self.inconclusive),
            "gap": self.gap,
        }


def _parabola_vertex(z, f):
    """Vertex (z, f) of the parabola through three points."""
    d1 = (f[1] - f[0]) / (z[1] - z[0])
    d2 = (f[2] - f[1]) / (z[2] - z[1])
    curv = (d2 - d1) / (z[2] - z[0])
    if curv == 0.0:
        return float(z[1]), float(f[1])
    zv = 0.5 * (z[0] + z[1]) - d1 / (2.0 * curv)
    fv = f[0] + d1 * (zv - z[0]) + curv * (zv - z[0]) * (zv - z[1])
    return float(zv), float(fv)


_REACH_STEPS = 2.0 ** np.arange(4, 61)


def _scan_reach(det, edge, direction, settle):
    # all candidate distances in one call, so the Gram table is shared between couplings
    vals = det(edge + direction * _REACH_STEPS)
    ok = np.nonzero(np.abs(vals - 1.0) < settle)[0]
    if ok.size == 0:
        raise RuntimeError("determinant does not settle to 1 at large |z|")
    return float(_REACH_STEPS[ok[0]])


def _scan_side(det, edge, direction, gap, points, settle, refine, xtol):
    reach = _scan_reach(det, edge, direction, settle)
    dist = np.geomspace(gap, reach, points)
    z = edge + direction * dist
    if direction < 0:
        z = z[::-1]
    f = det(z)

    # one level of 10x refinement around interior minima of |f| that show no
    # sign change, where a close pair of zeros could hide between nodes
    same = (np.sign(f[:-2]) == np.sign(f[1:-1])) & (np.sign(f[1:-1]) == np.sign(f[2:]))
    dip = (np.abs(f[1:-1]) < np.abs(f[:-2])) & (np.abs(f[1:-1]) < np.abs(f[2:]))
    idx = np.nonzero(same & dip)[0] + 1
    if idx.size:
        extra = np.concatenate([np.linspace(z[i - 1], z[i + 1], 2 * REFINE_FACTOR + 1)[1:-1]
                                for i in idx])
        extra = np.setdiff1d(extra, z)
        z = np.concatenate([z, extra])
        f = np.concatenate([f, det(extra)])
        order = np.argsort(z)
        z, f = z[order], f[order]

    zeros, tols, flags = [], [], []
    exact = np.nonzero(f == 0.0)[0]
    for i in exact:
        zeros.append(float(z[i]))
        tols.append(0.0)
    s = np.sign(f)
    brackets = np.nonzero(s[:-1] * s[1:] < 0)[0]
    scalar = lambda x: float(det(np.array([x]))[0])
    for i in brackets:
        lo, hi = float(z[i]), float(z[i + 1])
        if refine:
            root = optimize.bisect(scalar, lo, hi, xtol=xtol, maxiter=200)
            zeros.append(float(root))
            tols.append(xtol)
        else:
            zeros.append(0.5 * (lo + hi))
            tols.append(hi - lo)

    # tangential minima that survived refinement without a sign change
    same = (np.sign(f[:-2]) == np.sign(f[1:-1])) & (np.sign(f[1:-1]) == np.sign(f[2:]))
    dip = (np.abs(f[1:-1]) < np.abs(f[:-2])) & (np.abs(f[1:-1]) < np.abs(f[2:]))
    for i in np.nonzero(same & dip)[0] + 1:
        zv, fv = _parabola_vertex(z[i - 1:i + 2], f[i - 1:i + 2])
        spread = max(abs(f[i - 1]), abs(f[i + 1]))
        if np.sign(fv) != np.sign(f[i]) or abs(fv) <= max(1e-9, TANGENT_RTOL * spread):
            if refine:
                # locate the true extremum of the signed function; if it crosses
                # zero the dip holds two simple zeros, one on each side of it
                sgn = float(np.sign(f[i]))
                lo, hi = float(z[i - 1]), float(z[i + 1])
                res = optimize.minimize_scalar(lambda x: sgn * scalar(x), method="bounded",
                                               bounds=(lo, hi), options={"xatol": xtol})
                zv = float(res.x)
                if sgn * res.fun < 0.0:
                    for a, b in ((lo, zv), (zv, hi)):
                        zeros.append(float(optimize.bisect(scalar, a, b, xtol=xtol, maxiter=200)))
                        tols.append(xtol)
                    continue
            flags.append(zv)

    order = np.argsort(zeros)
    zeros = [zeros[k] for k in order]
    tols = [tols[k] for k in order]
    for a, b in zip(zeros, zeros[1:]):
        if b - a < SPLIT_TOL:
            flags.append(0.5 * (a + b))
    return zeros, tols, flags


def find_zeros(det: Callable[[np.ndarray], np.ndarray], band: EssentialBand, *,
               gap: float = DET2_GAP, points: int = SCAN_POINTS, settle: float = SETTLE,
               refine: bool = True, xtol: float = XTOL) -> ZeroReport:
    """Locate sign-change zeros of ``det`` below and above ``band``.

    ``det`` maps an array of z to an array of determinant values and must
    tend to 1 at large |z|. Each side is scanned on ``points`` nodes spaced
    geometrically in distance from the edge, from ``gap`` out to the first
    power-of-two distance where |det - 1| < ``settle``; brackets are refined
    by bisection to width ``xtol`` unless ``refine`` is False.
    """
    lo_z, lo_t, lo_f = _scan_side(det, band.e_min, -1.0, gap, points, settle, refine, xtol)
    hi_z, hi_t, hi_f = _scan_side(det, band.e_max, +1.0, gap, points, settle, refine, xtol)
    return ZeroReport(tuple(lo_z), tuple(hi_z), tuple(lo_t), tuple(hi_t),
                      tuple(sorted(lo_f + hi_f)), float(gap))


def det2_zeros(lam: float, mu: float, grid: GridSpec = DEFAULT_GRID, **kw) -> ZeroReport:
    kw.setdefault("gap", DET2_GAP)
    return find_zeros(lambda zs: det2_many(lam, mu, zs, grid), BAND0, **kw)


def det7_zeros(c: CouplingParams, K: Quasimomentum, grid: GridSpec = DEFAULT_GRID,
               **kw) -> ZeroReport:
    kw.setdefault("gap", default_gap(grid))
    return find_zeros(lambda zs: det7_many(c, K, zs, grid), essential_band(K), **kw)


def _negative_inertia(g, w, sign):
    """Number of negative eigenvalues of I + sign * L^T W L with g = sign * L L^T."""
    L = np.linalg.cholesky(sign * g)
    m = np.eye(len(w)) + sign * (L.T * w) @ L
    return int(np.sum(np.linalg.eigvalsh(0.5 * (m + m.T)) < 0.0))


def inertia_counts(c: CouplingParams, K: Quasimomentum, grid: GridSpec = DEFAULT_GRID,
                   gap: float | None = None) -> tuple[int, int]:
    """Eigenvalues of H(K) below e_min - gap and above e_max + gap, with multiplicity.

    For z below the band G(z) is positive definite and the number of
    eigenvalues below z equals the number of negative eigenvalues of
    I + G^{1/2} W G^{1/2} (Sylvester inertia of the Birman-Schwinger
    factorisation); above the band the same holds with G -> -G, W -> -W.
    """
    band = essential_band(K)
    gap = default_gap(grid) if gap is None else gap
    w = weights7(c)
    g_lo, g_hi = gram7_many(K, [band.e_min - gap, band.e_max + gap], grid)
    return _negative_inertia(g_lo, w, 1.0), _negative_inertia(g_hi, w, -1.0)


def count_bound_states(c: CouplingParams, K: Quasimomentum,
                       grid: GridSpec = DEFAULT_GRID, gap: float | None = None) -> tuple[int, int]:
    """(n_minus, n_plus): bound states below and above the essential band.

    Counted with multiplicity by inertia, which also sees the even-multiplicity
    zeros of det7 that occur on degenerate bands. Use :func:`det7_zeros` for
    their locations.
    """
    return inertia_counts(c, K, grid, gap)
