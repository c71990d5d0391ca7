"""Truncated-lattice ground truth for the fiber Hamiltonian.

In the relative coordinate x the fiber operator acting on even functions
(psi(-x) = psi(x)) is

    (H psi)(x) = (4 + v(x)) psi(x) - sum_i cos(K_i/2) [psi(x + e_i) + psi(x - e_i)],

with v the pair potential.  The box max(|x1|, |x2|) <= l with Dirichlet
walls is a compression of H, so every eigenvalue of the truncated matrix
outside the essential band comes from the potential.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from . import kernels
from .lattice import CouplingParams, EssentialBand, Quasimomentum, essential_band

SECTORS = ("full-even", "swap-symmetric", "swap-antisymmetric")
DELTA = 1e-4
CONVERGENCE_TOL = 1e-6
BOX_STEP = 10
EDGE_EPS = 1e-12


@dataclass(frozen=True)
class BoxSpec:
    l: int = 30
    sector: str = "full-even"

    def __post_init__(self):
        if int(self.l) != self.l or self.l < 10:
            raise ValueError(f"box half-width must be an integer >= 10, got {self.l}")
        if self.sector not in SECTORS:
            raise ValueError(f"sector must be one of {SECTORS}, got {self.sector!r}")
        object.__setattr__(self, "l", int(self.l))

    def grown(self, step: int = BOX_STEP) -> "BoxSpec":
        return BoxSpec(self.l + step, self.sector)


def _group(sector: str):
    # (matrix acting on (x1, x2), character) pairs
    neg = [((1, 0, 0, 1), 1.0), ((-1, 0, 0, -1), 1.0)]
    if sector == "full-even":
        return neg
    chi = 1.0 if sector == "swap-symmetric" else -1.0
    return neg + [((0, 1, 1, 0), chi), ((0, -1, -1, 0), chi)]


def _hamiltonian(c: CouplingParams, K: Quasimomentum, l: int) -> sparse.csr_matrix:
    side = 2 * l + 1
    x1, x2 = np.meshgrid(np.arange(-l, l + 1), np.arange(-l, l + 1), indexing="ij")
    x1, x2 = x1.ravel(), x2.ravel()
    r = np.abs(x1) + np.abs(x2)
    pot = np.select([r == 0, r == 1, r == 2], [c.gamma, c.lam / 2, c.mu / 2], 0.0)
    rows, cols, vals = [np.arange(side * side)], [np.arange(side * side)], [4.0 + pot]
    idx = np.arange(side * side).reshape(side, side)
    b1, b2 = K.hopping
    if b1 != 0.0:
        a, b = idx[:-1, :].ravel(), idx[1:, :].ravel()
        rows += [a, b]
        cols += [b, a]
        vals += [np.full(a.size, -b1)] * 2
    if b2 != 0.0:
        a, b = idx[:, :-1].ravel(), idx[:, 1:].ravel()
        rows += [a, b]
        cols += [b, a]
        vals += [np.full(a.size, -b2)] * 2
    n = side * side
    return sparse.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                             shape=(n, n))


def symmetry_basis(box: BoxSpec) -> sparse.csc_matrix:
    """Orthonormal columns spanning the requested symmetry sector of the box."""
    l = box.l
    side = 2 * l + 1
    x1, x2 = np.meshgrid(np.arange(-l, l + 1), np.arange(-l, l + 1), indexing="ij")
    x1, x2 = x1.ravel(), x2.ravel()
    group = _group(box.sector)
    images = np.stack([(a * x1 + b * x2 + l) * side + (cc * x1 + d * x2 + l)
                       for (a, b, cc, d), _ in group])
    own = images[0]
    reps = np.nonzero(own == images.min(axis=0))[0]
    rows = images[:, reps].ravel()
    cols = np.tile(np.arange(reps.size), len(group))
    vals = np.repeat([chi for _, chi in group], reps.size)
    P = sparse.csc_matrix((vals, (rows, cols)), shape=(side * side, reps.size))
    P.sum_duplicates()
    norms = np.sqrt(np.asarray(P.multiply(P).sum(axis=0)).ravel())
    keep = np.nonzero(norms > 0.5)[0]
    P = P[:, keep] @ sparse.diags(1.0 / norms[keep])
    return P.tocsc()


def _check_sector(K: Quasimomentum, sector: str):
    if sector != "full-even":
        b1, b2 = K.hopping
        if b1 != b2:
            raise ValueError(f"sector {sector!r} needs cos(K1/2) == cos(K2/2); got K = {tuple(K)}")


def build_matrix(c: CouplingParams, K: Quasimomentum, box: BoxSpec) -> np.ndarray:
    """Dense real-symmetric truncated fiber Hamiltonian in the symmetry-adapted basis.

    The even basis pairs {x, -x} with weight 1/sqrt(2) (x != 0); the swap
    sectors further combine x with (x2, x1) using the sector's parity.
    """
    _check_sector(K, box.sector)
    H = _hamiltonian(c, K, box.l)
    P = symmetry_basis(box)
    m = (P.T @ H @ P).toarray()
    return 0.5 * (m + m.T)


def eigensolve(m, method: str = "lapack") -> np.ndarray:
    """All eigenvalues of a real symmetric matrix, ascending.

    ``method="jacobi"`` runs the cyclic Jacobi rotation kernel (fine for a few
    hundred rows); the default uses LAPACK's symmetric tridiagonal route.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if not np.allclose(m, m.T, rtol=0.0, atol=1e-12 * scale):
        raise ValueError("matrix is not symmetric")
    if method == "lapack":
        return np.linalg.eigvalsh(m)
    if method == "jacobi":
        return kernels.jacobi_eigenvalues(0.5 * (m + m.T))
    raise ValueError(f"unknown eigensolver {method!r}")


@dataclass(frozen=True)
class OracleReport:
    eigs_below: tuple[float, ...]
    eigs_above: tuple[float, ...]
    indeterminate: tuple[float, ...]
    convergence_delta: float
    converged: bool | None
    delta: float

    @property
    def n_below(self) -> int:
        return len(self.eigs_below)

    @property
    def n_above(self) -> int:
        return len(self.eigs_above)

    @property
    def counts(self) -> tuple[int, int]:
        return self.n_below, self.n_above

    def as_dict(self) -> dict:
        return {
            "eigs_below": list(self.eigs_below),
            "eigs_above": list(self.eigs_above),
            "n_below": self.n_below,
            "n_above": self.n_above,
            "indeterminate": list(self.indeterminate),
            "convergence_delta": self.convergence_delta,
            "converged": self.converged,
            "delta": self.delta,
        }


def _split(eigs, band: EssentialBand, delta: float):
    eigs = np.sort(np.asarray(eigs, dtype=float))
    # rounding noise on a degenerate or touched edge is not a bound state
    eps = EDGE_EPS * max(1.0, abs(band.e_max))
    eigs = eigs[(eigs < band.e_min - eps) | (eigs > band.e_max + eps)]
    below = eigs[eigs < band.e_min - delta]
    above = eigs[eigs > band.e_max + delta]
    near = eigs[((eigs >= band.e_min - delta) & (eigs < band.e_min))
                | ((eigs > band.e_max) & (eigs <= band.e_max + delta))]
    return below, above, near


def count_outside(eigs, band: EssentialBand, delta: float = DELTA, eigs_next=None,
                  tol: float = CONVERGENCE_TOL) -> OracleReport:
    """Count eigenvalues further than ``delta`` outside the band.

    ``eigs_next`` (the spectrum of the box grown by BOX_STEP) enables the
    convergence check: the report is converged when both boxes give the same
    counts and no outside eigenvalue moves by more than ``tol``.
    Eigenvalues within ``delta`` of an edge are reported as indeterminate.
    """
    below, above, near = _split(eigs, band, delta)
    if eigs_next is None:
        return OracleReport(tuple(below.tolist()), tuple(above.tolist()), tuple(near.tolist()),
                            math.nan, None, delta)
    nb, na, _ = _split(eigs_next, band, delta)
    if nb.size != below.size or na.size != above.size:
        move = math.inf
    else:
        moves = np.concatenate([np.abs(nb - below), np.abs(na - above), [0.0]])
        move = float(moves.max())
    return OracleReport(tuple(below.tolist()), tuple(above.tolist()), tuple(near.tolist()),
                        move, bool(move <= tol), delta)


def box_spectrum(c: CouplingParams, K: Quasimomentum, box: BoxSpec, method: str = "lapack") -> np.ndarray:
    return eigensolve(build_matrix(c, K, box), method)


def oracle_report(c: CouplingParams, K: Quasimomentum, l: int = 30, sector: str = "full-even",
                  delta: float = DELTA, check_convergence: bool = True) -> OracleReport:
    """Bound-state counts from the box of half-width l, checked against l + 10."""
    box = BoxSpec(l, sector)
    band = essential_band(K)
    eigs = box_spectrum(c, K, box)
    nxt = box_spectrum(c, K, box.grown()) if check_convergence else None
    return count_outside(eigs, band, delta, nxt)


