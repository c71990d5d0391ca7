"""Hot numeric kernels, each in a numba and a pure-numpy flavour.

The public names (``weighted_gram``, ``jacobi_eigenvalues``) dispatch on the
``BOUNDSTATE_ATLAS_NUMBA`` flag read in :mod:`boundstate_atlas._accel`.  Both
flavours stay importable so the benchmark and the tests can compare them.
"""
import numpy as np

from ._accel import USE_NUMBA, njit

# numpy path: z-values per chunk, bounds the (nz, nodes) temporary
_Z_CHUNK = 128


def _pair_products(F):
    m = F.shape[1]
    iu, ju = np.triu_indices(m)
    return F[:, iu] * F[:, ju], iu, ju


def _unpack(acc, m):
    iu, ju = np.triu_indices(m)
    out = np.empty((acc.shape[0], m, m))
    out[:, iu, ju] = acc
    out[:, ju, iu] = acc
    return out


def weighted_gram_numpy(F, wt, E, zs):
    """G[i, a, b] = sum_k wt[k] F[k, a] F[k, b] / (E[k] - zs[i]).

    Nodes with ``E[k] == zs[i]`` contribute zero (the removable band-edge node).
    """
    F = np.ascontiguousarray(F, dtype=float)
    zs = np.atleast_1d(np.asarray(zs, dtype=float))
    P, _, _ = _pair_products(F)
    acc = np.empty((zs.size, P.shape[1]))
    for start in range(0, zs.size, _Z_CHUNK):
        zc = zs[start:start + _Z_CHUNK]
        den = E[None, :] - zc[:, None]
        with np.errstate(divide="ignore"):
            inv = np.where(den == 0.0, 0.0, wt[None, :] / den)
        acc[start:start + zc.size] = inv @ P
    return _unpack(acc, F.shape[1])


@njit(cache=True)
def _weighted_gram_acc(F, wt, E, zs):
    nk, m = F.shape
    npair = m * (m + 1) // 2
    nz = zs.shape[0]
    acc = np.zeros((nz, npair))
    prod = np.empty(npair)
    for k in range(nk):
        q = 0
        for a in range(m):
            for b in range(a, m):
                prod[q] = F[k, a] * F[k, b]
                q += 1
        ek = E[k]
        wk = wt[k]
        for iz in range(nz):
            den = ek - zs[iz]
            if den == 0.0:
                continue
            s = wk / den
            for q in range(npair):
                acc[iz, q] += prod[q] * s
    return acc


def weighted_gram_numba(F, wt, E, zs):
    """Numba flavour of :func:`weighted_gram_numpy`.

    Accumulates node by node in a fixed order, so each z gets the same bits
    whatever batch it is evaluated in.
    """
    F = np.ascontiguousarray(F, dtype=float)
    zs = np.atleast_1d(np.asarray(zs, dtype=float))
    acc = _weighted_gram_acc(F, np.ascontiguousarray(wt, dtype=float),
                             np.ascontiguousarray(E, dtype=float), zs)
    return _unpack(acc, F.shape[1])


def _rotation(app, aqq, apq):
    theta = (aqq - app) / (2.0 * apq)
    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / np.sqrt(t * t + 1.0)
    return c, t * c


@njit(cache=True)
def _jacobi_numba(a, tol, max_sweeps):
    n = a.shape[0]
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += a[i, j] * a[i, j]
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += a[i, j] * a[i, j]
        if off <= tol * tol * scale:
            return np.sort(np.diag(a).copy()), sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
    return np.sort(np.diag(a).copy()), -1


def _jacobi_numpy(a, tol, max_sweeps):
    n = a.shape[0]
    scale = float(np.sum(a * a))
    for sweep in range(max_sweeps):
        off = float(np.sum(np.triu(a, 1) ** 2))
        if off <= tol * tol * scale:
            return np.sort(np.diag(a).copy()), sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                c, s = _rotation(a[p, p], a[q, q], apq)
                cp = a[:, p].copy()
                a[:, p] = c * cp - s * a[:, q]
                a[:, q] = s * cp + c * a[:, q]
                rp = a[p, :].copy()
                a[p, :] = c * rp - s * a[q, :]
                a[q, :] = s * rp + c * a[q, :]
                a[p, q] = a[q, p] = 0.0
    return np.sort(np.diag(a).copy()), -1


def jacobi_eigenvalues_numba(m, tol=1e-14, max_sweeps=60):
    vals, sweeps = _jacobi_numba(np.array(m, dtype=float, order="C"), tol, max_sweeps)
    if sweeps < 0:
        raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps")
    return vals


def jacobi_eigenvalues_numpy(m, tol=1e-14, max_sweeps=60):
    vals, sweeps = _jacobi_numpy(np.array(m, dtype=float), tol, max_sweeps)
    if sweeps < 0:
        raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps")
    return vals


if USE_NUMBA:
    weighted_gram = weighted_gram_numba
    jacobi_eigenvalues = jacobi_eigenvalues_numba
else:
    weighted_gram = weighted_gram_numpy
    jacobi_eigenvalues = jacobi_eigenvalues_numpy
