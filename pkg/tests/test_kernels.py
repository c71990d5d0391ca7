import os
import subprocess
import sys

import numpy as np
import pytest

from boundstate_atlas import kernels


def _problem(seed=0, nodes=500, m=4, nz=7):
    rng = np.random.default_rng(seed)
    F = rng.normal(size=(nodes, m))
    wt = rng.uniform(0.5, 1.0, nodes)
    E = rng.uniform(0.0, 8.0, nodes)
    E[3] = -1.0  # node sitting exactly on z = -1 is skipped
    zs = np.array([-1.0, -2.5, -0.1, 9.0, 12.0, 8.5, -30.0])[:nz]
    return F, wt, E, zs


def test_numba_and_numpy_gram_agree():
    F, wt, E, zs = _problem()
    a = kernels.weighted_gram_numba(F, wt, E, zs)
    b = kernels.weighted_gram_numpy(F, wt, E, zs)
    assert a.shape == (len(zs), 4, 4)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


def test_gram_reference_loop():
    F, wt, E, zs = _problem(1, nodes=60, m=3, nz=3)
    ref = np.zeros((3, 3, 3))
    for k, z in enumerate(zs):
        for i in range(60):
            d = E[i] - z
            if d != 0.0:
                ref[k] += wt[i] * np.outer(F[i], F[i]) / d
    assert np.allclose(kernels.weighted_gram_numpy(F, wt, E, zs), ref, atol=1e-12)


@pytest.mark.parametrize("impl", [kernels.jacobi_eigenvalues_numba, kernels.jacobi_eigenvalues_numpy])
def test_jacobi_matches_lapack(impl):
    rng = np.random.default_rng(3)
    a = rng.normal(size=(40, 40))
    a = a + a.T
    assert np.allclose(impl(a), np.linalg.eigvalsh(a), atol=1e-11)


def test_jacobi_handles_diagonal_and_degenerate():
    a = np.diag([3.0, 1.0, 1.0, -2.0])
    assert np.array_equal(kernels.jacobi_eigenvalues_numba(a), np.array([-2.0, 1.0, 1.0, 3.0]))


def test_env_flag_selects_numpy_path():
    code = ("import boundstate_atlas._accel as a, boundstate_atlas.kernels as k;"
            "print(a.USE_NUMBA, k.weighted_gram is k.weighted_gram_numpy)")
    env = dict(os.environ, BOUNDSTATE_ATLAS_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "True"]
