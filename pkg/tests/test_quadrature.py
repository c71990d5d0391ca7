import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from boundstate_atlas.lattice import Quasimomentum
from boundstate_atlas.quadrature import (
    BandError,
    EdgeConstants,
    GridSpec,
    bessel_a11,
    bessel_a11_edge,
    edge_constants,
    gram2,
    gram2_many,
    gram7,
    gram_sym5_many,
    integrate_torus,
)

E11 = (4 - math.pi) / (2 * math.pi)


def test_bessel_edge_oracle_matches_closed_form():
    assert bessel_a11_edge() == pytest.approx(E11, abs=1e-10)


@pytest.mark.parametrize("z", [-0.5, -1.0, -3.0, -12.0])
def test_quadrature_matches_bessel_oracle(z):
    assert gram2(z).a11 == pytest.approx(bessel_a11(z), abs=1e-12)


def test_bessel_reflection_above_band():
    assert bessel_a11(9.0) == pytest.approx(-bessel_a11(-1.0), abs=1e-13)


def test_edge_constants_converge():
    e = edge_constants(GridSpec(1024))
    exact = EdgeConstants.exact()
    assert e.e11 == pytest.approx(exact.e11, abs=1e-9)
    assert e.lambda_star == pytest.approx(8.0, abs=1e-6)
    assert e.kappa == pytest.approx(4.0, abs=1e-6)
    assert e.d > 0
    assert exact.mu_star == pytest.approx(e.mu_star, rel=1e-8)


@pytest.mark.parametrize("z", [-2.0, -0.01, 8.3, 15.0])
def test_pointwise_identities(z):
    a = gram2(z)
    assert a.a12 == pytest.approx((4 - z) * a.a11 - 0.5, abs=1e-12)
    assert a.a22 == pytest.approx((4 - z) * a.a12, abs=1e-12)


def test_integrate_torus_trig_moments():
    assert integrate_torus(lambda a, b: np.cos(a) ** 2, GridSpec(32)) == pytest.approx(2 * math.pi ** 2)
    assert integrate_torus(lambda a, b: np.cos(3 * a) * np.cos(b), GridSpec(32)) == pytest.approx(0.0, abs=1e-12)


def test_integrate_torus_rejects_singular():
    with pytest.raises(ValueError):
        with np.errstate(divide="ignore"):
            integrate_torus(lambda a, b: 1.0 / (1 - np.cos(a)), GridSpec(16))


def test_gram7_matches_full_grid_sum():
    # quarter-torus folding must agree with a plain full-grid sum
    K = Quasimomentum(0.7, -1.9)
    z = -0.8
    grid = GridSpec(64)
    b1, b2 = K.hopping
    kern = [lambda a, b: np.ones_like(a), lambda a, b: np.cos(a), lambda a, b: np.cos(b),
            lambda a, b: np.cos(2 * a), lambda a, b: np.cos(2 * b),
            lambda a, b: np.cos(a) * np.cos(b), lambda a, b: np.sin(a) * np.sin(b)]
    g = gram7(K, z, grid).g
    for m in range(7):
        for n in range(7):
            ref = integrate_torus(lambda a, b: kern[m](a, b) * kern[n](a, b)
                                  / (4 - 2 * b1 * np.cos(a) - 2 * b2 * np.cos(b) - z), grid)
            assert g[m, n] == pytest.approx(ref / (4 * math.pi ** 2), abs=1e-13)


def test_gram7_degenerate_band_closed_form():
    g = gram7(Quasimomentum(math.pi, math.pi), 5.0).g
    assert g[0, 0] == pytest.approx(-1.0, abs=1e-14)
    assert g[1, 1] == pytest.approx(-0.5, abs=1e-14)


def test_antisymmetric_combination_of_gram7():
    z = -0.4
    g = gram7(Quasimomentum(), z).g
    # phi1 = e1 - e2, a11 carries 1/(8 pi^2) = half of the gram7 normalisation
    combo = 0.5 * (g[1, 1] - 2 * g[1, 2] + g[2, 2])
    assert combo == pytest.approx(gram2(z).a11, abs=1e-14)


def test_sym5_first_entry_equals_gram7():
    z = 9.5
    assert gram_sym5_many([z])[0][0, 0] == pytest.approx(gram7(Quasimomentum(), z).g[0, 0], abs=1e-14)


def test_band_checks():
    with pytest.raises(BandError):
        gram2(3.0)
    with pytest.raises(BandError):
        gram7(Quasimomentum(), 0.0)
    gram2(0.0)  # edge allowed for the antisymmetric sector


def test_grid_validation():
    for bad in (15, 8, 33):
        with pytest.raises(ValueError):
            GridSpec(bad)
    assert GridSpec(16).refined().n == 32


@settings(max_examples=30, deadline=None)
@given(st.floats(0.01, 30.0))
def test_reflection_property(t):
    lo, hi = gram2_many([-t, 8 + t])
    assert lo[0, 0] == pytest.approx(-hi[0, 0], abs=1e-13)
    assert lo[0, 1] == pytest.approx(hi[0, 1], abs=1e-13)
    assert lo[1, 1] == pytest.approx(-hi[1, 1], abs=1e-13)


@settings(max_examples=30, deadline=None)
@given(st.floats(-40.0, -0.05), st.floats(0.01, 5.0))
def test_a11_increasing_below(z, dz):
    a, b = gram2_many([z - dz, z])
    assert 0 < a[0, 0] < b[0, 0]
