import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from boundstate_atlas.lattice import (
    CouplingParams,
    EssentialBand,
    LatticeVector,
    Quasimomentum,
    TorusPoint,
    essential_band,
    hopping_coefficient,
    pair_dispersion,
    potential_momentum,
    potential_position,
    potential_support,
    reduce_angle,
    single_dispersion,
)

angles = st.floats(-20.0, 20.0, allow_nan=False)
couplings = st.floats(-50.0, 50.0, allow_nan=False)


@pytest.mark.parametrize("K, band", [((0.0, 0.0), (0.0, 8.0)), ((math.pi, math.pi), (4.0, 4.0)),
                                     ((math.pi, 0.0), (2.0, 6.0))])
def test_band_special_points(K, band):
    b = essential_band(Quasimomentum(*K))
    assert (b.e_min, b.e_max) == band


def test_pi_band_is_exactly_degenerate():
    assert essential_band(Quasimomentum(math.pi, -math.pi)).degenerate


def test_potential_fourier_matches_position_table():
    c = CouplingParams(1.3, -0.7, 2.1)
    rng = np.random.default_rng(0)
    for p in rng.uniform(-math.pi, math.pi, (20, 2)):
        direct = sum(potential_position(x, c) * math.cos(p[0] * x.x1 + p[1] * x.x2)
                     for x in potential_support())
        assert potential_momentum(p, c) == pytest.approx(direct, abs=1e-12)


def test_support_and_values():
    sup = potential_support()
    assert len(sup) == 13
    c = CouplingParams(3.0, 4.0, 6.0)
    assert potential_position(LatticeVector(0, 0), c) == 3.0
    assert potential_position(LatticeVector(0, -1), c) == 2.0
    assert potential_position(LatticeVector(1, 1), c) == 3.0
    assert potential_position(LatticeVector(-2, 0), c) == 3.0
    assert potential_position(LatticeVector(2, 1), c) == 0.0


def test_hopping_table_reproduces_single_dispersion():
    p = np.array([0.3, -1.1])
    direct = sum(hopping_coefficient(LatticeVector(a, b)) * math.cos(p[0] * a + p[1] * b)
                 for a in range(-1, 2) for b in range(-1, 2))
    assert single_dispersion(p) == pytest.approx(direct, abs=1e-14)


def test_validation():
    with pytest.raises(ValueError):
        CouplingParams(math.nan, 0, 0)
    with pytest.raises(ValueError):
        LatticeVector(0.5, 0)
    with pytest.raises(ValueError):
        EssentialBand(1.0, 0.0)


def test_band_distance():
    b = EssentialBand(2.0, 6.0)
    assert b.distance(1.0) == 1.0 and b.distance(7.5) == 1.5 and b.distance(3.0) == 0.0
    assert b.contains(2.0) and not b.contains(6.01)


@given(angles, angles, angles, angles)
def test_dispersion_inside_band(k1, k2, p1, p2):
    K = Quasimomentum(k1, k2)
    b = essential_band(K)
    e = pair_dispersion(K, TorusPoint(p1, p2))
    assert b.e_min - 1e-12 <= e <= b.e_max + 1e-12


@given(angles)
def test_reduce_angle_range_and_period(x):
    r = reduce_angle(x)
    assert -math.pi <= r < math.pi
    assert math.cos(r) == pytest.approx(math.cos(x), abs=1e-12)


@given(angles, angles)
def test_band_depends_on_k_only_through_half_cosines(k1, k2):
    a = essential_band(Quasimomentum(k1, k2))
    b = essential_band(Quasimomentum(-k1, k2 + 4 * math.pi))
    assert a.e_min == pytest.approx(b.e_min, abs=1e-12) and a.e_max == pytest.approx(b.e_max, abs=1e-12)


@given(couplings, couplings, couplings)
def test_potential_at_origin_is_sum_of_table(g, lam, mu):
    c = CouplingParams(g, lam, mu)
    total = sum(potential_position(x, c) for x in potential_support())
    assert potential_momentum(np.zeros(2), c) == pytest.approx(total, abs=1e-9 * (1 + abs(total)))
