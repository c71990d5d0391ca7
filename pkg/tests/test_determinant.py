import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from boundstate_atlas.determinant import (
    count_bound_states,
    det2,
    det2_many,
    det2_zeros,
    det5,
    det7,
    det7_zeros,
    find_zeros,
    inertia_counts,
    ls_matrix2,
    ls_matrix7,
    weights7,
)
from boundstate_atlas.lattice import CouplingParams, EssentialBand, Quasimomentum
from boundstate_atlas.oracle import oracle_report
from boundstate_atlas.quadrature import bessel_a11, gram2

PI = math.pi
K0 = Quasimomentum()


def test_free_determinant_is_one():
    zs = np.array([-100.0, -1.0, -1e-3, 8.001, 9.0, 1e4])
    assert np.all(det2_many(0.0, 0.0, zs) == 1.0)
    assert det7(CouplingParams(), Quasimomentum(0.3, 1.0), -2.0) == 1.0


def test_det2_pure_lambda_uses_bessel_oracle():
    # with mu = 0, det2 = 1 + lam a11, and a11 has an independent Bessel representation
    for z in (-0.7, -4.0):
        assert det2(3.0, 0.0, z) == pytest.approx(1 + 3.0 * bessel_a11(z), abs=1e-12)


def test_det2_zeros_reference_point():
    rep = det2_zeros(20.0, 8.0)
    assert rep.counts == (0, 2) and rep.conclusive
    assert rep.above == pytest.approx((8.609190895699923, 14.170464170275883), abs=1e-8)


def test_det2_zeros_agree_with_antisymmetric_oracle():
    rep = det2_zeros(20.0, 8.0)
    orc = oracle_report(CouplingParams(0.0, 20.0, 8.0), K0, l=30, sector="swap-antisymmetric")
    assert orc.counts == rep.counts
    assert np.allclose(orc.eigs_above, rep.above, atol=1e-6)


def test_det7_degenerate_band_closed_form():
    K = Quasimomentum(PI, PI)
    for z in (-3.0, 2.0, 7.5):
        assert det7(CouplingParams(1.0, 0, 0), K, z) == pytest.approx(1 + 1 / (4 - z), abs=1e-12)
    rep = det7_zeros(CouplingParams(1.0, 0, 0), K)
    assert rep.below == () and rep.above == pytest.approx((5.0,), abs=1e-8)


def test_degenerate_band_double_root_is_flagged_and_counted():
    c = CouplingParams(0.0, 20.0, 8.0)
    K = Quasimomentum(PI, PI)
    rep = det7_zeros(c, K)
    assert not rep.conclusive
    assert any(abs(z - 14.0) < 1e-6 for z in rep.inconclusive)
    assert count_bound_states(c, K) == oracle_report(c, K, check_convergence=False).counts


def test_block_factorization_spot():
    c = CouplingParams(1.5, -3.0, 4.0)
    for z in (-2.5, 10.0):
        assert det7(c, K0, z) == pytest.approx(det2(c.lam, c.mu, z) * det5(c, z), rel=1e-10)


def test_ls_matrices():
    m = ls_matrix2(2.0, -1.0, -0.5)
    a = gram2(-0.5)
    assert m.matrix == pytest.approx(np.eye(2) + np.diag([2.0, -1.0]) @ a.matrix)
    assert m.det == pytest.approx(det2(2.0, -1.0, -0.5), abs=1e-13)
    c = CouplingParams(1.0, 2.0, 3.0)
    assert ls_matrix7(c, K0, -1.0).det == pytest.approx(det7(c, K0, -1.0), rel=1e-12)
    assert list(weights7(c)) == [1.0, 2.0, 2.0, 3.0, 3.0, 6.0, 6.0]


def test_find_zeros_synthetic():
    band = EssentialBand(0.0, 2.0)
    # simple zeros at -0.5 (below) and 4 (above), tends to 1 far away
    f = lambda z: (z + 0.5) * (z - 4.0) / ((z - 1.0) ** 2 + 1.0)
    rep = find_zeros(f, band)
    assert rep.below == pytest.approx((-0.5,), abs=1e-9)
    assert rep.above == pytest.approx((4.0,), abs=1e-9)
    assert rep.conclusive
    assert find_zeros(lambda z: np.ones_like(z), band).counts == (0, 0)


def test_find_zeros_flags_tangent_root():
    band = EssentialBand(0.0, 1.0)
    f = lambda z: (z - 3.0) ** 2 / ((z - 0.5) ** 2)
    rep = find_zeros(f, band)
    assert rep.counts == (0, 0)
    assert rep.inconclusive == pytest.approx((3.0,), abs=1e-6)


def test_inertia_counts_match_oracle_at_generic_k():
    c = CouplingParams(-2.0, 4.0, 12.0)
    K = Quasimomentum(PI / 2, 0.0)
    assert inertia_counts(c, K) == oracle_report(c, K, check_convergence=False).counts


def test_inertia_free_operator_has_no_states():
    assert inertia_counts(CouplingParams(), Quasimomentum(1.0, 2.0)) == (0, 0)


@settings(max_examples=25, deadline=None)
@given(st.floats(-30, 30), st.floats(-30, 30), st.floats(0.05, 40.0))
def test_det2_reflection_property(lam, mu, t):
    assert det2(lam, mu, -t) == pytest.approx(det2(-lam, -mu, 8 + t), abs=1e-10)


@settings(max_examples=20, deadline=None)
@given(st.floats(-10, 10), st.floats(-10, 10), st.floats(-10, 10), st.floats(0.2, 20.0))
def test_det7_symmetric_in_axis_swap(g, lam, mu, t):
    c = CouplingParams(g, lam, mu)
    a = det7(c, Quasimomentum(0.4, 1.3), -t)
    b = det7(c, Quasimomentum(1.3, 0.4), -t)
    assert a == pytest.approx(b, rel=1e-10, abs=1e-12)
