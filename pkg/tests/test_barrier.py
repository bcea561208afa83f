"""Closed-form barrier quantities: values, limits, seams, and identities."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tunneltime import (
    BarrierSpec,
    evanescent_params,
    opaque_limit_time,
    phase_derivative,
    phase_time,
    plateau_fraction,
    transmission_log_derivative,
    transmission_modulus,
    transmission_phase,
)

wa_strategy = st.floats(min_value=0.6, max_value=25.0)
frac_strategy = st.floats(min_value=0.01, max_value=0.999)
L_strategy = st.floats(min_value=0.0, max_value=4.0)
m_strategy = st.floats(min_value=0.25, max_value=4.0)


def central_diff(f, k, h):
    return (f(k + h) - f(k - h)) / (2.0 * h)


# ---------------------------------------------------------------------------
# specs and evanescent parameters
# ---------------------------------------------------------------------------


def test_barrier_spec_validation():
    with pytest.raises(ValueError):
        BarrierSpec(w=0.0, L=1.0)
    with pytest.raises(ValueError):
        BarrierSpec(w=2.0, L=-0.1)
    with pytest.raises(ValueError):
        BarrierSpec(w=2.0, L=1.0, m=0.0)
    with pytest.raises(ValueError):
        BarrierSpec(w=math.inf, L=1.0)


def test_barrier_height():
    b = BarrierSpec(w=4.0, L=0.5, m=2.0)
    assert b.v0 == pytest.approx(4.0)  # w^2 / (2 m)


def test_evanescent_at_zero_k():
    ep = evanescent_params(0.0, BarrierSpec(w=4.0, L=0.5))
    assert ep.kappa == 4.0
    assert ep.alpha == 2.0


def test_evanescent_at_band_edge():
    for L in (0.0, 0.5, 7.0):
        ep = evanescent_params(4.0, BarrierSpec(w=4.0, L=L))
        assert ep.kappa == 0.0
        assert ep.alpha == 0.0


def test_evanescent_generic_value():
    # sqrt(16 - 1.1777^2) and its product with L, by direct arithmetic
    ep = evanescent_params(1.1777, BarrierSpec(w=4.0, L=0.05))
    assert ep.kappa == pytest.approx(3.82269835456579, rel=1e-12)
    assert ep.alpha == pytest.approx(0.1911349177282895, rel=1e-12)


def test_evanescent_domain_errors():
    b = BarrierSpec(w=4.0, L=0.5)
    with pytest.raises(ValueError):
        evanescent_params(-0.1, b)
    with pytest.raises(ValueError):
        evanescent_params(4.1, b)


# ---------------------------------------------------------------------------
# transmission modulus
# ---------------------------------------------------------------------------


def test_modulus_is_one_without_barrier():
    b = BarrierSpec(w=4.0, L=0.0)
    for k in (0.3, 1.0, 2.5, 4.0):
        assert transmission_modulus(k, b) == pytest.approx(1.0, abs=1e-15)


def test_modulus_band_edge_series_value():
    # at k = w the removable singularity gives (1 + w^2 L^2 / 4)^(-1/2)
    b = BarrierSpec(w=4.0, L=0.5)  # w L = 2
    assert transmission_modulus(4.0, b) == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-12)


def test_modulus_generic_value():
    # frozen from the small-opacity series oracle (alpha = 0.19113)
    b = BarrierSpec(w=4.0, L=0.05)
    assert transmission_modulus(1.1777, b) == pytest.approx(0.946276487598458, rel=1e-9)


def test_modulus_domain_errors():
    b = BarrierSpec(w=4.0, L=0.5)
    with pytest.raises(ValueError):
        transmission_modulus(0.0, b)
    with pytest.raises(ValueError):
        transmission_modulus(4.0001, b)
    with pytest.raises(ValueError):
        transmission_modulus(np.array([1.0, 5.0]), b)


def test_modulus_no_overflow_for_huge_opacity():
    b = BarrierSpec(w=4.0, L=500.0)  # alpha up to 2000: raw sinh would overflow
    val = transmission_modulus(2.0, b)
    assert val == 0.0 or (0.0 < val < 1e-300)
    mid = transmission_modulus(2.0, BarrierSpec(w=4.0, L=100.0))
    assert 0.0 < mid < 1e-140


def test_modulus_bounds_and_monotonicity():
    for w, L in ((1.5, 0.3), (4.0, 0.5), (4.0, 2.0), (20.0, 1.0)):
        b = BarrierSpec(w=w, L=L)
        ks = np.linspace(w * 1e-3, w, 2000)
        T = transmission_modulus(ks, b)
        assert np.all(T > 0.0) and np.all(T <= 1.0)
        assert np.all(np.diff(T) > 0.0)


def test_modulus_vectorized_matches_scalar():
    b = BarrierSpec(w=4.0, L=0.7)
    ks = np.linspace(0.2, 4.0, 11)
    vec = transmission_modulus(ks, b)
    assert vec == pytest.approx([transmission_modulus(float(k), b) for k in ks], rel=1e-14)


# ---------------------------------------------------------------------------
# transmission phase
# ---------------------------------------------------------------------------


def test_phase_zero_without_barrier():
    b = BarrierSpec(w=4.0, L=0.0)
    for k in (0.5, 2.0, 4.0):
        assert transmission_phase(k, b) == 0.0


def test_phase_zero_at_midpoint():
    # numerator 2 k^2 - w^2 vanishes at k = w / sqrt(2)
    for L in (0.1, 1.0, 3.0):
        b = BarrierSpec(w=4.0, L=L)
        assert transmission_phase(4.0 / math.sqrt(2.0), b) == pytest.approx(0.0, abs=1e-12)


def test_phase_band_edge_limit():
    # k -> w limit is arctan(w L / 2)
    b = BarrierSpec(w=4.0, L=0.5)
    assert transmission_phase(4.0, b) == pytest.approx(math.atan(1.0), rel=1e-12)
    assert transmission_phase(4.0 * (1 - 1e-10), b) == pytest.approx(math.atan(1.0), rel=1e-8)


def test_phase_continuous_and_bounded():
    for w, L in ((1.5, 1.0), (4.0, 0.5), (10.0, 2.0)):
        b = BarrierSpec(w=w, L=L)
        ks = np.linspace(w * 1e-3, w, 3000)
        th = transmission_phase(ks, b)
        assert np.all(np.abs(th) < math.pi / 2)
        assert np.max(np.abs(np.diff(th))) < 0.05  # no branch jumps


# ---------------------------------------------------------------------------
# phase derivative and transit time
# ---------------------------------------------------------------------------


def test_phase_derivative_matches_finite_differences():
    b = BarrierSpec(w=4.0, L=0.25)
    h = 1e-5 * b.w
    for k in (0.5, 1.0, 2.0, 2.9, 3.5, 3.99):
        fd = central_diff(lambda kk: transmission_phase(kk, b), k, h)
        assert phase_derivative(k, b) == pytest.approx(fd, rel=1e-6)


def test_phase_derivative_zero_without_barrier():
    b = BarrierSpec(w=4.0, L=0.0)
    assert phase_derivative(4.0 / math.sqrt(2.0), b) == 0.0


def test_phase_derivative_band_edge_limit():
    # k -> w limit: 2 L (3 + 2 w^2 L^2 / 3) / (4 + w^2 L^2)
    w, L = 2.0, 0.5
    b = BarrierSpec(w=w, L=L)
    expect = 2 * L * (3 + 2 * (w * L) ** 2 / 3) / (4 + (w * L) ** 2)
    assert phase_derivative(w, b) == pytest.approx(expect, rel=1e-12)
    assert phase_derivative(w, b) == pytest.approx(0.7333333333333333, rel=1e-12)


@given(wa=wa_strategy, frac=frac_strategy, L=L_strategy, m=m_strategy)
def test_phase_time_is_mass_over_k_times_derivative(wa, frac, L, m):
    b = BarrierSpec(w=wa, L=L, m=m)
    k = wa * frac
    assert phase_time(k, b) == pytest.approx((m / k) * phase_derivative(k, b), rel=1e-12)


def test_phase_time_linear_growth_at_band_edge():
    # at k = w with w L >> 1 the transit time grows as 4 m L / (3 w)
    for m in (1.0, 2.5):
        b = BarrierSpec(w=1.0, L=1e4, m=m)
        assert phase_time(1.0, b) == pytest.approx(4 * m * b.L / (3 * b.w), rel=1e-6)


def test_phase_time_hartman_plateau():
    # alpha > 10 puts the transit time within 1% of 2 m / (k kappa)
    for w, k, m in ((4.0, 2.0, 1.0), (4.0, 3.9, 1.0), (2.0, 1.0, 3.0)):
        kappa = math.sqrt(w * w - k * k)
        for L in (10.5 / kappa, 30.0 / kappa):
            b = BarrierSpec(w=w, L=L, m=m)
            plateau = opaque_limit_time(k, b)
            assert abs(phase_time(k, b) - plateau) / plateau < 0.01


def test_phase_time_positive():
    for w, L in ((1.5, 0.05), (4.0, 0.5), (20.0, 3.0)):
        b = BarrierSpec(w=w, L=L)
        ks = np.linspace(w * 1e-3, w, 500)
        assert np.all(np.asarray(phase_time(ks, b)) > 0.0)


# ---------------------------------------------------------------------------
# band-edge continuity of every branch
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("w,L", [(1.5, 0.4), (4.0, 0.5), (4.0, 2.0), (10.0, 0.05)])
def test_band_edge_continuity(w, L):
    b = BarrierSpec(w=w, L=L)
    k_near = w * (1 - 1e-10)
    for f in (transmission_modulus, transmission_phase, phase_time):
        edge = f(w, b)
        near = f(k_near, b)
        assert near == pytest.approx(edge, rel=1e-6)


@pytest.mark.parametrize("threshold", [1e-4, 1e-2, 0.5])
def test_series_seams_are_smooth(threshold):
    # place alpha just either side of each internal branch seam
    w, k = 3.0, 2.0
    kappa = math.sqrt(w * w - k * k)
    for f in (transmission_modulus, transmission_phase, phase_derivative, transmission_log_derivative):
        lo = f(k, BarrierSpec(w=w, L=threshold * (1 - 1e-9) / kappa))
        hi = f(k, BarrierSpec(w=w, L=threshold * (1 + 1e-9) / kappa))
        assert lo == pytest.approx(hi, rel=1e-7)


# ---------------------------------------------------------------------------
# logarithmic derivative of the modulus
# ---------------------------------------------------------------------------


def test_log_derivative_matches_finite_differences():
    for w, L in ((1.5, 0.8), (4.0, 0.25), (4.0, 1.5), (12.0, 0.3)):
        b = BarrierSpec(w=w, L=L)
        h = 1e-5 * w
        for k in (0.3 * w, 0.6 * w, 0.9 * w):
            fd = central_diff(lambda kk: math.log(transmission_modulus(kk, b)), k, h)
            assert transmission_log_derivative(k, b) == pytest.approx(fd, rel=1e-6)


def test_log_derivative_band_edge_limit():
    for w, L in ((1.5, 0.9), (4.0, 0.5), (8.0, 2.0)):
        b = BarrierSpec(w=w, L=L)
        beta = (w * L) ** 2
        expect = (w * L * L / 4.0) * (1 + beta / 3.0) / (1 + beta / 4.0)
        assert transmission_log_derivative(w, b) == pytest.approx(expect, rel=1e-10)


@given(wa=wa_strategy, L=st.floats(min_value=1e-3, max_value=4.0))
def test_log_derivative_edge_bound(wa, L):
    # the band-edge limit never exceeds w L^2 / 3
    b = BarrierSpec(w=wa, L=L)
    assert transmission_log_derivative(wa, b) <= wa * L * L / 3.0 + 1e-15


def test_log_derivative_edge_bound_tightens():
    w = 2.0
    vals = []
    for L in (1.0, 10.0, 100.0):
        b = BarrierSpec(w=w, L=L)
        vals.append(transmission_log_derivative(w, b) / (w * L * L / 3.0))
    assert vals[0] < vals[1] < vals[2] < 1.0
    assert vals[2] > 0.999


# ---------------------------------------------------------------------------
# plateau fraction G
# ---------------------------------------------------------------------------


def test_plateau_fraction_small_opacity_series():
    assert plateau_fraction(1e-4) == pytest.approx(2e-4 / 3.0, abs=(1e-4) ** 3)
    for a in (1e-3, 0.01, 0.05, 0.09):
        assert abs(plateau_fraction(a) - 2 * a / 3.0) <= a**3


def test_plateau_fraction_unit_value():
    # (sinh 1 cosh 1 - 1) / sinh^2 1, frozen from direct evaluation
    assert plateau_fraction(1.0) == pytest.approx(0.5889736245330208, rel=1e-12)


def test_plateau_fraction_limits():
    assert plateau_fraction(0.0) == 0.0
    for a in (12.5, 20.0, 50.0, 400.0, np.inf):
        assert abs(plateau_fraction(a) - 1.0) <= 1e-8


def test_plateau_fraction_monotone():
    # strictly increasing while 1 - G is representable; saturated (== 1.0) above
    grid = np.linspace(0.0, 17.0, 4000)
    G = plateau_fraction(grid)
    assert np.all(np.diff(G) > 0.0)
    assert np.all(G[1:] > 0.0) and np.all(G <= 1.0)
    tail = plateau_fraction(np.linspace(17.0, 400.0, 200))
    assert np.all(np.diff(tail) >= 0.0) and np.all(tail <= 1.0)


def test_plateau_fraction_rejects_negative():
    with pytest.raises(ValueError):
        plateau_fraction(-0.1)


# ---------------------------------------------------------------------------
# opaque-limit time
# ---------------------------------------------------------------------------


def test_opaque_limit_value():
    b = BarrierSpec(w=4.0, L=1.0)
    assert opaque_limit_time(2.0, b) == pytest.approx(0.2886751345948129, rel=1e-12)


def test_opaque_limit_independent_of_length():
    a = opaque_limit_time(2.0, BarrierSpec(w=4.0, L=1.0))
    c = opaque_limit_time(2.0, BarrierSpec(w=4.0, L=2.0))
    assert a == c


def test_opaque_limit_diverges_at_band_edge():
    b = BarrierSpec(w=4.0, L=1.0)
    assert opaque_limit_time(4.0, b) == math.inf
    assert opaque_limit_time(4.0 * (1 - 1e-26), b) == math.inf
    assert math.isfinite(opaque_limit_time(3.999, b))
