import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from corridor_qft.spectral import (
    Method,
    QuadratureError,
    SpectralQuery,
    approx_decay_rate,
    approx_gap,
    exact_decay_rate,
    fit_decay_envelope,
    in_quadratic_regime,
    lifetime,
    lifetime_boosted,
    omega_integral_approx,
    omega_integral_quadrature,
    omega_integral_residue,
)

# Im sqrt(1 + 0.1i) by hand: r = sqrt(1.01), Im = sqrt((r - 1) / 2)
IM_ROOT_1_01 = math.sqrt((math.sqrt(1.01) - 1) / 2)


def test_hand_root():
    assert IM_ROOT_1_01 == pytest.approx(0.04993777183700243, rel=1e-14)
    assert exact_decay_rate(1.0, 0.1) == pytest.approx(IM_ROOT_1_01, rel=1e-14)


@pytest.mark.parametrize("bad", [dict(omega_k=0, epsilon=0.1, t=0), dict(omega_k=1, epsilon=0, t=0),
                                 dict(omega_k=1, epsilon=0.1, t=math.inf)])
def test_query_validation(bad):
    with pytest.raises(ValueError):
        SpectralQuery(**bad)


def test_t_zero_specialisation():
    q = SpectralQuery(1.0, 0.1, 0.0)
    expected = math.pi * 1j / cmath.sqrt(1 + 0.1j)
    assert omega_integral_residue(q).value == pytest.approx(expected, rel=1e-15)
    assert omega_integral_approx(q).value == pytest.approx(expected, rel=1e-15)
    assert abs(omega_integral_quadrature(q, 1e-6).value - expected) <= 1e-6


@pytest.mark.parametrize("wk, eps, t", [(1.0, 0.1, 5.0), (2.0, 0.05, -3.0), (0.5, 0.01, 20.0),
                                        (3.0, 0.5, -17.5)])
def test_quadrature_matches_residue(wk, eps, t):
    q = SpectralQuery(wk, eps, t)
    assert abs(omega_integral_quadrature(q, 1e-6).value - omega_integral_residue(q).value) <= 1e-6


def test_negative_time_branch_is_upper_contour():
    # t < 0: closing above picks the pole at +s, giving (pi i / s) exp(-i t s)
    q = SpectralQuery(2.0, 0.05, -3.0)
    s = cmath.sqrt(4 + 0.05j)
    assert omega_integral_residue(q).value == pytest.approx(math.pi * 1j / s * cmath.exp(-1j * q.t * s),
                                                            rel=1e-14)


def test_tighter_tolerance():
    q = SpectralQuery(1.3, 0.2, 7.0)
    assert abs(omega_integral_quadrature(q, 1e-9).value - omega_integral_residue(q).value) <= 1e-9


def test_quadrature_policy_limits():
    with pytest.raises(QuadratureError):
        omega_integral_quadrature(SpectralQuery(1.0, 0.1, 60.0))
    with pytest.raises(ValueError):
        omega_integral_quadrature(SpectralQuery(1.0, 0.1, 1.0), tol=1e-2)


def test_small_eps_limit():
    q = SpectralQuery(1.0, 1e-12, 1.0)
    assert omega_integral_residue(q).value == pytest.approx(math.pi * 1j * cmath.exp(1j), rel=1e-10)
    assert omega_integral_approx(q).value == pytest.approx(omega_integral_residue(q).value, rel=1e-10)


def test_residue_magnitude():
    q = SpectralQuery(1.0, 0.1, 10.0)
    expected = math.pi / abs(cmath.sqrt(1 + 0.1j)) * math.exp(-10 * IM_ROOT_1_01)
    assert abs(omega_integral_residue(q).value) == pytest.approx(expected, rel=1e-13)


def test_time_reflection():
    for t in (0.3, 4.0, 19.0):
        a = omega_integral_residue(SpectralQuery(1.7, 0.2, t)).value
        b = omega_integral_residue(SpectralQuery(1.7, 0.2, -t)).value
        assert a == b


def test_approx_gap_ratio_worked_point():
    g1 = approx_gap(SpectralQuery(1.0, 0.1, 1.0))
    g2 = approx_gap(SpectralQuery(1.0, 0.05, 1.0))
    assert 2.5 <= g1 / g2 <= 5.5


def test_absolute_gap_ratio_drifts_at_long_times():
    # the envelope exp(-eps|t|/2w) rides on the absolute gap: halving ratio ~ 4 exp(-eps|t|/4w)
    wk, eps, t = 1.0, 0.1, 40.0
    ratio = approx_gap(SpectralQuery(wk, eps, t)) / approx_gap(SpectralQuery(wk, eps / 2, t))
    assert ratio == pytest.approx(4 * math.exp(-eps * t / (4 * wk)), rel=0.05)
    assert not in_quadratic_regime(SpectralQuery(wk, eps, t))
    rel = approx_gap(SpectralQuery(wk, eps, t), True) / approx_gap(SpectralQuery(wk, eps / 2, t), True)
    assert 3 <= rel <= 5.5


def test_fit_examples():
    grid = [SpectralQuery(1.0, 0.1, float(t)) for t in range(1, 41)]
    fit = fit_decay_envelope(grid, Method.RESIDUE)
    assert fit.rate == pytest.approx(0.049938, abs=1e-6)
    assert abs(fit.rate - IM_ROOT_1_01) <= 1e-8
    fit = fit_decay_envelope(grid, Method.APPROX)
    assert abs(fit.rate - 0.05) <= 1e-10
    assert fit.residual < 1e-12
    grid2 = [SpectralQuery(1.0, 0.2, float(t)) for t in range(1, 41)]
    assert fit_decay_envelope(grid2, "approx").rate == pytest.approx(2 * fit.rate, rel=1e-10)


def test_fit_with_quadrature_samples():
    grid = [SpectralQuery(1.0, 0.2, float(t)) for t in np.linspace(0, 30, 12)]
    fit = fit_decay_envelope(grid, Method.QUADRATURE, tol=1e-9)
    assert fit.rate == pytest.approx(exact_decay_rate(1.0, 0.2), rel=1e-5)


def test_fit_rejects_bad_grids():
    with pytest.raises(ValueError):
        fit_decay_envelope([SpectralQuery(1, 0.1, 1.0)] * 10)
    with pytest.raises(ValueError):
        fit_decay_envelope([SpectralQuery(1, 0.1, float(t)) for t in range(5)])
    with pytest.raises(ValueError):
        fit_decay_envelope([SpectralQuery(1, 0.1 * (1 + (t % 2)), float(t)) for t in range(10)])


def test_lifetime_examples():
    assert lifetime(1.0, 0.01) == pytest.approx(400)
    assert lifetime(5.0, 0.1) == pytest.approx(200)
    # per-direction 1/e amplitude time is 2 w_k / eps
    wk, eps = 1.3, 0.07
    t_e = 2 * wk / eps
    assert math.exp(-eps * t_e / (2 * wk)) == pytest.approx(math.exp(-1))
    assert lifetime(wk, eps) == pytest.approx(2 * t_e, rel=1e-15)
    with pytest.raises(ValueError):
        lifetime(0, 0.1)


def test_boosted_examples():
    r = lifetime_boosted(1.0, 0.01, 1.0)
    assert r.tau == r.tau_rest
    r = lifetime_boosted(1.0, 0.01, 2.0)
    assert (r.tau_rest, r.tau) == (pytest.approx(400), pytest.approx(800))
    r = lifetime_boosted(0.5, 0.02, 3.0)
    assert r.tau == pytest.approx(300, rel=1e-12)
    assert lifetime(1.5, 0.02) == pytest.approx(300, rel=1e-12)
    with pytest.raises(ValueError):
        lifetime_boosted(1.0, 0.01, 0.9)


@settings(max_examples=50, deadline=None)
@given(m=st.floats(0.1, 10), eps=st.floats(1e-3, 1), gamma=st.floats(1, 20))
def test_lifetime_identities(m, eps, gamma):
    r = lifetime_boosted(m, eps, gamma)
    assert r.tau == pytest.approx(r.gamma * r.tau_rest, rel=1e-12)
    assert r.tau == pytest.approx(lifetime(gamma * m, eps), rel=1e-12)
    assert lifetime(m, 2 * eps) == pytest.approx(lifetime(m, eps) / 2, rel=1e-12)
    assert lifetime(gamma * m, eps) == pytest.approx(gamma * lifetime(m, eps), rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(wk=st.floats(0.5, 3), eps=st.floats(0.01, 0.5), t=st.floats(-20, 20))
def test_quadrature_property(wk, eps, t):
    q = SpectralQuery(wk, eps, t)
    assert abs(omega_integral_quadrature(q, 1e-6).value - omega_integral_residue(q).value) <= 1e-6


def test_envelope_rates():
    for wk, eps in [(0.5, 0.01), (1.0, 0.3), (2.5, 0.05)]:
        grid = [SpectralQuery(wk, eps, float(t)) for t in np.linspace(0.5, 60, 25)]
        assert abs(fit_decay_envelope(grid, "approx").rate - approx_decay_rate(wk, eps)) <= 1e-10
        assert abs(fit_decay_envelope(grid, "residue").rate - exact_decay_rate(wk, eps)) <= 1e-8
