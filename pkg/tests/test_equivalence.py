import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from corridor_qft.equivalence import (
    CorridorParams,
    MenskyWeight,
    complete_square,
    equivalence_check,
    exponent_corridor_side,
    exponent_source_side,
    mensky_log_partition,
    shift_term,
    shifted_log_partition,
    source_from_classical,
)
from corridor_qft.gaussian import SourceShift, central_difference, evaluate, log_partition
from corridor_qft.lattice import ClassicalField, ModelParams, SourceField, build_kernel, build_lattice

from conftest import complex_quad


def test_zero_shift_is_identity(rng):
    lat = build_lattice([3])
    ev = evaluate(build_kernel(lat, ModelParams(1.0, 0.2)))
    J = rng.normal(size=3) + 1j * rng.normal(size=3)
    assert shifted_log_partition(ev, J, SourceShift(0)) == log_partition(ev, J)


def test_shift_term_hand_value(rng):
    lat = build_lattice([2], 0.7)
    eps = 0.4
    J = rng.normal(size=2)
    dv = lat.volume_element
    # the shift enters with the opposite sign to the +i dv J.phi source coupling
    expected = -1j * dv * (1j / (2 * eps)) * (J[0] ** 2 + J[1] ** 2)
    assert shift_term(lat, J, SourceShift.completing_square(eps)) == pytest.approx(expected, rel=1e-15)


def _mixed(ev, func, x1, x2):
    return central_difference(func, ev.kernel.n_sites, [x1, x2], 1e-2)[0]


@pytest.mark.parametrize("dims", [[2], [4], [2, 2]])
def test_shift_theorem(dims):
    lat = build_lattice(dims, 0.9)
    eps = 0.3
    ev = evaluate(build_kernel(lat, ModelParams(0.8, eps)))
    f = SourceShift.completing_square(eps)
    plain = lambda J: log_partition(ev, J)
    shifted = lambda J: shifted_log_partition(ev, J, f)
    n = lat.n_sites
    for x1 in range(n):
        for x2 in range(n):
            d = _mixed(ev, shifted, x1, x2) - _mixed(ev, plain, x1, x2)
            if x1 != x2:
                assert abs(d) <= 1e-8
            else:
                expected = -1j * lat.volume_element * f.second_derivative()
                assert abs(d - expected) <= 1e-8


def test_complete_square_examples():
    lat = build_lattice([3])
    w = complete_square(ModelParams(1.0, 0.5), SourceField.zeros(lat))
    assert w.alpha == 0.5
    np.testing.assert_array_equal(w.center.values, 0)
    c = np.array([0.3, -1.2, 2.0])
    w = complete_square(ModelParams(1.0, 0.5), SourceField(lat, -0.5j * c))
    assert w.alpha == 0.5
    np.testing.assert_allclose(w.center.values, c, rtol=1e-15)
    with pytest.raises(ValueError):
        complete_square(ModelParams(1.0, 0.5), SourceField(lat, [1e-6, 0, 0]))


def test_source_from_classical_examples():
    lat1, lat2 = build_lattice([1]), build_lattice([2])
    assert source_from_classical(ModelParams(1, 0.3), ClassicalField.zeros(lat2)).values.tolist() == [0, 0]
    assert source_from_classical(ModelParams(1, 2.0), ClassicalField(lat1, [1.0])).values[0] == -2j
    np.testing.assert_allclose(
        source_from_classical(ModelParams(1, 0.1), ClassicalField(lat2, [3.0, -1.0])).values,
        [-0.3j, 0.1j], rtol=1e-15)


@settings(max_examples=50, deadline=None)
@given(vals=st.lists(st.floats(-5, 5), min_size=1, max_size=8), eps=st.floats(0.01, 10))
def test_roundtrip(vals, eps):
    lat = build_lattice([len(vals)])
    params = ModelParams(1.0, eps)
    phi = ClassicalField(lat, vals)
    back = complete_square(params, source_from_classical(params, phi))
    np.testing.assert_allclose(back.center.values, phi.values, rtol=1e-14, atol=1e-300)
    J = source_from_classical(params, phi)
    again = source_from_classical(params, complete_square(params, J).center)
    np.testing.assert_allclose(again.values, J.values, rtol=1e-14, atol=1e-300)


def test_mensky_centred_corridor_is_log_z0():
    lat = build_lattice([2, 2], 0.8)
    w = MenskyWeight(CorridorParams(0.25), ClassicalField.zeros(lat))
    ev = evaluate(build_kernel(lat, ModelParams(1.3, 0.25)))
    assert mensky_log_partition(lat, 1.3, w) == pytest.approx(ev.log_z0, rel=1e-13)


def test_mensky_single_site_quadrature():
    lat = build_lattice([1])
    w = MenskyWeight(CorridorParams(0.1), ClassicalField(lat, [1.0]))
    z = complex_quad(lambda p: np.exp(0.5j * p * p - 0.05 * (p - 1) ** 2), -60, 60)
    got = mensky_log_partition(lat, 1.0, w)
    np.testing.assert_allclose(np.exp(got + 0.5 * np.log(2 * np.pi)), z, rtol=1e-9)
    np.testing.assert_allclose(got, -0.051992533208341296 + 0.7405143322013723j, rtol=1e-9)


def test_mensky_constant_shift_closed_form(rng):
    # the uniform mode is an eigenvector of K with eigenvalue 0, which gives
    # delta log Z_M = alpha dv (c S + c^2 N / 2) * i m^2 / (alpha - i m^2)
    lat = build_lattice([3, 2], 1.1)
    m, alpha, c = 0.9, 0.35, 0.7
    phi = rng.uniform(-2, 2, lat.n_sites)
    base = mensky_log_partition(lat, m, MenskyWeight(CorridorParams(alpha), ClassicalField(lat, phi)))
    moved = mensky_log_partition(lat, m, MenskyWeight(CorridorParams(alpha), ClassicalField(lat, phi + c)))
    dv, N, S = lat.volume_element, lat.n_sites, phi.sum()
    expected = alpha * dv * (c * S + c * c * N / 2) * (1j * m**2 / (alpha - 1j * m**2))
    np.testing.assert_allclose(moved - base, expected, rtol=1e-11)


def test_mensky_rejects_bad_alpha():
    with pytest.raises(ValueError):
        CorridorParams(0.0)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), mass=st.floats(0, 2), eps=st.floats(0.01, 1))
def test_pointwise_exponent_identity(seed, mass, eps):
    rng = np.random.default_rng(seed)
    lat = build_lattice([2, 3], rng.uniform(0.5, 1.5))
    params = ModelParams(mass, eps)
    phi = rng.normal(size=lat.n_sites) * 2
    phi_cl = rng.uniform(-2, 2, lat.n_sites)
    J = source_from_classical(params, ClassicalField(lat, phi_cl)).values
    a = exponent_source_side(lat, params, phi, J)
    b = exponent_corridor_side(lat, mass, eps, phi, phi_cl)
    assert abs(a - b) <= 1e-12 * max(1.0, abs(a))


def test_equivalence_zero_centre():
    lat = build_lattice([4])
    rep = equivalence_check(lat, ModelParams(1.0, 0.2), ClassicalField.zeros(lat))
    assert rep.abs_gap <= 1e-13
    assert rep.passed


def test_equivalence_torus(rng):
    lat = build_lattice([2, 2])
    for _ in range(5):
        phi = ClassicalField(lat, rng.uniform(-2, 2, 4))
        rep = equivalence_check(lat, ModelParams(1.0, 0.3), phi)
        assert rep.abs_gap <= 1e-10 * max(1, abs(rep.lhs))
    for eps in (0.01, 0.1, 1.0):
        rep = equivalence_check(lat, ModelParams(1.0, eps), phi)
        assert rep.abs_gap <= 1e-10 * max(1, abs(rep.lhs))


@pytest.mark.parametrize("mass", [0.0, 0.7, 2.0])
@pytest.mark.parametrize("eps", [0.01, 0.2, 1.0])
@pytest.mark.parametrize("dims", [[3], [2, 3], [2, 2, 2]])
def test_equivalence_grid(mass, eps, dims, rng):
    lat = build_lattice(dims, 0.9)
    rep = equivalence_check(lat, ModelParams(mass, eps), ClassicalField(lat, rng.uniform(-2, 2, lat.n_sites)))
    assert rep.abs_gap <= 1e-10 * max(1, abs(rep.lhs))


def test_wrong_sign_convention_would_fail(rng):
    # the +i dv sum f(J) placement misses by eps dv |phi_cl|^2
    lat = build_lattice([2, 2])
    eps = 0.3
    phi = rng.uniform(-2, 2, 4)
    params = ModelParams(1.0, eps)
    ev = evaluate(build_kernel(lat, params))
    J = source_from_classical(params, ClassicalField(lat, phi)).values
    wrong = log_partition(ev, J) + 1j * lat.volume_element * np.sum(1j * J**2 / (2 * eps))
    rep = equivalence_check(lat, params, ClassicalField(lat, phi))
    np.testing.assert_allclose(wrong - rep.rhs, eps * lat.volume_element * phi @ phi, rtol=1e-10)
