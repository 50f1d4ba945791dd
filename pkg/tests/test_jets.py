"""Truncated Taylor jets and the dimension-raising operator.

The raising-operator values are checked against hand-derived formulas,

    D g = -g' / (2 pi w),
    D^2 g = g'' / (4 pi^2 w^2) - g' w' / (4 pi^2 w^3),

evaluated independently at 30-digit precision for g(r) = exp(-r^2/(4 t)),
t = 0.7, r = 1.3, and frozen below at full double precision.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ckernels.errors import DomainError, SingularPointError
from ckernels.geometry import Space
from ckernels.jets import (
    MAX_ORDER,
    Jet,
    raise_jet,
    raise_operator,
    raise_origin_jet,
    variable,
    weight_jet,
)

# frozen oracle values for the raising operator (30-digit computation)
D1_EXPECT = {
    Space.EUCLIDEAN: 0.062167636285514418,
    Space.SPHERE: 0.083874464868125122,
    Space.HYPERBOLIC: 0.047585234866182587,
}
D2_EXPECT = {
    Space.EUCLIDEAN: 0.0070673475822704962,
    Space.SPHERE: 0.0060535475774929946,
    Space.HYPERBOLIC: 0.0058852783848515235,
}
D1_ORIGIN = 0.11368210220849667  # same for all three weights (w'(0) = 1)
D2_ORIGIN = {
    Space.EUCLIDEAN: 0.012923620362543103,
    Space.SPHERE: 0.0068925975266896644,
    Space.HYPERBOLIC: 0.018954643198396542,
}

T0 = 0.7
R0 = 1.3


def gauss_gen(center: float, order: int) -> Jet:
    x = variable(center, order)
    return (x * x * (-0.25 / T0)).exp()


# ---------------------------------------------------------------------------
# jet arithmetic against library transcendentals


def test_jet_evaluation_matches_polynomial():
    j = Jet(0.0, [1.0, 2.0, 3.0])
    assert j(0.5) == pytest.approx(1.0 + 2.0 * 0.5 + 3.0 * 0.25, rel=1e-15)


@pytest.mark.parametrize("center", [0.0, 0.4, -1.2, 2.0])
def test_transcendental_jets_reproduce_taylor_coefficients(center):
    x = variable(center, 8)
    cases = [
        (x.exp(), math.exp, lambda k: math.exp(center)),
        (x.sin(), math.sin, None),
        (x.cos(), math.cos, None),
        (x.sinh(), math.sinh, None),
        (x.cosh(), math.cosh, None),
    ]
    for jet, fn, _ in cases:
        assert jet.value == pytest.approx(fn(center), rel=1e-15, abs=1e-15)
        # evaluate the truncated series a small step away
        h = 1e-2
        assert jet(h) == pytest.approx(fn(center + h), rel=1e-12, abs=1e-12)


def test_derivative_extraction():
    x = variable(0.5, 6)
    j = x.exp()
    for k in range(5):
        assert j.derivative(k) == pytest.approx(math.exp(0.5), rel=1e-13)


def test_division_and_power_consistency():
    x = variable(0.8, 8)
    f = x.exp() + 1.0
    g = x.cos() + 2.0
    q = f / g
    assert (q * g).coeffs == pytest.approx(f.coeffs, rel=1e-13)
    p = g.power(-1.5)
    assert p.value == pytest.approx((math.cos(0.8) + 2.0) ** -1.5, rel=1e-14)


def test_sqrt_arcsin_arccosh_jets():
    x = variable(0.3, 7)
    s = x.sqrt()
    assert s.value == pytest.approx(math.sqrt(0.3), rel=1e-15)
    assert s.derivative(1) == pytest.approx(0.5 / math.sqrt(0.3), rel=1e-13)
    a = x.arcsin()
    assert a.derivative(1) == pytest.approx(1.0 / math.sqrt(1.0 - 0.09), rel=1e-13)
    y = variable(1.7, 7)
    c = y.arccosh()
    assert c.value == pytest.approx(math.acosh(1.7), rel=1e-14)
    assert c.derivative(1) == pytest.approx(1.0 / math.sqrt(1.7**2 - 1.0), rel=1e-13)


def test_log_exp_roundtrip():
    x = variable(0.6, 8)
    f = x.cosh() + 0.5
    back = f.log().exp()
    assert back.coeffs == pytest.approx(f.coeffs, rel=1e-12)


def test_deriv_antideriv_roundtrip():
    x = variable(0.9, 8)
    f = x.sin() * x.exp()
    g = f.deriv().antideriv(f.value)
    assert g.coeffs == pytest.approx(f.coeffs, rel=1e-14)


def test_scalar_coercion_keeps_order():
    x = variable(0.5, 6)
    f = x.exp()
    assert (f + 1.0).order == 6
    assert (2.0 * f).order == 6
    assert (1.0 / (f + 2.0)).order == 6


def test_zero_leading_division_rejected():
    num = variable(1.0, 4)
    den = Jet(1.0, [0.0, 1.0, 0.5])
    with pytest.raises(DomainError):
        num / den


def test_order_cap_enforced():
    with pytest.raises(DomainError):
        variable(0.0, MAX_ORDER + 1)


# ---------------------------------------------------------------------------
# hypothesis: structural identities


coeff = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(st.lists(coeff, min_size=2, max_size=6), st.floats(min_value=-1.0, max_value=1.0))
def test_product_jet_is_series_product(coeffs, center):
    f = Jet(center, coeffs)
    g = Jet(center, coeffs[::-1])
    prod = f * g
    full = np.convolve(f.coeffs, g.coeffs)[: prod.order + 1]
    assert prod.coeffs == pytest.approx(full, rel=1e-12, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=-1.2, max_value=1.2))
def test_sin_cos_pythagoras(center):
    x = variable(center, 8)
    one = x.sin() ** 2 + x.cos() ** 2
    expect = np.zeros(9)
    expect[0] = 1.0
    assert one.coeffs == pytest.approx(expect, abs=1e-13)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0.2, max_value=2.5))
def test_sqrt_squares_back(center):
    x = variable(center, 8)
    f = x.exp() + 0.3
    s = f.sqrt()
    assert (s * s).coeffs == pytest.approx(f.coeffs, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.1, max_value=2.0), st.floats(min_value=-2.0, max_value=2.0))
def test_power_matches_exp_log(alpha, center_shift):
    x = variable(1.5 + 0.1 * center_shift, 7)
    f = x.cosh()
    direct = f.power(alpha)
    via_log = (f.log() * alpha).exp()
    assert direct.coeffs == pytest.approx(via_log.coeffs, rel=1e-11, abs=1e-11)


# ---------------------------------------------------------------------------
# weight jets and the raising operator


@pytest.mark.parametrize("space", list(Space))
def test_weight_jet_matches_weight(space):
    j = weight_jet(space, 0.8, 5)
    assert j.value == pytest.approx(space.weight(0.8), rel=1e-15)
    assert j.derivative(1) == pytest.approx(space.weight_deriv(0.8), rel=1e-14)


@pytest.mark.parametrize("space", list(Space))
def test_raise_operator_once_matches_hand_formula(space):
    got = raise_operator(space, gauss_gen, 1, R0)
    assert got == pytest.approx(D1_EXPECT[space], rel=1e-12)


@pytest.mark.parametrize("space", list(Space))
def test_raise_operator_twice_matches_hand_formula(space):
    got = raise_operator(space, gauss_gen, 2, R0)
    assert got == pytest.approx(D2_EXPECT[space], rel=1e-12)


@pytest.mark.parametrize("space", list(Space))
def test_raise_operator_exact_at_origin(space):
    got = raise_operator(space, gauss_gen, 1, 0.0)
    assert got == pytest.approx(D1_ORIGIN, rel=1e-12)
    got2 = raise_operator(space, gauss_gen, 2, 0.0)
    assert got2 == pytest.approx(D2_ORIGIN[space], rel=1e-12)


def test_raise_operator_zero_applications_is_identity():
    assert raise_operator(Space.EUCLIDEAN, gauss_gen, 0, 1.1) == pytest.approx(
        math.exp(-1.1 * 1.1 / (4.0 * T0)), rel=1e-15
    )


def test_raise_operator_refuses_antipode():
    with pytest.raises(SingularPointError):
        raise_operator(Space.SPHERE, gauss_gen, 1, math.pi)
    with pytest.raises(SingularPointError):
        raise_operator(Space.SPHERE, gauss_gen, 1, math.pi - 1e-12)


def test_raise_operator_order_budget():
    # k applications at the origin need 2k orders; 9 would exceed the cap
    with pytest.raises(DomainError):
        raise_operator(Space.EUCLIDEAN, gauss_gen, 9, 0.0)


def test_raise_jet_value_and_derivative_consistent():
    jet = raise_jet(Space.HYPERBOLIC, gauss_gen, 1, R0, 3)
    assert jet.value == pytest.approx(D1_EXPECT[Space.HYPERBOLIC], rel=1e-12)
    h = 1e-6
    up = raise_operator(Space.HYPERBOLIC, gauss_gen, 1, R0 + h)
    down = raise_operator(Space.HYPERBOLIC, gauss_gen, 1, R0 - h)
    assert jet.derivative(1) == pytest.approx((up - down) / (2.0 * h), rel=1e-8)


def test_raise_jet_needs_interior_center():
    with pytest.raises(SingularPointError):
        raise_jet(Space.EUCLIDEAN, gauss_gen, 1, 0.0, 3)


@pytest.mark.parametrize("space", list(Space))
def test_raise_origin_jet_extends_to_nearby_points(space):
    jet = raise_origin_jet(space, gauss_gen, 2, order=8)
    assert jet.value == pytest.approx(D2_ORIGIN[space], rel=1e-12)
    # the even Taylor polynomial tracks direct raising just outside the origin
    for s in (0.02, 0.05):
        direct = raise_operator(space, gauss_gen, 2, s)
        assert jet(s) == pytest.approx(direct, rel=1e-10)


def test_raise_origin_jet_order_budget():
    with pytest.raises(DomainError):
        raise_origin_jet(Space.EUCLIDEAN, gauss_gen, 5, order=8)
