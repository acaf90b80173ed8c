import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellipticw.errors import NonconvergentSeries, PoleHit
from ellipticw.series import LaurentTable, PoleSeries, ProductSpec, contour_coefficients, pole_jump


def test_pole_series_laurent_matches_quadrature():
    s = PoleSeries(0.3, [1.0, -0.5 + 0.2j, 2.0], [0.4, 1.6j, 0.05])
    for radius in (0.6, 1.0, 2.0):
        L = s.laurent(radius, 6)
        C = contour_coefficients(s, radius, -6, 6)
        assert max(abs(L[k] - C[k]) for k in L) < 1e-12


def test_laurent_rejects_contour_on_pole():
    s = PoleSeries(0, [1.0], [0.25])
    with pytest.raises(NonconvergentSeries):
        s.laurent(2.0, 3)


def test_antisymmetrized_is_odd():
    s = PoleSeries.antisymmetrized([1.0, -2.0], [0.3, 0.1j], 0.7)
    x = 1.1 + 0.4j
    assert abs(s(x) + s(1 / x)) < 1e-13


def test_pole_hit():
    s = PoleSeries(0, [1.0], [0.25])
    with pytest.raises(PoleHit):
        s.evaluate_X(4.0)
    with pytest.raises(PoleHit):
        ProductSpec([0.5], [-1]).evaluate_X(2.0)


@settings(max_examples=20, deadline=None)
@given(b1=st.complex_numbers(max_magnitude=0.8), b2=st.complex_numbers(max_magnitude=0.8),
       e1=st.integers(-3, 3), e2=st.integers(-3, 3))
def test_product_taylor_matches_quadrature(b1, b2, e1, e2):
    spec = ProductSpec([b1, b2], [e1, e2], 1.5)
    T = spec.taylor(10)
    C = contour_coefficients(spec, 0.9, 0, 10, check=False)
    assert max(abs(T[k] - C[k]) / max(1.0, abs(C[k])) for k in range(11)) < 1e-9


def test_merged_and_poles():
    spec = ProductSpec([0.5, 0.5 * (1 + 1e-12), 0.2, 0.2], [-1, -1, 1, -1])
    m = spec.merged()
    assert len(m.b) == 1 and m.e[0] == -2
    assert spec.poles() == [(pytest.approx(0.5), 2)]


def test_local_taylor_against_finite_differences():
    spec = ProductSpec([0.3, 0.1j], [2, -1], 0.8)
    X0 = 1.3
    g = spec.local_taylor(X0, 3)
    h = 1e-3
    f = spec.evaluate_X
    assert abs(g[0] - f(X0)) < 1e-14
    assert abs(g[1] - (f(X0 + h) - f(X0 - h)) / (2 * h)) < 1e-6
    assert abs(g[2] - (f(X0 + h) - 2 * f(X0) + f(X0 - h)) / (2 * h * h)) < 1e-5


def test_derivative_x():
    spec = ProductSpec([0.3, 0.1j], [2, -1], 0.8)
    x, h = 0.9 + 0.2j, 1e-5
    fd = (spec(x + h) - spec(x - h)) / (2 * h)
    assert abs(spec.derivative_x(x) - fd) < 1e-8


def test_pole_jump_simple_is_geometric():
    alpha = 0.5 + 0.1j
    for l in range(-4, 5):
        assert abs(pole_jump(np.array([1.0]), alpha, 1, l) + alpha**l) < 1e-14


def test_pole_jump_double_matches_partial_fractions():
    # 1/(1 - a X)^2: outer minus inner coefficient of X^l is -(l+1) a^l for every l
    a = 0.4
    g = np.array([1.0, 0.0])
    for l in range(-5, 6):
        assert abs(pole_jump(g, a, 2, l) + (l + 1) * a**l) < 1e-13


def test_laurent_table():
    t = LaurentTable({-1: 2.0, 0: 1.0, 2: 0.5}, 0, (0.5, 2.0))
    assert t.rmax == 2 and t[5] == 0
    x = 1.2 * cmath.exp(0.3j)
    assert abs(t.evaluate(x) - (2 / x**2 + 1 + 0.5 * x**4)) < 1e-14
    assert t.max_abs_diff(t) == 0


def test_quadrature_doubling_check():
    # a pole very close to the contour needs far more nodes than 64
    with pytest.raises(NonconvergentSeries):
        contour_coefficients(lambda x: 1 / (1 - 0.99 * x * x), 1.0, 0, 4, nodes=64)
