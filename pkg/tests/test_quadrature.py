import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from inertonlab.quadrature import QuadratureError, gk15, integrate


@pytest.mark.parametrize("degree", range(0, 23))
def test_single_panel_exact_for_polynomials(degree):
    # Kronrod 15 integrates x^k exactly up to k = 22 on [-1, 1]
    value, _ = gk15(lambda x: x ** degree, -1.0, 1.0)
    exact = 0.0 if degree % 2 else 2.0 / (degree + 1)
    assert value == pytest.approx(exact, abs=1e-15)


def test_gauss_estimate_is_exact_to_degree_13():
    value, err = gk15(lambda x: x ** 12 + 3 * x ** 5, -1.0, 1.0)
    assert value == pytest.approx(2.0 / 13, rel=1e-15)
    assert err <= 1e-15


@pytest.mark.parametrize("f, a, b, exact", [
    (np.sin, 0.0, math.pi, 2.0),
    (np.exp, 0.0, 1.0, math.e - 1.0),
    (lambda x: 1.0 / (1.0 + x * x), -5.0, 5.0, 2.0 * math.atan(5.0)),
    (lambda x: np.sqrt(x), 0.0, 1.0, 2.0 / 3.0),
    (lambda x: np.cos(40 * x), 0.0, 1.0, math.sin(40.0) / 40.0),
])
def test_known_integrals(f, a, b, exact):
    value, err = integrate(f, a, b)
    assert value == pytest.approx(exact, rel=1e-12, abs=1e-14)
    assert isinstance(value, float) and isinstance(err, float)


def test_reversed_and_empty_intervals():
    assert integrate(np.exp, 1.0, 0.0)[0] == pytest.approx(-(math.e - 1.0), rel=1e-14)
    assert integrate(np.exp, 0.3, 0.3) == (0.0, 0.0)


def test_limit_exhaustion_raises():
    with pytest.raises(QuadratureError):
        integrate(lambda x: np.sign(x - 0.3141592), 0.0, 1.0, limit=4, abs_tol=0.0, rel_tol=1e-15)


def test_deterministic():
    f = lambda x: np.exp(-x * x) * np.cos(3 * x)  # noqa: E731
    assert integrate(f, -2, 3) == integrate(f, -2, 3)


@given(st.floats(-3, 3), st.floats(0.1, 4), st.floats(0.1, 5))
def test_matches_scipy(a, width, k):
    f = lambda x: np.exp(-k * x * x) + np.sin(k * x)  # noqa: E731
    ours, _ = integrate(f, a, a + width)
    ref, _ = quad(f, a, a + width, epsabs=1e-14, epsrel=1e-12, limit=200)
    assert ours == pytest.approx(ref, rel=1e-11, abs=1e-13)
