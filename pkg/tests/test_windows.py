import math

import numpy as np
import pytest
from scipy.integrate import quad

from shiftconv.numerics import J_MAX, SmoothWindow, bump, bump_deriv, canonical_window

BUMP_INTEGRAL = 0.007029858406609657  # scipy.integrate.quad, frozen


def test_value_at_centre():
    assert bump(1.5) == pytest.approx(math.exp(-4), rel=1e-15)


def test_support():
    x = np.array([0.5, 1.0, 2.0, 2.5])
    assert np.all(bump(x) == 0)
    assert np.all(bump(np.linspace(1.01, 1.99, 50)) > 0)


def test_integral_matches_oracle():
    ref = quad(bump, 1, 2, epsabs=1e-16, epsrel=1e-14)[0]
    assert ref == pytest.approx(BUMP_INTEGRAL, rel=1e-12)
    assert canonical_window().integral() == pytest.approx(BUMP_INTEGRAL, rel=1e-13)


# w^(j) at x = 1.2, 1.37, 1.5, 1.9 from exact symbolic differentiation (sympy, 50 digits), frozen
SYMBOLIC = {
    5: [2237.3561181923466654, -10.605104224668759685, 0.0, 5524.1939623510742402],
    8: [79988689.704651582911, -1639263.2935473597031, -252070.07914453748034, 689853832.97188559750],
}


@pytest.mark.parametrize("j", sorted(SYMBOLIC))
def test_derivatives_against_symbolic(j):
    got = bump_deriv(np.array([1.2, 1.37, 1.5, 1.9]), j)
    for g, want in zip(got, SYMBOLIC[j]):
        assert g == pytest.approx(want, rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("j", range(1, J_MAX + 1))
def test_derivatives_against_finite_differences(j):
    x = np.linspace(1.2, 1.8, 13)
    h = 1e-5
    lower = bump_deriv(x, j - 1)
    fd = (bump_deriv(x + h, j - 1) - bump_deriv(x - h, j - 1)) / (2 * h)
    scale = np.max(np.abs(bump_deriv(np.linspace(1.01, 1.99, 400), j)))
    assert np.max(np.abs(fd - bump_deriv(x, j))) < 1e-7 * scale
    assert lower.shape == x.shape


def test_derivatives_vanish_at_ends():
    for j in range(J_MAX + 1):
        assert abs(bump_deriv(1.0 + 1e-3, j)) < 1e-300 or abs(bump_deriv(1.0 + 1e-3, j)) < 1e-100


def test_rescaled_window():
    w = SmoothWindow(0.5, 1.0, 3.0)
    assert w.eval(0.75) == pytest.approx(3 * math.exp(-4))
    assert w.integral() == pytest.approx(3 * 0.5 * BUMP_INTEGRAL, rel=1e-12)
    # chain rule: d/dx bump(1 + 2(x - 1/2)) = 2 bump'
    assert w.deriv(0.6, 1) == pytest.approx(3 * 2 * bump_deriv(1.2, 1), rel=1e-14)
    assert w.rescaled(1, 2, 1.0) == SmoothWindow(1, 2, 1.0)


def test_zero_amplitude():
    w = SmoothWindow(amplitude=0.0)
    assert w.eval(1.5) == 0.0
    assert np.all(w.eval(np.linspace(1, 2, 5)) == 0)
    assert w.deriv(1.5, 2) == 0.0


def test_sup_norm():
    assert canonical_window().sup_norm() == pytest.approx(math.exp(-4), rel=1e-12)
