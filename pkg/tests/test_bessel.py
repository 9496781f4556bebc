import numpy as np
import pytest
from scipy.special import jv

from shiftconv.numerics import bessel_j, bessel_j_asymptotic, bessel_j_series, x_switch
from shiftconv.numerics.bessel import MAX_ORDER


@pytest.mark.parametrize("order", [0, 1, 5, 11, 15, 17, 21, 25, 30])
def test_against_scipy(order):
    x = np.concatenate([np.linspace(0, 60, 601), np.geomspace(60, 5e4, 200)])
    got = bessel_j(order, x)
    assert np.max(np.abs(got - jv(order, x))) < 5e-13


@pytest.mark.parametrize("order", [0, 11, 25, 30])
def test_branches_meet_at_switch(order):
    xs = x_switch(order)
    a = bessel_j_series(order, xs)
    b = float(bessel_j_asymptotic(order, np.array([xs]))[0])
    assert abs(a - b) < 1.5e-13


def test_switch_rule():
    assert x_switch(11) == 18.0
    assert x_switch(30) == pytest.approx(36.0)


def test_small_argument():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(3, 0.0) == 0.0
    assert bessel_j(11, 1e-3) == pytest.approx(jv(11, 1e-3), rel=1e-13)


def test_shape_and_errors():
    assert bessel_j(2, np.ones((3, 4))).shape == (3, 4)
    with pytest.raises(ValueError):
        bessel_j(2, -1.0)
    with pytest.raises(ValueError):
        bessel_j(MAX_ORDER + 1, 1.0)
    with pytest.raises(ValueError):
        bessel_j(-1, 1.0)
