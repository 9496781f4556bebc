import math

import numpy as np
import pytest

from shiftconv.forms.eigenform import eigenform
from shiftconv.shifted import decay_scan, required_prec


@pytest.fixture(scope="module")
def form():
    return eigenform(12, required_prec(10000, 0.6) + 1)


def test_required_prec():
    assert required_prec(1000, 0.6) == 2 * 1000 + 4 * math.ceil(1000 ** 0.6) + 1


def test_scan_reports(form):
    r = decay_scan([form] * 3, [500, 1000, 3000, 10000], 0.6, 0.05)
    assert r.Hs.tolist() == [math.ceil(n ** 0.6) for n in (500, 1000, 3000, 10000)]
    assert math.isfinite(r.exponent)
    assert r.in_regime
    assert np.all(r.trivial_ratio > 0)


def test_theta_zero_degenerate(form):
    r = decay_scan([form] * 3, [500, 1000, 3000, 10000], 0.0)
    assert not r.in_regime
    assert np.all(r.Hs == 1)
    assert np.all(r.values == 0)
    assert math.isnan(r.exponent) and r.notes


def test_skips_points_beyond_precision(form):
    with pytest.raises(ValueError, match="usable"):
        decay_scan([form] * 3, [1000, 3000, 10000, 30000], 0.6)


def test_too_few_points(form):
    with pytest.raises(ValueError, match="at least 4"):
        decay_scan([form] * 3, [1000, 3000, 10000], 0.6)
