import pytest

from shiftconv.forms.arithmetic import divisor_table
from shiftconv.shifted import INGHAM_CONSTANT, divisor_correlation, ingham_fit, triple_correlation


def d(n):
    return sum(1 for k in range(1, n + 1) if n % k == 0)


def test_hand_value():
    assert divisor_correlation(3, 1) == 12


@pytest.mark.parametrize("X,h", [(50, 1), (120, 6), (77, 0)])
def test_against_bruteforce(X, h):
    assert divisor_correlation(X, h) == sum(d(n) * d(n + h) for n in range(1, X + 1))


def test_d3_correlation():
    d3 = divisor_table("d_k", 100, 3)
    want = sum(int(d3[n]) * int(d3[n + 2]) for n in range(1, 81))
    assert divisor_correlation(80, 2, k=3) == want


def test_triple():
    assert triple_correlation(10, 1) == sum(d(n - 1) * d(n) * d(n + 1) for n in range(2, 11))
    assert triple_correlation(3, 5) == 0
    with pytest.raises(ValueError):
        triple_correlation(10, 0)


def test_ingham():
    r = ingham_fit(1, [10 ** 4, 3 * 10 ** 4, 10 ** 5, 3 * 10 ** 5, 10 ** 6])
    assert r.target == pytest.approx(INGHAM_CONSTANT)
    assert r.rel_error < 0.02


def test_ingham_h2_target():
    r = ingham_fit(2, [10 ** 4, 10 ** 5, 3 * 10 ** 5, 10 ** 6])
    assert r.target == pytest.approx(1.5 * INGHAM_CONSTANT)
    assert r.rel_error < 0.1


def test_grid_too_small():
    with pytest.raises(ValueError):
        ingham_fit(1, [10, 100, 1000])
    with pytest.raises(ValueError):
        divisor_correlation(0, 1)
