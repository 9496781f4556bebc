from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from shiftconv.forms.qseries import (
    QSeries,
    SeriesDivisionError,
    bernoulli,
    delta_form,
    eisenstein,
    eta_power_series,
)

# Ramanujan's table of tau(n), n = 1..12
TAU = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944]

series = st.lists(st.integers(-10 ** 30, 10 ** 30), min_size=1, max_size=24)


class TestEisenstein:
    def test_e4_e6_heads(self):
        assert eisenstein(4, 5).coeffs == (1, 240, 2160, 6720, 17520)
        assert eisenstein(6, 4).coeffs == (1, -504, -16632, -122976)

    def test_e8_is_e4_squared(self):
        e4 = eisenstein(4, 300)
        assert eisenstein(8, 300) == e4 * e4

    def test_e14_is_e4_squared_e6(self):
        e4 = eisenstein(4, 200)
        assert eisenstein(14, 200) == e4 * e4 * eisenstein(6, 200)

    def test_unsupported_weight(self):
        with pytest.raises(ValueError, match="not supported"):
            eisenstein(12, 10)

    @pytest.mark.parametrize("k,b", [(2, Fraction(1, 6)), (4, Fraction(-1, 30)), (12, Fraction(-691, 2730))])
    def test_bernoulli(self, k, b):
        assert bernoulli(k) == b


class TestDelta:
    def test_tau_table(self):
        assert list(delta_form(13).coeffs[1:]) == TAU

    def test_eta_product_agrees(self):
        d = delta_form(3001).coeffs
        eta = eta_power_series(24, 3000).coeffs
        assert d[0] == 0
        assert d[1:] == eta

    def test_euler_function(self):
        # 1 - q - q^2 + q^5 + q^7 - q^12 - q^15
        head = eta_power_series(1, 16).coeffs
        want = [0] * 16
        for e, s in [(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1), (15, -1)]:
            want[e] = s
        assert list(head) == want

    def test_ramanujan_congruence_691(self):
        # tau(n) = sigma_11(n) mod 691
        d = delta_form(400).coeffs
        for n in range(1, 400):
            s11 = sum(k ** 11 for k in range(1, n + 1) if n % k == 0)
            assert (d[n] - s11) % 691 == 0


class TestSeriesArithmetic:
    @settings(max_examples=60, deadline=None)
    @given(series, series)
    def test_mul_matches_schoolbook(self, a, b):
        p = min(len(a), len(b))
        want = [sum(a[i] * b[n - i] for i in range(n + 1)) for n in range(p)]
        assert (QSeries(a) * QSeries(b)).coeffs == tuple(want)

    @settings(max_examples=40, deadline=None)
    @given(series, series, series)
    def test_mul_associative(self, a, b, c):
        A, B, C = QSeries(a), QSeries(b), QSeries(c)
        assert (A * B) * C == A * (B * C)

    def test_pow(self):
        x = QSeries([1, 1], 6)
        assert (x ** 5).coeffs == (1, 5, 10, 10, 5, 1)
        with pytest.raises(ValueError):
            x ** -1

    def test_exact_div(self):
        assert QSeries([6, 12]).exact_div(6).coeffs == (1, 2)
        with pytest.raises(SeriesDivisionError):
            QSeries([6, 13]).exact_div(6)

    def test_prec_padding(self):
        assert QSeries([1, 2], 4).coeffs == (1, 2, 0, 0)
        assert QSeries([1, 2, 3], 2).coeffs == (1, 2)
