import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from shiftconv.forms.arithmetic import (
    divisor_table,
    divisors,
    dk_table,
    euler_phi,
    factorize,
    mobius,
    mobius_table,
    phi_table,
    ramanujan_sum,
    ramanujan_sum_bruteforce,
    ramanujan_values,
    sigma_minus1,
)


def brute_d(n):
    return sum(1 for k in range(1, n + 1) if n % k == 0)


def brute_d3(n):
    return sum(brute_d(n // k) for k in range(1, n + 1) if n % k == 0)


class TestTables:
    def test_divisor_table(self):
        d = divisor_table("d", 500)
        assert d[0] == 0
        assert all(d[n] == brute_d(n) for n in range(1, 501))

    def test_dk_table(self):
        d3 = dk_table(3, 200)
        assert all(d3[n] == brute_d3(n) for n in range(1, 201))
        assert np.array_equal(dk_table(2, 300), divisor_table("d", 300))
        assert np.array_equal(divisor_table("d_k", 100, k=3), d3[:101])

    def test_dk_one_is_ones(self):
        assert np.all(dk_table(1, 50)[1:] == 1)

    def test_phi_and_mobius(self):
        ph, mu = phi_table(300), mobius_table(300)
        for n in range(1, 301):
            assert ph[n] == sum(1 for a in range(1, n + 1) if math.gcd(a, n) == 1)
            assert mu[n] == mobius(n)

    def test_mobius_sum_vanishes(self):
        for n in range(2, 200):
            assert sum(mobius(d) for d in divisors(n)) == 0

    def test_bad_kind(self):
        with pytest.raises(ValueError):
            divisor_table("sigma", 10)
        with pytest.raises(ValueError):
            divisor_table("d", 0)


class TestFactor:
    @given(st.integers(1, 10 ** 6))
    def test_factorize_roundtrip(self, n):
        assert math.prod(p ** e for p, e in factorize(n)) == n

    @given(st.integers(1, 3000), st.integers(1, 3000))
    def test_phi_multiplicative(self, m, n):
        if math.gcd(m, n) == 1:
            assert euler_phi(m * n) == euler_phi(m) * euler_phi(n)

    def test_sigma_minus1(self):
        assert sigma_minus1(1) == 1
        assert sigma_minus1(6) == Fraction(1) + Fraction(1, 2) + Fraction(1, 3) + Fraction(1, 6)


class TestRamanujan:
    @pytest.mark.parametrize("q", range(1, 31))
    def test_closed_form_vs_bruteforce(self, q):
        for n in range(-2 * q, 2 * q + 1):
            bf = ramanujan_sum_bruteforce(q, n)
            assert abs(bf.imag) < 1e-9
            assert ramanujan_sum(q, n) == round(bf.real)

    def test_special_values(self):
        assert ramanujan_sum(12, 0) == 4
        assert ramanujan_sum(7, 1) == -1
        assert ramanujan_sum(4, 2) == -2

    def test_vectorized(self):
        n = np.arange(-50, 51)
        for q in (1, 6, 9, 10):
            assert list(ramanujan_values(q, n)) == [ramanujan_sum(q, int(k)) for k in n]
