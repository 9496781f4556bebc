import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shiftconv.forms.eigenform import eigenform
from shiftconv.numerics import SmoothWindow
from shiftconv.shifted import (
    PrecisionError,
    ShiftedSumSpec,
    averaged_sum,
    character_sum,
    character_sum_bruteforce,
    single_shift_sum,
)

# mpmath at 30 digits over the integer tau table, frozen
S_SPLIT_500_30 = -4.1997265147525004809e-9
S_UNSPLIT_500_30 = -5.7674882155987071527e-5


@pytest.fixture(scope="module")
def delta1200():
    return eigenform(12, 1200)


class TestAveragedSum:
    def test_reference_split(self, delta1200):
        f = delta1200
        assert averaged_sum(ShiftedSumSpec.split((f, f, f), 500, 30)) == pytest.approx(S_SPLIT_500_30, rel=1e-13)

    def test_reference_unsplit(self, delta1200):
        f = delta1200
        assert averaged_sum(ShiftedSumSpec((f, f, f), 500, 30)) == pytest.approx(S_UNSPLIT_500_30, rel=1e-13)

    def test_orders_bit_identical(self, delta1200):
        f = delta1200
        spec = ShiftedSumSpec.split((f, f, f), 300, 20)
        assert averaged_sum(spec, "h") == averaged_sum(spec, "n")

    def test_lone_product(self):
        f = eigenform(12, 10)
        V, W1 = SmoothWindow(0.5, 1.5), SmoothWindow(0.5, 1.5)
        W2, W3 = SmoothWindow(1.5, 2.5), SmoothWindow(2.5, 3.5)
        spec = ShiftedSumSpec.split((f, f, f), 1, 1, V, W1, W2, W3)
        lone = V(1.0) * W1(1.0) * W2(2.0) * W3(3.0) * f.lam(1) * f.lam(2) * f.lam(3)
        assert averaged_sum(spec) == lone

    def test_deligne_envelope(self, delta1200):
        f = delta1200
        spec = ShiftedSumSpec((f, f, f), 400, 25)
        d = np.array([sum(1 for k in range(1, n + 1) if n % k == 0) if n else 0 for n in range(1200)])
        hs, ns = spec.h_range(), spec.n_range()
        env = sum(spec.V(h / 25) * spec.W(n / 400) * d[n] * d[n + h] * d[n + 2 * h] for h in hs for n in ns) / 25
        assert abs(averaged_sum(spec)) <= env

    def test_guards(self, delta1200):
        f = delta1200
        with pytest.raises(PrecisionError):
            ShiftedSumSpec((f, f, f), 600, 30)
        with pytest.raises(ValueError):
            ShiftedSumSpec((f, f), 100, 10)
        with pytest.raises(ValueError):
            ShiftedSumSpec((f, f, f), 100, 0)
        with pytest.raises(ValueError):
            averaged_sum(ShiftedSumSpec((f, f, f), 100, 10), order="x")

    def test_single_shift(self, delta1200):
        f = delta1200
        want = math.fsum(f.lam(n) * f.lam(n + 3) * f.lam(n + 6) for n in range(1, 101))
        assert single_shift_sum((f, f, f), 100, 3) == want
        with pytest.raises(PrecisionError):
            single_shift_sum((f, f, f), 1190, 10)


class TestCharacterSum:
    def test_example(self):
        vals = {h: character_sum(1, 1, 2, 3, h) for h in range(12)}
        assert all(v == (6 if h % 6 == 5 else 0) for h, v in vals.items())

    def test_exhaustive(self):
        for q1 in range(1, 9):
            for q2 in range(1, 9):
                for a1 in (a for a in range(q1) if math.gcd(a, q1) == 1):
                    for a2 in (a for a in range(q2) if math.gcd(a, q2) == 1):
                        for h in range(q1 * q2):
                            bf = character_sum_bruteforce(a1, a2, q1, q2, h)
                            assert abs(bf - character_sum(a1, a2, q1, q2, h)) < 1e-9

    @settings(max_examples=100)
    @given(st.integers(1, 40), st.integers(1, 40), st.integers(-500, 500), st.integers(0, 10 ** 6))
    def test_congruence_filter(self, q1, q2, h, seed):
        rng = np.random.default_rng(seed)
        a1 = next(a for a in rng.permutation(q1) if math.gcd(int(a), q1) == 1)
        a2 = next(a for a in rng.permutation(q2) if math.gcd(int(a), q2) == 1)
        a1, a2 = int(a1), int(a2)
        on = (a1 * q2 + 2 * a2 * q1 + h) % (q1 * q2) == 0
        assert character_sum(a1, a2, q1, q2, h) == (q1 * q2 if on else 0)

    def test_coprimality_required(self):
        with pytest.raises(ValueError):
            character_sum(2, 1, 4, 3, 0)
