import math

import numpy as np
import pytest

from shiftconv.numerics import canonical_window
from shiftconv.summation import (
    TwistScan,
    VoronoiTruncationError,
    additive_twist,
    log_cut,
    poisson_lhs,
    poisson_verify,
    twist_scan,
    voronoi_integral,
    voronoi_rhs,
    voronoi_verify,
)

# mpmath at 30 digits with an independent bump, frozen
POISSON_LHS_1_3_50 = 5.9774609439516398994e-7
VORONOI_INT_11_3_2_500 = -5.0637776306229698896e-7


class TestPoisson:
    def test_lhs_oracle(self):
        lhs, mass = poisson_lhs(canonical_window(), 50, 1, 3)
        assert abs(lhs - POISSON_LHS_1_3_50) < 1e-15
        assert mass > 0.35

    @pytest.mark.parametrize("a,q,X", [(0, 1, 50.0), (1, 2, 200.0), (2, 7, 1000.0), (9, 10, 50.0)])
    def test_identity(self, a, q, X):
        r = poisson_verify(None, X, a, q)
        assert r.rel_error < 1e-12
        assert r.tail < 1e-10
        assert r.quad_error < 1e-11 * r.mass

    def test_trivial_modulus_is_mass(self):
        # q = 1 and X large: sum W(n/X) = X W-hat(0) up to the dual tail
        r = poisson_verify(None, 1000.0, 0, 1)
        assert r.lhs.real == pytest.approx(1000 * 0.007029858406609657, rel=1e-13)

    def test_cut_grows_with_q(self):
        cuts = [poisson_verify(None, 200.0, 1, q).cut for q in (2, 5, 10)]
        assert cuts == sorted(cuts)

    def test_noncoprime(self):
        with pytest.raises(ValueError):
            poisson_verify(None, 50.0, 2, 4)
        with pytest.raises(ValueError):
            poisson_verify(None, 50.0, 0, 0)

    def test_log_cut(self):
        assert log_cut(math.e ** 2, 1.0) == pytest.approx(8.0)
        assert log_cut(0.5, 2.0) == 2.0  # clamped below at e


class TestVoronoi:
    def test_integral_oracle(self):
        v, err = voronoi_integral(11, 3, 2, canonical_window(), 500.0)
        assert abs(v - VORONOI_INT_11_3_2_500) < 1e-15
        assert err < 1e-14

    @pytest.mark.parametrize("weight", [12, 16])
    def test_identity_q1(self, weight):
        from shiftconv.forms.eigenform import eigenform

        r = voronoi_verify(eigenform(weight, 4001), 1, 1, 100.0)
        assert r.rel_error < 1e-8
        assert r.tail < 1e-10
        assert r.cut >= r.base_cut

    def test_residue_inversion(self, delta10k):
        # a and a' with the same inverse give the same dual sum
        r1 = voronoi_verify(delta10k, 2, 3, 150.0)
        assert r1.rel_error < 1e-8

    def test_truncation_error_carries_partial(self, delta10k):
        with pytest.raises(VoronoiTruncationError) as info:
            voronoi_rhs(delta10k, 1, 1, X=100.0, C=0.01, tail_tol=1e-300, max_doublings=1)
        assert np.isfinite(abs(info.value.partial))

    def test_precision_guard(self):
        from shiftconv.forms.eigenform import eigenform

        with pytest.raises(ValueError, match="precision"):
            voronoi_verify(eigenform(12, 150), 1, 1, 100.0)


class TestTwist:
    def test_alpha_zero_is_partial_sum(self, delta10k):
        assert additive_twist(delta10k, 0.0, 50).real == pytest.approx(math.fsum(delta10k.normalized[1:51]), abs=1e-13)

    def test_alpha_integer_periodic(self, delta10k):
        assert abs(additive_twist(delta10k, 0.25, 400) - additive_twist(delta10k, 1.25, 400)) < 1e-9

    def test_scan(self, delta10k):
        scan = TwistScan.random(40, [1000, 3000, 10000], seed=7)
        r = twist_scan(delta10k, scan)
        assert r.values.shape == (40, 3)
        assert r.sup_ratio[-1] <= r.sup_ratio[0]
        assert np.all(r.zero_ratio < 1)
        direct = additive_twist(delta10k, scan.alphas[3], 3000)
        assert abs(r.values[3, 1] - direct) < 1e-10

    def test_seeded(self):
        a = TwistScan.random(5, [10], seed=1).alphas
        assert a == TwistScan.random(5, [10], seed=1).alphas
        assert a != TwistScan.random(5, [10], seed=2).alphas

    def test_empty_scan(self):
        with pytest.raises(ValueError):
            TwistScan([], [10])

    def test_range_guard(self, delta_small):
        with pytest.raises(ValueError):
            additive_twist(delta_small, 0.1, 5000)
