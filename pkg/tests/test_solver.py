import math

import pytest

import mfent as mf

LOG2 = math.log(2)
PHI = (1 + math.sqrt(5)) / 2
FAST = ((4, 4), (8, 8), (10, 10))


class TestCriticalExponent:
    def test_linear_function(self):
        # log value = 2 - t crosses zero at t = 2
        root = mf.critical_exponent(lambda t: 2.0 - t, (0.0, 1.0))
        assert root == pytest.approx(2.0, abs=1e-8)

    def test_bracket_expansion_both_sides(self):
        root = mf.critical_exponent(lambda t: -5.0 - t, (0.0, 1.0))
        assert root == pytest.approx(-5.0, abs=1e-8)

    def test_identically_zero_value(self):
        assert mf.critical_exponent(lambda t: -math.inf, (0.0, 1.0)) == -math.inf

    def test_blown_up_value(self):
        assert mf.critical_exponent(lambda t: math.inf, (0.0, 1.0)) == math.inf

    def test_steep_transition(self):
        root = mf.critical_exponent(lambda t: -1e6 * (t - 0.3), (0.0, 1.0), tol=1e-10)
        assert root == pytest.approx(0.3, abs=1e-9)


class TestFullShiftEntropy:
    def test_fair_coin_counting(self, fair, full2):
        Y = mf.CylinderSet(full2, [()])
        est = mf.bowen_entropy(fair, Y, 0.0, schedule=FAST)
        assert est.value == pytest.approx(LOG2, abs=1e-2)
        assert est.N_used == 10

    def test_mass_exponent_vanishes(self, biased, full2):
        # q=1 discounts by exactly the mass, so the exponent is 0
        Y = mf.CylinderSet(full2, [()])
        est = mf.bowen_entropy(biased, Y, 1.0, schedule=FAST)
        assert est.value == pytest.approx(0.0, abs=1e-2)

    def test_gauge_scaling_on_fair_coin(self, fair, full2):
        # all masses 2^{-n}: exponent is (1 - q) log 2 for every q
        Y = mf.CylinderSet(full2, [()])
        for q in (-1.0, 0.5, 2.0):
            est = mf.bowen_entropy(fair, Y, q, schedule=FAST)
            assert est.value == pytest.approx((1 - q) * LOG2, abs=2e-2)

    def test_error_bar_reflects_schedule_spread(self, fair, full2):
        Y = mf.CylinderSet(full2, [()])
        est = mf.bowen_entropy(fair, Y, 0.0, schedule=FAST)
        assert est.error_bar < 0.05


class TestSubshift:
    def test_golden_mean_growth(self, parry, golden):
        Y = mf.CylinderSet(golden, [()])
        est = mf.bowen_entropy(parry, Y, 0.0, schedule=FAST)
        assert est.value == pytest.approx(math.log(PHI), abs=2e-2)

    def test_packing_variants_agree_on_whole_space(self, parry, golden):
        Y = mf.CylinderSet(golden, [()])
        delta = mf.packing_entropy_delta(parry, Y, 0.0, schedule=FAST)
        refined = mf.packing_entropy(parry, Y, 0.0, schedule=FAST)
        assert refined.value == pytest.approx(delta.value, abs=1e-9)


class TestRestrictedSets:
    def test_single_cylinder_same_exponent(self, fair, full2):
        # a cylinder pins one symbol: 2^{N-1} words at order N, so the
        # exponent at N = D = 10 is exactly (9/10) log 2, approaching log 2
        K = mf.CylinderSet(full2, [(0,)])
        est = mf.bowen_entropy(fair, K, 0.0, schedule=FAST)
        assert est.value == pytest.approx(0.9 * LOG2, abs=1e-6)

    def test_covering_below_packing_exponent(self, biased, full2):
        K = mf.CylinderSet(full2, [(0, 0), (1, 0)])
        for q in (0.0, 2.0):
            b = mf.bowen_entropy(biased, K, q, schedule=FAST)
            p = mf.packing_entropy_delta(biased, K, q, schedule=FAST)
            assert b.value <= p.value + 1e-6

    def test_refined_packing_below_raw(self, biased, full2):
        K = mf.CylinderSet(full2, [(0,), (1, 0, 1)])
        for q in (0.0, 2.0):
            raw = mf.packing_entropy_delta(biased, K, q, schedule=FAST)
            refined = mf.packing_entropy(biased, K, q, schedule=FAST)
            assert refined.value <= raw.value + 1e-9


class TestDoublingGate:
    def test_unbounded_model_rejected_for_positive_q(self, full2):
        degenerate = mf.Bernoulli(full2, [1.0, 0.0])
        Y = mf.CylinderSet(full2, [()])
        with pytest.raises(mf.BracketError):
            mf.bowen_entropy(degenerate, Y, 2.0, schedule=FAST)

    def test_unbounded_model_fine_at_zero_q(self, full2):
        degenerate = mf.Bernoulli(full2, [1.0, 0.0])
        Y = mf.CylinderSet(full2, [()])
        est = mf.bowen_entropy(degenerate, Y, 0.0, schedule=FAST)
        assert est.value == pytest.approx(LOG2, abs=1e-2)

    def test_mixture_uses_empirical_probe(self, fair, biased, full2):
        mx = mf.mixture(fair, biased, 0.5)
        Y = mf.CylinderSet(full2, [()])
        est = mf.bowen_entropy(mx, Y, 2.0, schedule=FAST)
        assert math.isfinite(est.value)


class TestDegenerateFlag:
    def test_flat_value_flags_degenerate(self, full2):
        # the pre-measure of a zero-mass cylinder under q=2 is identically 0
        degenerate = mf.Bernoulli(full2, [1.0, 0.0])
        K = mf.CylinderSet(full2, [(1,)])
        est = mf.packing_entropy_delta(degenerate, K, 2.0, schedule=FAST)
        assert est.value == -math.inf or est.degenerate
