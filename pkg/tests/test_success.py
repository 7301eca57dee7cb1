"""Tests for the success definitions, Monte Carlo, and the closed form."""

import math

import mpmath
import numpy as np
import pytest

from audiencefit.model import FieldParams, PersonProfile
from audiencefit.sampling import DeviationSpec
from audiencefit.success import (
    DistanceDistribution,
    SuccessCriteria,
    closed_form_success_probability,
    estimate_success_probability,
    group_success_report,
    mean_lp_norm,
    potential_success,
    sample_distance_matrix,
    strong_success,
    sup_norm,
    weak_success,
)

D_ALT = (0.5, -0.5, 0.5, 0.5, -0.5, 0.5)
D_SPIKE = (1.1, 0.0, 0.0, 0.0, 0.0, 0.0)


def normal_pair(center, sd_each, k=6):
    """Distance distribution with the randomness split over both sides."""
    spec = DeviationSpec(scale=(sd_each / math.sqrt(2),) * k)
    return DistanceDistribution(center=(center,) * k, analyst=spec, audience=(spec,))


class TestStrongSuccess:
    def test_zero_distance_always_succeeds(self):
        assert strong_success([0.0] * 6, 1e-9)

    def test_strictness_at_the_boundary(self):
        assert strong_success(D_ALT, 0.6)
        assert not strong_success(D_ALT, 0.5)

    def test_single_large_component_fails(self):
        assert not strong_success(D_SPIKE, 0.6)

    def test_epsilon_must_be_positive(self):
        with pytest.raises(ValueError):
            strong_success([0.0], 0.0)


class TestWeakSuccess:
    def test_zero_distance(self):
        assert weak_success([0.0] * 4, 1e-12, 1.0)

    def test_hand_evaluation_of_averaged_norm(self):
        # sqrt(1.21 / 6) = 0.449072...
        assert mean_lp_norm(D_SPIKE, 2.0) == pytest.approx(
            math.sqrt(1.21 / 6), abs=1e-12
        )
        assert weak_success(D_SPIKE, 0.6, 2.0)

    def test_p_below_one_rejected(self):
        with pytest.raises(ValueError, match=">= 1"):
            weak_success([0.1], 0.5, 0.99)

    def test_strong_implies_weak_on_random_triples(self):
        rng = np.random.default_rng(77)
        for _ in range(1000):
            d = rng.normal(scale=2.0, size=rng.integers(1, 9))
            eps = float(rng.uniform(0.05, 3.0))
            p = float(rng.choice([1.0, 2.0, 4.0]))
            if strong_success(d, eps):
                assert weak_success(d, eps, p)

    def test_norm_nondecreasing_in_p(self):
        rng = np.random.default_rng(78)
        for _ in range(1000):
            d = rng.normal(scale=2.0, size=6)
            ps = sorted(rng.uniform(1.0, 20.0, size=3))
            norms = [mean_lp_norm(d, p) for p in ps]
            assert norms[0] <= norms[1] + 1e-12 <= norms[2] + 2e-12

    def test_inf_sentinel_reproduces_strong_exactly(self):
        rng = np.random.default_rng(79)
        for _ in range(1000):
            d = rng.normal(scale=1.5, size=6)
            eps = float(rng.uniform(0.1, 3.0))
            assert weak_success(d, eps, math.inf) == strong_success(d, eps)
            assert mean_lp_norm(d, math.inf) == sup_norm(d)

    def test_large_p_does_not_overflow(self):
        assert math.isfinite(mean_lp_norm([900.0, 1.0], 400.0))


class TestPotentialSuccess:
    def test_exact_zero_at_zero_tolerance(self):
        assert potential_success([0.0, 0.0], 0.0)

    def test_nonzero_fails_at_zero_tolerance(self):
        assert not potential_success([0.3, 0.0], 0.0)

    def test_tolerance_absorbs_rounding(self):
        assert potential_success([1e-15] * 6, 1e-12)

    def test_negative_tolerance_rejected(self):
        with pytest.raises(ValueError):
            potential_success([0.0], -1e-9)


class TestCriteria:
    def test_defaults(self):
        c = SuccessCriteria(epsilon=0.5)
        assert c.p == 2.0
        assert c.potential_tolerance == 1e-9

    def test_validation(self):
        with pytest.raises(ValueError):
            SuccessCriteria(epsilon=-1.0)
        with pytest.raises(ValueError):
            SuccessCriteria(epsilon=0.5, p=0.5)
        with pytest.raises(ValueError):
            SuccessCriteria(epsilon=0.5, potential_tolerance=-1.0)


class TestClosedForm:
    def test_canonical_point_against_high_precision_oracle(self):
        # mpmath oracle: (Phi(1.96) - Phi(-1.96))^6 = 0.73511143517171613...
        mpmath.mp.dps = 30
        phi = lambda z: 0.5 * (1 + mpmath.erf(z / mpmath.sqrt(2)))
        oracle = float((phi(mpmath.mpf("1.96")) - phi(mpmath.mpf("-1.96"))) ** 6)
        est = closed_form_success_probability([0.0] * 6, [1.0] * 6, 1.96)
        assert est.estimate == pytest.approx(oracle, abs=1e-12)
        assert est.estimate == pytest.approx(0.7351, abs=1e-4)
        assert est.std_error == 0.0
        assert est.method == "closed-form"

    def test_degenerate_sd_is_an_indicator(self):
        assert closed_form_success_probability([0.5, -0.5], [0.0, 0.0], 0.6).estimate == 1.0
        assert closed_form_success_probability([0.7, 0.0], [0.0, 0.0], 0.6).estimate == 0.0

    def test_monotone_in_epsilon(self):
        lo = closed_form_success_probability([0.0] * 6, [1.0] * 6, 1.0).estimate
        hi = closed_form_success_probability([0.0] * 6, [1.0] * 6, 2.0).estimate
        assert hi > lo

    def test_negative_sd_rejected(self):
        with pytest.raises(ValueError):
            closed_form_success_probability([0.0], [-1.0], 1.0)


class TestMonteCarlo:
    def test_no_randomness_zero_center_gives_exactly_one(self):
        dist = DistanceDistribution(
            center=(0.0,) * 6,
            analyst=DeviationSpec.zero(6),
            audience=(DeviationSpec.zero(6),),
        )
        est = estimate_success_probability(dist, SuccessCriteria(epsilon=0.5), "strong", 0, 1000)
        assert est.estimate == 1.0
        assert est.std_error == 0.0

    def test_matches_closed_form_at_canonical_point(self):
        dist = normal_pair(0.0, 1.0)
        mc = estimate_success_probability(
            dist, SuccessCriteria(epsilon=1.96), "strong", 7, 100_000
        )
        cf = closed_form_success_probability([0.0] * 6, dist.total_sd(), 1.96)
        assert abs(mc.estimate - cf.estimate) < 3 * mc.std_error

    def test_huge_epsilon_gives_one(self):
        dist = normal_pair(0.0, 1.0)
        est = estimate_success_probability(dist, SuccessCriteria(epsilon=100.0), "strong", 3, 500)
        assert est.estimate == 1.0

    def test_replicate_floor_enforced(self):
        with pytest.raises(ValueError, match="at least 100"):
            estimate_success_probability(
                normal_pair(0.0, 1.0), SuccessCriteria(epsilon=1.0), "strong", 0, 99
            )

    def test_deterministic_given_seed(self):
        dist = normal_pair(0.3, 0.8)
        crit = SuccessCriteria(epsilon=1.0)
        a = estimate_success_probability(dist, crit, "weak", 21, 5000)
        b = estimate_success_probability(dist, crit, "weak", 21, 5000)
        assert a == b

    def test_weak_at_least_as_likely_as_strong(self):
        dist = normal_pair(0.2, 1.0)
        crit = SuccessCriteria(epsilon=1.0, p=2.0)
        strong = estimate_success_probability(dist, crit, "strong", 5, 20_000)
        weak = estimate_success_probability(dist, crit, "weak", 5, 20_000)
        assert weak.estimate >= strong.estimate

    def test_empirical_mean_matches_center(self):
        dist = normal_pair(0.4, 1.0)
        m = 100_000
        draws = sample_distance_matrix(dist, 13, m)
        tol = 3.0 * dist.total_sd() / math.sqrt(m)
        assert (np.abs(draws.mean(axis=0) - 0.4) < tol).all()

    def test_no_component_is_ever_exactly_zero(self):
        # continuous deviations: zero distance has probability zero
        dist = normal_pair(0.0, 1.0)
        draws = sample_distance_matrix(dist, 19, 100_000)
        assert np.count_nonzero(draws == 0.0) == 0

    def test_audience_averaging_tightens_the_distribution(self):
        spec = DeviationSpec(scale=(1.0,) * 6)
        solo = DistanceDistribution(center=(0.0,) * 6, analyst=None, audience=(spec,))
        crowd = DistanceDistribution(
            center=(0.0,) * 6, analyst=None, audience=(spec,) * 25
        )
        assert crowd.total_sd()[0] == pytest.approx(solo.total_sd()[0] / 5, abs=1e-12)

    def test_uniform_deviations_break_all_normal(self):
        uni = DeviationSpec(scale=(1.0,) * 2, distribution="uniform")
        dist = DistanceDistribution(center=(0.0,) * 2, analyst=None, audience=(uni,))
        assert not dist.all_normal()
        zero_uni = DeviationSpec(scale=(0.0,) * 2, distribution="uniform")
        assert DistanceDistribution(
            center=(0.0,) * 2, analyst=None, audience=(zero_uni,)
        ).all_normal()


class TestGroupSuccessReport:
    # the three field means average exactly to the middle one
    FIELDS = {
        "mid": FieldParams("mid", (0.5,), (0.0,)),
        "lo": FieldParams("lo", (0.0,), (0.0,)),
        "hi": FieldParams("hi", (1.0,), (0.0,)),
    }
    CRITERIA = SuccessCriteria(epsilon=0.75, potential_tolerance=0.0)

    def test_identical_members_match_pairwise_report(self):
        analyst = PersonProfile("analyst", "mid", (0.05,))
        member = PersonProfile("audience", "lo", (0.1,))
        solo = group_success_report(analyst, [member], self.FIELDS, self.CRITERIA)
        trio = group_success_report(analyst, [member] * 3, self.FIELDS, self.CRITERIA)
        assert trio.distance.d == solo.distance.d
        assert (trio.strong, trio.weak, trio.potential) == (
            solo.strong,
            solo.weak,
            solo.potential,
        )
        assert not solo.group_extrapolated
        assert trio.group_extrapolated

    def test_offsets_cancel_in_the_group_mean(self):
        analyst = PersonProfile("analyst", "mid", (0.0,))
        below = PersonProfile("audience", "lo", (0.0,))
        above = PersonProfile("audience", "hi", (0.0,))
        report = group_success_report(analyst, [below, above], self.FIELDS, self.CRITERIA)
        assert report.potential
        assert report.distance.d == (0.0,)

    def test_mixed_fields_where_no_pairwise_potential_holds(self):
        # field means 0.0, 0.4, 0.8 average to the analyst's 0.4
        analyst = PersonProfile("analyst", "mid", (0.0,))
        members = [
            PersonProfile("audience", "lo", (0.0,)),
            PersonProfile("audience", "mid", (0.0,)),
            PersonProfile("audience", "hi", (0.0,)),
        ]
        for member in (members[0], members[2]):
            pairwise = group_success_report(analyst, [member], self.FIELDS, self.CRITERIA)
            assert not pairwise.potential
        grouped = group_success_report(analyst, members, self.FIELDS, self.CRITERIA)
        assert grouped.potential

    def test_empty_audience_rejected(self):
        analyst = PersonProfile("analyst", "mid", (0.0,))
        with pytest.raises(ValueError, match="at least one"):
            group_success_report(analyst, [], self.FIELDS, self.CRITERIA)
