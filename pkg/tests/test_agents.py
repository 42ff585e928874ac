"""Agent model: strategies, blending, trust dynamics, sampling.

The worked examples freeze expected values computed by hand (the arithmetic
is written out in comments next to each constant), independently of the
implementation; property tests then pin the invariants over wide input
ranges.
"""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from floodwatch import (
    ConfigurationError,
    Distribution,
    PopulationConfig,
    Resident,
    RiskStrategy,
    TrustParams,
    VigilanceColour,
    sample_population,
    sample_resident,
)

# Hand-computed expectations for trust = 0.4, official risk = 75,
# remembered orange-day rainfall [80, 3, 12] (oldest to newest):
#   pessimistic: max = 80 -> 0.4*75 + 0.6*80 = 30 + 48        = 78.0
#   optimistic:  min = 3  -> 0.4*75 + 0.6*3  = 30 + 1.8       = 31.8
#   rational:    mean = 95/3 -> 30 + 0.6*95/3 = 30 + 19       = 49.0
#   short memory: last = 12 -> 0.4*75 + 0.6*12 = 30 + 7.2     = 37.2
BLEND_CASES = [
    (RiskStrategy.PESSIMISTIC, 78.0),
    (RiskStrategy.OPTIMISTIC, 31.8),
    (RiskStrategy.RATIONAL, 49.0),
    (RiskStrategy.SHORT_MEMORY, 37.2),
]

# Hand-computed trust updates from trust = 0.8 with default parameters
# (tolerance 10, severity scale 100, rates 0.40 / 0.15, gain 0.02):
#   under-announced: expected 75, observed 139.8 -> deviation +64.8,
#     excess 54.8, loss 0.40*54.8/100 = 0.2192          -> 0.5808
#   false alarm: expected 75, observed 2 -> deviation -73,
#     excess 63, loss 0.15*63/100 = 0.0945              -> 0.7055
#   near miss: expected 75, observed 80 -> |deviation| = 5 <= 10, +0.02 -> 0.82
TRUST_CASES = [
    (75.0, 139.8, 0.5808),
    (75.0, 2.0, 0.7055),
    (75.0, 80.0, 0.82),
]


def make_resident(strategy=RiskStrategy.RATIONAL, trust=0.5, threshold=50.0, depth=3):
    return Resident(
        resident_id=0,
        trust=trust,
        risk_aversion_threshold=threshold,
        memory_depth=depth,
        strategy=strategy,
    )


class TestSubjectiveRisk:
    def test_empty_memory_returns_fallback(self):
        resident = make_resident()
        assert resident.subjective_risk(VigilanceColour.ORANGE, 75.0) == 75.0

    def test_negative_fallback_rejected(self):
        with pytest.raises(ValueError):
            make_resident().subjective_risk(VigilanceColour.GREEN, -1.0)

    @pytest.mark.parametrize("strategy,expected", BLEND_CASES)
    def test_blend_worked_examples(self, strategy, expected):
        resident = make_resident(strategy=strategy, trust=0.4)
        for rain in (80.0, 3.0, 12.0):
            resident.record_observation(VigilanceColour.ORANGE, rain)
        got = resident.form_expectation(VigilanceColour.ORANGE, 75.0)
        assert got == pytest.approx(expected, rel=1e-12)
        assert resident.last_expected_rain == got

    @given(
        events=st.lists(st.floats(0.0, 500.0), min_size=1, max_size=12),
    )
    def test_strategy_ordering(self, events):
        residents = {
            s: make_resident(strategy=s, depth=len(events)) for s in RiskStrategy
        }
        for resident in residents.values():
            for rain in events:
                resident.record_observation(VigilanceColour.YELLOW, rain)
        risks = {
            s: residents[s].subjective_risk(VigilanceColour.YELLOW, 0.0)
            for s in RiskStrategy
        }
        assert risks[RiskStrategy.OPTIMISTIC] <= risks[RiskStrategy.RATIONAL]
        assert risks[RiskStrategy.RATIONAL] <= risks[RiskStrategy.PESSIMISTIC]
        assert risks[RiskStrategy.SHORT_MEMORY] == events[-1]
        assert risks[RiskStrategy.OPTIMISTIC] == min(events)
        assert risks[RiskStrategy.PESSIMISTIC] == max(events)

    def test_memory_is_bounded_fifo_per_colour(self):
        resident = make_resident(depth=2, strategy=RiskStrategy.OPTIMISTIC)
        for rain in (30.0, 20.0, 10.0):
            resident.record_observation(VigilanceColour.ORANGE, rain)
        # Depth 2 keeps only the newest two events; the 30 fell out.
        assert list(resident.memory[VigilanceColour.ORANGE]) == [20.0, 10.0]
        resident.record_observation(VigilanceColour.GREEN, 1.0)
        assert list(resident.memory[VigilanceColour.ORANGE]) == [20.0, 10.0]
        assert list(resident.memory[VigilanceColour.GREEN]) == [1.0]


class TestExpectationBlending:
    @given(
        trust=st.floats(0.0, 1.0),
        official=st.floats(0.0, 300.0),
        events=st.lists(st.floats(0.0, 400.0), min_size=1, max_size=6),
    )
    def test_blend_is_linear_in_trust(self, trust, official, events):
        resident = make_resident(strategy=RiskStrategy.PESSIMISTIC, trust=trust, depth=6)
        for rain in events:
            resident.record_observation(VigilanceColour.RED, rain)
        subjective = max(events)
        expected = resident.form_expectation(VigilanceColour.RED, official)
        reference = trust * official + (1.0 - trust) * subjective
        assert expected == reference

    def test_full_trust_returns_official_exactly(self):
        resident = make_resident(trust=1.0)
        resident.record_observation(VigilanceColour.ORANGE, 123.4)
        assert resident.form_expectation(VigilanceColour.ORANGE, 75.0) == 75.0

    def test_zero_trust_returns_subjective_exactly(self):
        resident = make_resident(trust=0.0, strategy=RiskStrategy.SHORT_MEMORY)
        resident.record_observation(VigilanceColour.ORANGE, 123.4)
        assert resident.form_expectation(VigilanceColour.ORANGE, 75.0) == 123.4

    def test_fallback_defaults_to_official_risk(self):
        # A resident with no memory of the colour expects exactly the
        # official figure regardless of trust.
        for trust in (0.0, 0.3, 1.0):
            resident = make_resident(trust=trust)
            assert resident.form_expectation(VigilanceColour.RED, 150.0) == 150.0


class TestTrustUpdate:
    @pytest.mark.parametrize("expected,observed,result", TRUST_CASES)
    def test_worked_examples(self, expected, observed, result):
        resident = make_resident(trust=0.8)
        resident.last_expected_rain = expected
        assert resident.update_trust(observed, TrustParams()) == pytest.approx(
            result, rel=1e-12
        )

    def test_requires_prior_expectation(self):
        with pytest.raises(ValueError):
            make_resident().update_trust(10.0, TrustParams())

    def test_gain_capped_at_one(self):
        resident = make_resident(trust=0.995)
        resident.last_expected_rain = 10.0
        assert resident.update_trust(10.0, TrustParams()) == 1.0

    def test_loss_floored_at_zero(self):
        resident = make_resident(trust=0.01)
        resident.last_expected_rain = 0.0
        assert resident.update_trust(500.0, TrustParams()) == 0.0

    @given(
        trust=st.floats(0.0, 1.0),
        expected=st.floats(0.0, 300.0),
        observed=st.floats(0.0, 300.0),
    )
    def test_trust_stays_in_unit_interval(self, trust, expected, observed):
        resident = make_resident(trust=trust)
        resident.last_expected_rain = expected
        assert 0.0 <= resident.update_trust(observed, TrustParams()) <= 1.0

    @given(
        trust=st.floats(0.05, 1.0),
        tolerance=st.floats(0.0, 30.0),
        gap=st.floats(0.5, 200.0),
    )
    def test_missed_event_costs_more_than_false_alarm(self, trust, tolerance, gap):
        # Same distance beyond tolerance on both sides; the under-announced
        # side must lose at least as much, strictly when nothing clamps.
        params = TrustParams(surprise_tolerance=tolerance)
        expected = 250.0
        missed = make_resident(trust=trust)
        missed.last_expected_rain = expected
        missed.update_trust(expected + tolerance + gap, params)
        false_alarm = make_resident(trust=trust)
        false_alarm.last_expected_rain = expected
        false_alarm.update_trust(expected - tolerance - gap, params)
        assert missed.trust <= false_alarm.trust
        if false_alarm.trust > 0.0:
            assert missed.trust < false_alarm.trust

    def test_symmetric_tolerance_gains_on_both_sides(self):
        params = TrustParams()
        for observed in (65.0, 85.0):
            resident = make_resident(trust=0.5)
            resident.last_expected_rain = 75.0
            assert resident.update_trust(observed, params) == 0.52

    def test_parameter_invariants_enforced(self):
        with pytest.raises(ConfigurationError):
            TrustParams(gain_slight=0.2)
        with pytest.raises(ConfigurationError):
            TrustParams(gain_slight=0.0)
        with pytest.raises(ConfigurationError):
            TrustParams(loss_missed_rate=0.1, loss_false_alarm_rate=0.15)
        with pytest.raises(ConfigurationError):
            TrustParams(severity_scale=0.0)
        with pytest.raises(ConfigurationError):
            TrustParams(surprise_tolerance=-1.0)


class TestEvacuation:
    def test_threshold_is_inclusive(self):
        resident = make_resident(threshold=50.0)
        assert not resident.decide_evacuation(49.999)
        assert resident.decide_evacuation(50.0)

    def test_absorbing_until_reset(self):
        resident = make_resident(threshold=50.0)
        assert resident.decide_evacuation(80.0)
        # Later calm expectations do not bring the resident back by themselves.
        assert resident.decide_evacuation(0.0)
        resident.evacuated = False
        assert not resident.decide_evacuation(0.0)


class TestSampling:
    def test_same_config_reproduces_population(self):
        config = PopulationConfig(size=40, seed=123)
        first = sample_population(config)
        second = sample_population(config)
        assert [(r.trust, r.risk_aversion_threshold, r.memory_depth, r.strategy) for r in first] \
            == [(r.trust, r.risk_aversion_threshold, r.memory_depth, r.strategy) for r in second]

    def test_resident_draws_do_not_depend_on_population_size(self):
        small = PopulationConfig(size=5, seed=99)
        large = PopulationConfig(size=500, seed=99)
        for index in range(5):
            a = sample_resident(small, index)
            b = sample_resident(large, index)
            assert (a.trust, a.risk_aversion_threshold, a.memory_depth, a.strategy) == (
                b.trust,
                b.risk_aversion_threshold,
                b.memory_depth,
                b.strategy,
            )

    def test_negative_seed_is_valid(self):
        config = PopulationConfig(size=3, seed=-7)
        assert sample_population(config) == sample_population(config)

    def test_attributes_respect_bounds(self):
        config = PopulationConfig(
            size=300,
            trust_init=Distribution.uniform(0.2, 0.6),
            risk_aversion_threshold=Distribution.uniform(30.0, 40.0),
            memory_depth=Distribution.uniform(2, 4),
            strategy_weights=(0.0, 0.0, 1.0, 0.0),
            seed=5,
        )
        for resident in sample_population(config):
            assert 0.2 <= resident.trust <= 0.6
            assert 30.0 <= resident.risk_aversion_threshold <= 40.0
            assert resident.memory_depth in (2, 3, 4)
            assert resident.strategy is RiskStrategy.RATIONAL

    def test_integer_distribution_covers_both_ends(self):
        config = PopulationConfig(size=200, memory_depth=Distribution.uniform(2, 3), seed=11)
        depths = {r.memory_depth for r in sample_population(config)}
        assert depths == {2, 3}

    def test_index_outside_population_rejected(self):
        config = PopulationConfig(size=3, seed=0)
        with pytest.raises(ValueError):
            sample_resident(config, 3)

    def test_config_validation(self):
        with pytest.raises(ConfigurationError):
            PopulationConfig(size=0)
        with pytest.raises(ConfigurationError):
            PopulationConfig(size=5, trust_init=Distribution.uniform(0.5, 1.2))
        with pytest.raises(ConfigurationError):
            PopulationConfig(size=5, memory_depth=Distribution.uniform(0, 3))
        with pytest.raises(ConfigurationError):
            PopulationConfig(size=5, memory_depth=Distribution.uniform(1.5, 3))
        with pytest.raises(ConfigurationError):
            PopulationConfig(size=5, strategy_weights=(0.5, 0.5, 0.5, -0.5))
        with pytest.raises(ConfigurationError):
            PopulationConfig(size=5, strategy_weights=(0.3, 0.3, 0.3, 0.2))
        with pytest.raises(ConfigurationError):
            Distribution.uniform(5.0, 1.0)

    def test_strategy_weights_are_respected(self):
        config = PopulationConfig(size=400, strategy_weights=(0.0, 1.0, 0.0, 0.0), seed=2)
        assert {r.strategy for r in sample_population(config)} == {RiskStrategy.PESSIMISTIC}


class TestColoursAndTokens:
    def test_colour_order(self):
        assert (
            VigilanceColour.GREEN
            < VigilanceColour.YELLOW
            < VigilanceColour.ORANGE
            < VigilanceColour.RED
        )

    def test_token_round_trip(self):
        for colour in VigilanceColour:
            assert VigilanceColour.from_token(colour.token) is colour
        with pytest.raises(ValueError):
            VigilanceColour.from_token("purple")

    def test_strategy_tokens(self):
        for strategy in RiskStrategy:
            assert RiskStrategy.from_token(strategy.token) is strategy
