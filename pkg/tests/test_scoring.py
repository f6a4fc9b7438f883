"""Aggregate arithmetic, score merging, and convergence classification."""

from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from indigo.errors import ValidationError
from indigo.model import ScoreValue, ScoreVector, normalize_weights
from indigo.scoring import (
    AggregateScore,
    ConvergenceConfig,
    ConvergenceState,
    aggregate_score,
    check_convergence,
    merge_participant_scores,
    score_delta,
)


def brute_merge_one(halves: list[int]) -> int:
    """Independent oracle: exact rational mean, nearest half-unit, tie up."""
    mean = Fraction(sum(halves), len(halves))
    floor = math.floor(mean)
    frac = mean - floor
    if frac > Fraction(1, 2) or frac == Fraction(1, 2):
        return floor + 1
    return floor


def random_vector(rng: random.Random) -> ScoreVector:
    return ScoreVector(tuple(ScoreValue(rng.randint(0, 20)) for _ in range(3)))


def random_weights(rng: random.Random, positive: bool = False):
    lo = 0.01 if positive else 0.0
    raw = [rng.uniform(lo, 1.0) for _ in range(3)]
    if sum(raw) == 0:
        raw[0] = 1.0
    return normalize_weights(tuple(raw))


class TestAggregate:
    def test_identity_at_top(self):
        top = ScoreVector.of(10, 10, 10)
        for raw in [(1, 1, 1), (5, 2, 1), (0.1, 0.7, 0.2)]:
            assert aggregate_score(top, normalize_weights(raw)).value == pytest.approx(10.0)

    def test_worked_example(self):
        # 0.5*8 + 0.25*6 + 0.25*7 = 4 + 1.5 + 1.75
        value = aggregate_score(ScoreVector.of(8, 6, 7), normalize_weights((2, 1, 1))).value
        assert value == pytest.approx(7.25)

    def test_midpoint_maps_to_midpoint(self):
        value = aggregate_score(ScoreVector.of(5, 5, 5), normalize_weights((1, 1, 1))).value
        assert value == pytest.approx(5.0)

    def test_bounds_random(self):
        rng = random.Random(42)
        for _ in range(2000):
            value = aggregate_score(random_vector(rng), random_weights(rng)).value
            assert 0.0 <= value <= 10.0

    def test_monotone_in_each_criterion(self):
        rng = random.Random(43)
        for _ in range(500):
            sv = random_vector(rng)
            weights = random_weights(rng, positive=True)
            i = rng.randrange(3)
            if sv.scores[i].half_units == 20:
                continue
            bumped = list(sv.scores)
            bumped[i] = ScoreValue(sv.scores[i].half_units + rng.randint(1, 20 - sv.scores[i].half_units))
            assert aggregate_score(ScoreVector(tuple(bumped)), weights).value > aggregate_score(sv, weights).value

    def test_permutation_symmetry_under_equal_weights(self):
        rng = random.Random(44)
        weights = normalize_weights((1, 1, 1))
        for _ in range(500):
            s = [rng.randint(0, 20) for _ in range(3)]
            base = aggregate_score(ScoreVector(tuple(ScoreValue(h) for h in s)), weights).value
            for perm in [(0, 2, 1), (1, 0, 2), (2, 1, 0), (1, 2, 0), (2, 0, 1)]:
                permuted = ScoreVector(tuple(ScoreValue(s[p]) for p in perm))
                assert aggregate_score(permuted, weights).value == pytest.approx(base, abs=1e-12)

    def test_out_of_range_aggregate_rejected(self):
        with pytest.raises(ValidationError):
            AggregateScore(10.5)


class TestMerge:
    def test_mean_of_two(self):
        merged = merge_participant_scores([ScoreVector.of(7, 7, 7), ScoreVector.of(8, 8, 8)])
        assert merged == ScoreVector.of(7.5, 7.5, 7.5)

    def test_single_is_identity(self):
        sv = ScoreVector.of(6.5, 3.0, 9.0)
        assert merge_participant_scores([sv]) == sv

    def test_tie_rounds_up_and_thirds_round_nearest(self):
        # half-units 14, 15 -> mean 14.5 -> 15 (7.5)
        merged = merge_participant_scores([ScoreVector.of(7.0, 0, 0), ScoreVector.of(7.5, 0, 0)])
        assert merged.scores[0] == ScoreValue(15)
        # half-units 12, 13, 14 -> mean 13 -> 6.5
        merged = merge_participant_scores(
            [ScoreVector.of(6.0, 0, 0), ScoreVector.of(6.5, 0, 0), ScoreVector.of(7.0, 0, 0)]
        )
        assert merged.scores[0] == ScoreValue(13)

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            merge_participant_scores([])

    def test_matches_brute_force_and_stays_in_bounds(self):
        rng = random.Random(45)
        for _ in range(2000):
            n = rng.randint(1, 6)
            subs = [random_vector(rng) for _ in range(n)]
            merged = merge_participant_scores(subs)
            for i in range(3):
                halves = [s.scores[i].half_units for s in subs]
                assert merged.scores[i].half_units == brute_merge_one(halves)
                assert min(halves) <= merged.scores[i].half_units <= max(halves)


class TestDelta:
    def test_examples(self):
        assert score_delta(7.0, 7.2) == pytest.approx(0.2)
        assert score_delta(3.3, 3.3) == 0.0
        assert score_delta(2.0, 9.0) == pytest.approx(7.0)

    @given(st.floats(min_value=0, max_value=10), st.floats(min_value=0, max_value=10))
    def test_symmetry(self, a, b):
        assert score_delta(a, b) == score_delta(b, a)

    def test_accepts_aggregate_objects(self):
        assert score_delta(AggregateScore(1.0), AggregateScore(3.5)) == pytest.approx(2.5)


class TestConvergence:
    def test_example_trace_converges(self):
        config = ConvergenceConfig(threshold=0.5, window=3, max_iterations=50)
        status = check_convergence([5.0, 7.0, 7.2, 7.4, 7.3], config)
        assert status.state == ConvergenceState.CONVERGED
        assert status.deltas_considered == pytest.approx((0.2, 0.2, 0.1))

    def test_gentle_climb_converges(self):
        config = ConvergenceConfig(threshold=0.5, window=3, max_iterations=50)
        status = check_convergence([6.0, 6.2, 6.3, 6.4], config)
        assert status.state == ConvergenceState.CONVERGED
        assert status.deltas_considered == pytest.approx((0.2, 0.1, 0.1))

    def test_single_entry_insufficient(self):
        config = ConvergenceConfig()
        status = check_convergence([5.0], config)
        assert status.state == ConvergenceState.INSUFFICIENT_HISTORY
        assert status.deltas_considered == ()

    def test_in_progress(self):
        config = ConvergenceConfig(threshold=0.5, window=2, max_iterations=50)
        status = check_convergence([5.0, 6.0, 7.0, 8.0], config)
        assert status.state == ConvergenceState.IN_PROGRESS

    def test_boundary_delta_not_converged(self):
        config = ConvergenceConfig(threshold=0.5, window=1, max_iterations=50)
        assert check_convergence([5.0, 5.5], config).state != ConvergenceState.CONVERGED
        assert check_convergence([5.0, 5.4999], config).state == ConvergenceState.CONVERGED

    def test_constant_history_converges(self):
        for window in (1, 2, 3, 5):
            config = ConvergenceConfig(threshold=0.5, window=window, max_iterations=window + 5)
            history = [4.0] * (window + 1)
            assert check_convergence(history, config).state == ConvergenceState.CONVERGED

    def test_iteration_cap(self):
        config = ConvergenceConfig(threshold=0.5, window=2, max_iterations=4)
        status = check_convergence([0.0, 2.0, 4.0, 6.0], config)
        assert status.state == ConvergenceState.ITERATION_CAP_REACHED

    def test_converged_wins_over_cap(self):
        config = ConvergenceConfig(threshold=0.5, window=2, max_iterations=4)
        status = check_convergence([4.0, 4.0, 4.0, 4.0], config)
        assert status.state == ConvergenceState.CONVERGED

    def test_config_invariants(self):
        with pytest.raises(ValidationError):
            ConvergenceConfig(threshold=0.0)
        with pytest.raises(ValidationError):
            ConvergenceConfig(window=0)
        with pytest.raises(ValidationError):
            ConvergenceConfig(window=3, max_iterations=3)

    def test_only_recent_window_counts(self):
        # Early noisy deltas do not block convergence once the tail is calm.
        config = ConvergenceConfig(threshold=0.5, window=2, max_iterations=50)
        status = check_convergence([0.0, 9.0, 9.1, 9.2], config)
        assert status.state == ConvergenceState.CONVERGED
