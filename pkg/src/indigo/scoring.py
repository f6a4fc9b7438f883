"""Weighted aggregate fitness, multi-scorer merging, and convergence detection.

The aggregate is the scalar objective: the weighted sum of the three displayed
scores. Convergence fires when the most recent `window` consecutive aggregate
deltas are all strictly below the threshold. Deltas are only comparable while
the weights stay fixed; the session engine resets the window on reweighting.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from indigo.errors import ValidationError
from indigo.model import ScoreValue, ScoreVector, WeightVector


@dataclass(frozen=True)
class AggregateScore:
    """Scalar plan fitness under the current weights; always in [0, 10]."""

    value: float

    def __post_init__(self):
        if not 0.0 <= self.value <= 10.0:
            raise ValidationError(f"aggregate out of range [0, 10]: {self.value!r}")

    def __float__(self) -> float:
        return self.value


class ConvergenceState(str, Enum):
    INSUFFICIENT_HISTORY = "insufficient_history"
    IN_PROGRESS = "in_progress"
    CONVERGED = "converged"
    ITERATION_CAP_REACHED = "iteration_cap_reached"


@dataclass(frozen=True)
class ConvergenceConfig:
    threshold: float = 0.5
    window: int = 3
    max_iterations: int = 50

    def __post_init__(self):
        if not self.threshold > 0:
            raise ValidationError(f"threshold must be positive, got {self.threshold!r}")
        if self.window < 1:
            raise ValidationError(f"window must be >= 1, got {self.window}")
        if self.max_iterations < self.window + 1:
            raise ValidationError(
                f"max_iterations must be >= window + 1, got {self.max_iterations} < {self.window + 1}"
            )


@dataclass(frozen=True)
class ConvergenceStatus:
    state: ConvergenceState
    deltas_considered: tuple[float, ...]


def aggregate_score(scores: ScoreVector, weights: WeightVector) -> AggregateScore:
    """Weighted sum of displayed scores; the objective value being maximized.

    The weight sum is only 1 within 1e-9, so at the corners the raw float sum
    can stray past the bound by a hair; clamp that noise so the [0, 10]
    invariant holds exactly.
    """
    value = sum(w * s.display for w, s in zip(weights.weights, scores.scores))
    return AggregateScore(min(10.0, max(0.0, value)))


def merge_participant_scores(submissions: Sequence[ScoreVector]) -> ScoreVector:
    """Merge several scorers' vectors: per criterion, the mean of half-units
    rounded to the nearest half-unit with ties rounding up.

    Pure integer arithmetic, so the result is exact and always lies within
    [min, max] of the submissions for that criterion.
    """
    if not submissions:
        raise ValidationError("cannot merge an empty list of score submissions")
    n = len(submissions)
    merged = []
    for i in range(3):
        total = sum(sub.scores[i].half_units for sub in submissions)
        # Half-up rounding of total/n without floats: floor((2*total + n) / (2n)).
        merged.append(ScoreValue((2 * total + n) // (2 * n)))
    return ScoreVector(tuple(merged))


def score_delta(previous: AggregateScore | float, current: AggregateScore | float) -> float:
    """Absolute change of the aggregate from one iteration to the next."""
    return abs(float(current) - float(previous))


def check_convergence(
    history: Sequence[AggregateScore | float], config: ConvergenceConfig
) -> ConvergenceStatus:
    """Classify an aggregate history.

    converged: at least `window` deltas exist and the most recent `window`
    are all strictly below the threshold. The cap check uses len(history),
    so callers that reset the window on reweighting must apply their own
    cap rule to the total iteration count.
    """
    values = [float(v) for v in history]
    deltas = [abs(b - a) for a, b in zip(values, values[1:])]
    considered = tuple(deltas[-config.window :])

    if len(deltas) >= config.window and all(d < config.threshold for d in considered):
        return ConvergenceStatus(ConvergenceState.CONVERGED, considered)
    if len(values) >= config.max_iterations:
        return ConvergenceStatus(ConvergenceState.ITERATION_CAP_REACHED, considered)
    if len(values) < config.window + 1:
        return ConvergenceStatus(ConvergenceState.INSUFFICIENT_HISTORY, considered)
    return ConvergenceStatus(ConvergenceState.IN_PROGRESS, considered)
