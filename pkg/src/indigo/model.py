"""Domain value types: scores on the half-point lattice, weights, schemas.

All scores live on the 21-value lattice {0.0, 0.5, ..., 10.0} and are stored
as integer half-units (0..20) so score arithmetic stays exact until weighting.
Weights are free reals normalized to sum 1. A scoring schema is always exactly
three criteria; the aggregate, convergence math, and UI all rely on that.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from indigo.errors import NotFoundError, ValidationError

WEIGHT_SUM_TOLERANCE = 1e-9

_LATTICE_RE = re.compile(r"^(\d+)\.(\d)$")
_DELTA_RE = re.compile(r"^([+-]?)(\d+)\.(\d)$")


@dataclass(frozen=True)
class ScoreValue:
    """One criterion score, stored as half-units so 7.5 is the integer 15."""

    half_units: int

    def __post_init__(self):
        if not isinstance(self.half_units, int) or isinstance(self.half_units, bool):
            raise ValidationError(f"half_units must be an integer, got {self.half_units!r}")
        if not 0 <= self.half_units <= 20:
            raise ValidationError(f"half_units out of range [0, 20]: {self.half_units}")

    @property
    def display(self) -> float:
        return self.half_units / 2

    def encode(self) -> str:
        """Canonical text form: one fractional digit, e.g. '7.5', '10.0'."""
        return f"{self.half_units // 2}.{5 if self.half_units % 2 else 0}"

    @classmethod
    def parse(cls, text: str) -> "ScoreValue":
        """Parse the canonical form. Rejects non-lattice values like '7.3'
        and non-canonical forms like '7' or '7.50'."""
        m = _LATTICE_RE.match(text.strip())
        if m is None:
            raise ValidationError(f"not a lattice score: {text!r}")
        whole, frac = int(m.group(1)), int(m.group(2))
        if frac not in (0, 5):
            raise ValidationError(f"not a lattice score: {text!r}")
        half_units = whole * 2 + (1 if frac == 5 else 0)
        if half_units > 20:
            raise ValidationError(f"score out of range [0, 10]: {text!r}")
        return cls(half_units)

    @classmethod
    def from_display(cls, value: float) -> "ScoreValue":
        """Exact conversion from a lattice-valued float; rejects off-lattice input."""
        doubled = value * 2
        if doubled != int(doubled):
            raise ValidationError(f"not a lattice score: {value!r}")
        return cls(int(doubled))


@dataclass(frozen=True)
class ScoreVector:
    """Exactly three scores, ordered to match the schema's criteria."""

    scores: tuple[ScoreValue, ScoreValue, ScoreValue]

    def __post_init__(self):
        if len(self.scores) != 3:
            raise ValidationError(f"a score vector has exactly 3 scores, got {len(self.scores)}")
        if not all(isinstance(s, ScoreValue) for s in self.scores):
            raise ValidationError("scores must be ScoreValue instances")

    @classmethod
    def of(cls, a: float, b: float, c: float) -> "ScoreVector":
        return cls(tuple(ScoreValue.from_display(v) for v in (a, b, c)))

    @property
    def displays(self) -> tuple[float, float, float]:
        return tuple(s.display for s in self.scores)

    def encode(self) -> list[str]:
        return [s.encode() for s in self.scores]

    @classmethod
    def decode(cls, parts: list[str]) -> "ScoreVector":
        if len(parts) != 3:
            raise ValidationError(f"a score vector has exactly 3 scores, got {len(parts)}")
        return cls(tuple(ScoreValue.parse(p) for p in parts))


@dataclass(frozen=True)
class WeightVector:
    """Three nonnegative weights summing to 1; built via normalize_weights."""

    weights: tuple[float, float, float]

    def __post_init__(self):
        if len(self.weights) != 3:
            raise ValidationError(f"a weight vector has exactly 3 weights, got {len(self.weights)}")
        for w in self.weights:
            if not (w >= 0.0):
                raise ValidationError(f"weights must be nonnegative, got {w!r}")
        if not any(w > 0 for w in self.weights):
            raise ValidationError("at least one weight must be positive")
        if abs(sum(self.weights) - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise ValidationError(f"weights must sum to 1, got {sum(self.weights)!r}")


def quantize(x: float) -> ScoreValue:
    """Snap a real in [0, 10] to the nearest half-point lattice value.

    Exact ties (odd multiples of 0.25) round up, so 7.25 -> 7.5. Out-of-range
    input raises rather than clamping: user-facing scores are never silently
    adjusted.
    """
    if not (0.0 <= x <= 10.0):
        raise ValidationError(f"score out of range [0, 10]: {x!r}")
    # Half-up rounding of 2x is exact for ties: odd multiples of 0.25 double
    # to k + 0.5 which binary floats represent exactly.
    return ScoreValue(math.floor(2 * x + 0.5))


def normalize_weights(raw: tuple[float, float, float] | list[float]) -> WeightVector:
    """Scale three nonnegative reals so they sum to 1."""
    raw = tuple(raw)
    if len(raw) != 3:
        raise ValidationError(f"expected 3 raw weights, got {len(raw)}")
    for w in raw:
        if not isinstance(w, (int, float)) or isinstance(w, bool) or not math.isfinite(w):
            raise ValidationError(f"weights must be finite numbers, got {w!r}")
        if w < 0:
            raise ValidationError(f"weights must be nonnegative, got {w!r}")
    total = sum(raw)
    if total <= 0:
        raise ValidationError("all-zero weights make the objective degenerate")
    return WeightVector(tuple(w / total for w in raw))


@dataclass(frozen=True)
class Criterion:
    name: str
    description: str = ""

    def __post_init__(self):
        if not self.name or not self.name.strip():
            raise ValidationError("criterion name must be nonempty")
        if len(self.name) > 64:
            raise ValidationError(f"criterion name too long ({len(self.name)} > 64)")


@dataclass(frozen=True)
class ScoringSchema:
    criteria: tuple[Criterion, Criterion, Criterion]
    preset_id: str | None = None

    def __post_init__(self):
        if len(self.criteria) != 3:
            raise ValidationError(f"a schema has exactly 3 criteria, got {len(self.criteria)}")
        names = [c.name.lower() for c in self.criteria]
        if len(set(names)) != 3:
            raise ValidationError(f"criterion names must be pairwise distinct: {names}")

    @property
    def criterion_names(self) -> tuple[str, str, str]:
        return tuple(c.name for c in self.criteria)


@dataclass(frozen=True)
class Goal:
    title: str
    statement: str
    success_criteria: str = ""

    def __post_init__(self):
        if not self.title or not self.title.strip():
            raise ValidationError("goal title must be nonempty")
        if not self.statement or not self.statement.strip():
            raise ValidationError("goal statement must be nonempty")


# Built-in criterion triples lifted from traditional decision matrices. The
# two-factor matrices name only two criteria, so the caller supplies the third.
# Cost and effort are phrased as their favorable inverse (cost-efficiency,
# ease) so that higher is better on every criterion.
_PRESETS: dict[str, dict] = {
    "iron_triangle": {
        "criteria": (
            Criterion("speed", "How quickly the plan delivers."),
            Criterion("quality", "How well the delivered result meets the bar."),
            Criterion("cost", "Cost-efficiency: how favorable the spend is (higher is cheaper)."),
        ),
        "complete": True,
    },
    "eisenhower": {
        "criteria": (
            Criterion("importance", "How much the plan advances what matters."),
            Criterion("urgency", "How well the plan addresses time-critical work."),
        ),
        "complete": False,
    },
    "ease_effect": {
        "criteria": (
            Criterion("impact", "Size of the effect the plan achieves."),
            Criterion("ease", "Ease of execution (reciprocal of effort; higher is easier)."),
        ),
        "complete": False,
    },
}


def preset_ids() -> list[str]:
    return list(_PRESETS)


def describe_presets() -> list[dict]:
    """Listing for the presets endpoint / CLI: id, fixed criteria, arity."""
    out = []
    for pid, spec in _PRESETS.items():
        out.append(
            {
                "preset_id": pid,
                "criteria": [{"name": c.name, "description": c.description} for c in spec["criteria"]],
                "requires_third_criterion": not spec["complete"],
            }
        )
    return out


def preset_schema(preset_id: str, third_criterion: Criterion | None = None) -> ScoringSchema:
    """Build a schema from a named preset.

    Two-factor presets (eisenhower, ease_effect) require the caller to supply
    the third criterion; the complete preset (iron_triangle) rejects one.
    """
    spec = _PRESETS.get(preset_id)
    if spec is None:
        raise NotFoundError(f"unknown preset: {preset_id!r}", {"known": preset_ids()})
    criteria = spec["criteria"]
    if spec["complete"]:
        if third_criterion is not None:
            raise ValidationError(f"preset {preset_id!r} is complete; no third criterion accepted")
        return ScoringSchema(criteria, preset_id=preset_id)
    if third_criterion is None:
        raise ValidationError(f"preset {preset_id!r} needs a caller-supplied third criterion")
    return ScoringSchema(criteria + (third_criterion,), preset_id=preset_id)


def parse_delta(text: str) -> float:
    """Parse a signed lattice decimal ('+2.5', '0.0', '-1.0') in [-10, 10]."""
    m = _DELTA_RE.match(text.strip())
    if m is None:
        raise ValidationError(f"not a signed lattice delta: {text!r}")
    sign, whole, frac = m.group(1), int(m.group(2)), int(m.group(3))
    if frac not in (0, 5):
        raise ValidationError(f"not a signed lattice delta: {text!r}")
    value = whole + (0.5 if frac == 5 else 0.0)
    if value > 10:
        raise ValidationError(f"delta out of range [-10, 10]: {text!r}")
    return -value if sign == "-" else value


def encode_delta(value: float) -> str:
    """Canonical signed lattice decimal: explicit '+' on positives, '0.0' for zero."""
    validate_delta(value)
    if value == 0:
        return "0.0"
    sign = "+" if value > 0 else "-"
    mag = abs(value)
    half = round(mag * 2)
    return f"{sign}{half // 2}.{5 if half % 2 else 0}"


def validate_delta(value: float) -> None:
    doubled = value * 2
    if doubled != int(doubled) or not -10.0 <= value <= 10.0:
        raise ValidationError(f"claimed delta must be a half-point value in [-10, 10]: {value!r}")
