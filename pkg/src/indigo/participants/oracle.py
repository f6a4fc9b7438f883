"""Deterministic scripted participant with a hidden keyword target.

The oracle plays a desk-scale environment with a known optimum: each criterion
owns a set of target keywords, and a plan's true score per criterion is the
covered fraction of those keywords scaled to the 0-10 lattice. Greedy
proposals add the highest-weighted-gain missing keyword, so convergence claims
about the engine become checkable against a ground truth.

Everything is a pure function of (config, plan): noise and random-policy picks
are seeded from a stable hash of the seed and the plan's item texts.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction

from indigo.engine import HOLD_STEADY
from indigo.errors import ValidationError
from indigo.model import ScoreValue, ScoreVector, ScoringSchema, WeightVector, quantize
from indigo.plan import Edit, EditKind, Plan, Proposal, ProposalDraft, apply_edit
from indigo.serialize import exact_claimed_gain

GREEDY = "greedy"
RANDOM = "random"


@dataclass(frozen=True)
class OracleConfig:
    hidden_target: tuple[tuple[str, ...], tuple[str, ...], tuple[str, ...]]
    noise_half_units: int = 0
    proposal_policy: str = GREEDY
    seed: int = 0

    def __post_init__(self):
        if len(self.hidden_target) != 3:
            raise ValidationError("hidden_target must partition keywords across 3 criteria")
        for part in self.hidden_target:
            if not part:
                raise ValidationError("each criterion needs at least one target keyword")
        if self.noise_half_units < 0:
            raise ValidationError("noise_half_units must be >= 0")
        if self.proposal_policy not in (GREEDY, RANDOM):
            raise ValidationError(f"unknown proposal_policy: {self.proposal_policy!r}")

    @classmethod
    def from_wire(cls, data: dict) -> "OracleConfig":
        target = data.get("hidden_target")
        if not isinstance(target, list) or len(target) != 3:
            raise ValidationError("oracle hidden_target must be a list of 3 keyword lists")
        return cls(
            hidden_target=tuple(tuple(str(k) for k in part) for part in target),
            noise_half_units=int(data.get("noise_half_units", 0)),
            proposal_policy=str(data.get("proposal_policy", GREEDY)),
            seed=int(data.get("seed", 0)),
        )


def _plan_text(plan: Plan) -> str:
    return "\n".join(plan.texts()).lower()


def _derived_rng(config: OracleConfig, plan: Plan, purpose: str) -> random.Random:
    material = f"{config.seed}|{purpose}|" + "\x1f".join(plan.texts())
    digest = hashlib.sha256(material.encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def coverage_scores(config: OracleConfig, plan: Plan) -> ScoreVector:
    """Noise-free ground truth: per criterion, quantize(10 * covered fraction)."""
    text = _plan_text(plan)
    scores = []
    for keywords in config.hidden_target:
        present = sum(1 for kw in keywords if kw.lower() in text)
        scores.append(quantize(10 * present / len(keywords)))
    return ScoreVector(tuple(scores))


def oracle_score(config: OracleConfig, plan: Plan) -> ScoreVector:
    """Ground-truth coverage score, perturbed by seeded noise in half-units."""
    base = coverage_scores(config, plan)
    if config.noise_half_units == 0:
        return base
    rng = _derived_rng(config, plan, "score")
    noisy = []
    for sv in base.scores:
        offset = rng.randint(-config.noise_half_units, config.noise_half_units)
        noisy.append(ScoreValue(min(20, max(0, sv.half_units + offset))))
    return ScoreVector(tuple(noisy))


def _missing_keywords(config: OracleConfig, plan: Plan) -> list[tuple[int, str]]:
    text = _plan_text(plan)
    return [
        (ci, kw)
        for ci, keywords in enumerate(config.hidden_target)
        for kw in keywords
        if kw.lower() not in text
    ]


def _append_edit(plan: Plan, text: str) -> Edit:
    if plan.items:
        return Edit(EditKind.INSERT_AFTER, target_id=plan.items[-1].item_id, new_text=text)
    return Edit(EditKind.INSERT_AT_START, new_text=text)


def _exact_deltas(config: OracleConfig, plan: Plan, keyword: str) -> tuple[float, float, float]:
    """Per-criterion ground-truth score change from appending the keyword."""
    before = coverage_scores(config, plan)
    after = coverage_scores(config, apply_edit(plan, _append_edit(plan, keyword)))
    return tuple(a.display - b.display for a, b in zip(after.scores, before.scores))


def oracle_propose(
    config: OracleConfig, plan: Plan, schema: ScoringSchema, weights: WeightVector
) -> ProposalDraft | None:
    """Propose appending one missing keyword, or abstain when none is missing.

    Greedy picks the keyword with the highest exact weighted gain (ties fall
    to the first in partition order); random picks a seeded random one. The
    claimed deltas are the exact noise-free score change.
    """
    missing = _missing_keywords(config, plan)
    if not missing:
        return None

    if config.proposal_policy == RANDOM:
        rng = _derived_rng(config, plan, "propose")
        ci, keyword = missing[rng.randrange(len(missing))]
    else:
        best_gain: Fraction | None = None
        ci, keyword = missing[0]
        for cand_ci, cand_kw in missing:
            gain = exact_claimed_gain(weights, _exact_deltas(config, plan, cand_kw))
            if best_gain is None or gain > best_gain:
                best_gain, ci, keyword = gain, cand_ci, cand_kw

    deltas = _exact_deltas(config, plan, keyword)
    return ProposalDraft(
        edits=(_append_edit(plan, keyword),),
        rationale=f"Cover '{keyword}' to raise {schema.criteria[ci].name}.",
        claimed_deltas=deltas,
    )


def pick_best_claimed(proposals: tuple[Proposal, ...] | list[Proposal], weights: WeightVector) -> str:
    """Vote for the proposal with the highest positive claimed weighted gain,
    earliest submission breaking ties; hold steady when nothing claims a gain."""
    best_id = HOLD_STEADY
    best_gain = Fraction(0)
    for p in proposals:
        gain = exact_claimed_gain(weights, p.claimed_deltas)
        if gain > best_gain:
            best_gain, best_id = gain, p.proposal_id
    return best_id


def oracle_vote(
    config: OracleConfig, proposals: tuple[Proposal, ...] | list[Proposal], weights: WeightVector
) -> str:
    return pick_best_claimed(proposals, weights)
