"""Wire codecs for value types.

One format serves both the journal payloads and the HTTP API, so replay and
API clients read identical shapes. Scores always travel as lattice decimals
("7.5"), weights as plain floats (JSON round-trips floats exactly).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Sequence

from indigo.errors import ValidationError
from indigo.model import (
    Criterion,
    Goal,
    ScoreVector,
    ScoringSchema,
    WeightVector,
    encode_delta,
    parse_delta,
)
from indigo.participants import AdapterConfig, Capability, ParticipantDescriptor, Role
from indigo.plan import Edit, EditKind, Plan, PlanItem, Proposal, ProposalDraft
from indigo.scoring import ConvergenceConfig


def _require(data: Any, keys: Sequence[str], what: str) -> dict:
    if not isinstance(data, dict):
        raise ValidationError(f"{what} must be an object, got {type(data).__name__}")
    missing = [k for k in keys if k not in data]
    if missing:
        raise ValidationError(f"{what} missing fields: {missing}")
    return data


def goal_to_wire(goal: Goal) -> dict:
    return {"title": goal.title, "statement": goal.statement, "success_criteria": goal.success_criteria}


def goal_from_wire(data: Any) -> Goal:
    d = _require(data, ["title", "statement"], "goal")
    return Goal(str(d["title"]), str(d["statement"]), str(d.get("success_criteria", "")))


def schema_to_wire(schema: ScoringSchema) -> dict:
    return {
        "criteria": [{"name": c.name, "description": c.description} for c in schema.criteria],
        "preset_id": schema.preset_id,
    }


def schema_from_wire(data: Any) -> ScoringSchema:
    d = _require(data, ["criteria"], "schema")
    criteria = tuple(
        Criterion(str(c["name"]), str(c.get("description", "")))
        for c in _as_list(d["criteria"], "schema.criteria")
    )
    if len(criteria) != 3:
        raise ValidationError(f"a schema has exactly 3 criteria, got {len(criteria)}")
    preset = d.get("preset_id")
    return ScoringSchema(criteria, preset_id=str(preset) if preset is not None else None)


def _as_list(value: Any, what: str) -> list:
    if not isinstance(value, list):
        raise ValidationError(f"{what} must be a list")
    return value


def weights_to_wire(weights: WeightVector) -> list[float]:
    return list(weights.weights)


def weights_from_wire(data: Any) -> WeightVector:
    values = _as_list(data, "weights")
    if len(values) != 3:
        raise ValidationError(f"a weight vector has exactly 3 weights, got {len(values)}")
    return WeightVector(tuple(float(v) for v in values))


def scores_to_wire(scores: ScoreVector) -> list[str]:
    return scores.encode()


def scores_from_wire(data: Any) -> ScoreVector:
    return ScoreVector.decode([str(v) for v in _as_list(data, "scores")])


def convergence_to_wire(config: ConvergenceConfig) -> dict:
    return {
        "threshold": config.threshold,
        "window": config.window,
        "max_iterations": config.max_iterations,
    }


def convergence_from_wire(data: Any) -> ConvergenceConfig:
    d = _require(data, ["threshold", "window", "max_iterations"], "convergence")
    return ConvergenceConfig(float(d["threshold"]), int(d["window"]), int(d["max_iterations"]))


def adapter_to_wire(config: AdapterConfig) -> dict:
    return {
        "endpoint_url": config.endpoint_url,
        "auth_header": config.auth_header,
        "model_name": config.model_name,
        "max_retries": config.max_retries,
        "timeout_seconds": config.timeout_seconds,
    }


def adapter_from_wire(data: Any) -> AdapterConfig:
    d = _require(data, ["endpoint_url"], "adapter")
    return AdapterConfig(
        endpoint_url=str(d["endpoint_url"]),
        auth_header=d.get("auth_header"),
        model_name=str(d.get("model_name", "")),
        max_retries=int(d.get("max_retries", 2)),
        timeout_seconds=int(d.get("timeout_seconds", 30)),
    )


def participant_to_wire(desc: ParticipantDescriptor, redact_adapter: bool = False) -> dict:
    out: dict[str, Any] = {
        "participant_id": desc.participant_id,
        "role": desc.role.value,
        "capabilities": [c.value for c in desc.capabilities],
    }
    if desc.adapter_config is not None:
        if redact_adapter:
            out["adapter"] = {
                "endpoint_url": desc.adapter_config.endpoint_url,
                "model_name": desc.adapter_config.model_name,
            }
        else:
            out["adapter"] = adapter_to_wire(desc.adapter_config)
    return out


def participant_from_wire(data: Any) -> ParticipantDescriptor:
    d = _require(data, ["participant_id", "role", "capabilities"], "participant")
    try:
        role = Role(str(d["role"]))
    except ValueError:
        raise ValidationError(f"unknown role: {d['role']!r}") from None
    caps = []
    for c in _as_list(d["capabilities"], "participant.capabilities"):
        try:
            caps.append(Capability(str(c)))
        except ValueError:
            raise ValidationError(f"unknown capability: {c!r}") from None
    adapter = d.get("adapter")
    return ParticipantDescriptor(
        participant_id=str(d["participant_id"]),
        role=role,
        capabilities=tuple(caps),
        adapter_config=adapter_from_wire(adapter) if adapter is not None else None,
    )


def edit_to_wire(edit: Edit) -> dict:
    out: dict[str, Any] = {"kind": edit.kind.value}
    if edit.target_id is not None:
        out["target_id"] = edit.target_id
    if edit.new_text is not None:
        out["new_text"] = edit.new_text
    return out


def edit_from_wire(data: Any) -> Edit:
    d = _require(data, ["kind"], "edit")
    try:
        kind = EditKind(str(d["kind"]))
    except ValueError:
        raise ValidationError(f"unknown edit kind: {d['kind']!r}") from None
    target = d.get("target_id")
    text = d.get("new_text")
    return Edit(kind, target_id=str(target) if target is not None else None,
                new_text=str(text) if text is not None else None)


def deltas_to_wire(deltas: Sequence[float]) -> list[str]:
    return [encode_delta(d) for d in deltas]


def deltas_from_wire(data: Any) -> tuple[float, float, float]:
    values = _as_list(data, "claimed_deltas")
    if len(values) != 3:
        raise ValidationError(f"claimed_deltas must have exactly 3 entries, got {len(values)}")
    return tuple(parse_delta(str(v)) for v in values)


def exact_claimed_gain(weights: WeightVector, deltas: Sequence[float]) -> Fraction:
    """Exact weighted sum of claimed deltas; the tie-break comparator.

    Fraction(float) is exact, so the result is order-independent and two
    independent implementations agree bit-for-bit.
    """
    total = Fraction(0)
    for w, d in zip(weights.weights, deltas):
        total += Fraction(w) * Fraction(d)
    return total


def draft_to_wire(draft: ProposalDraft) -> dict:
    return {
        "edits": [edit_to_wire(e) for e in draft.edits],
        "rationale": draft.rationale,
        "claimed_deltas": deltas_to_wire(draft.claimed_deltas),
    }


def draft_from_wire(data: Any) -> ProposalDraft:
    d = _require(data, ["edits", "rationale", "claimed_deltas"], "proposal")
    return ProposalDraft(
        edits=tuple(edit_from_wire(e) for e in _as_list(d["edits"], "proposal.edits")),
        rationale=str(d["rationale"]),
        claimed_deltas=deltas_from_wire(d["claimed_deltas"]),
    )


def proposal_to_wire(proposal: Proposal, weights: WeightVector | None = None) -> dict:
    out = draft_to_wire(proposal.draft)
    out["proposal_id"] = proposal.proposal_id
    out["author"] = proposal.author
    if weights is not None:
        out["claimed_gain"] = float(exact_claimed_gain(weights, proposal.claimed_deltas))
    return out


def proposal_from_wire(data: Any) -> Proposal:
    d = _require(data, ["proposal_id", "author"], "proposal")
    draft = draft_from_wire(data)
    return Proposal(
        proposal_id=str(d["proposal_id"]),
        author=str(d["author"]),
        edits=draft.edits,
        rationale=draft.rationale,
        claimed_deltas=draft.claimed_deltas,
    )


def plan_to_wire(plan: Plan) -> dict:
    return {
        "revision": plan.revision,
        "parent_revision": plan.parent_revision,
        "items": [{"item_id": it.item_id, "text": it.text} for it in plan.items],
    }


def plan_items_from_wire(data: Any) -> tuple[PlanItem, ...]:
    return tuple(
        PlanItem(str(d["item_id"]), str(d["text"]))
        for d in _as_list(data, "plan.items")
    )
