"""Prompt construction and the strict line grammar for remote AI responses.

The grammar is the stable wire contract with any text model:

    SCORES: <s1> <s2> <s3>
    EDIT <n>: INSERT_AFTER <item-id> :: <text> | INSERT_AT_START :: <text>
              | REPLACE <item-id> :: <text>    | DELETE <item-id>
    RATIONALE <n>: <text>
    DELTAS <n>: <d1> <d2> <d3>
    VOTE: <proposal-id> | HOLD_STEADY
    ABSTAIN

One response carries one record set; <n> indexes the proposal within the
response and must be 1. Parsing is strict: off-lattice scores, unknown item
ids, or stray lines all reject the response (the adapter retries with a
corrective preamble, then abstains).
"""

from __future__ import annotations

import re

from indigo.engine import Phase
from indigo.errors import ValidationError
from indigo.model import (
    Goal,
    ScoreValue,
    ScoreVector,
    ScoringSchema,
    WeightVector,
    encode_delta,
    parse_delta,
)
from indigo.plan import Edit, EditKind, Plan, Proposal, ProposalDraft

ABSTAIN_TEXT = "ABSTAIN"

_SCORES_RE = re.compile(r"^SCORES:\s+(\S+)\s+(\S+)\s+(\S+)$")
_EDIT_RE = re.compile(r"^EDIT\s+(\d+):\s+(.+)$")
_RATIONALE_RE = re.compile(r"^RATIONALE\s+(\d+):\s+(.+)$")
_DELTAS_RE = re.compile(r"^DELTAS\s+(\d+):\s+(\S+)\s+(\S+)\s+(\S+)$")
_VOTE_RE = re.compile(r"^VOTE:\s+(\S+)$")


class ResponseFormatError(ValidationError):
    """Remote response does not match the grammar."""


# ---------------------------------------------------------------------------
# Rendering (canonical forms; parse(render(x)) == x)
# ---------------------------------------------------------------------------


def render_scores(scores: ScoreVector) -> str:
    return "SCORES: " + " ".join(scores.encode())


def render_edit(edit: Edit) -> str:
    if edit.kind == EditKind.INSERT_AFTER:
        return f"INSERT_AFTER {edit.target_id} :: {edit.new_text}"
    if edit.kind == EditKind.INSERT_AT_START:
        return f"INSERT_AT_START :: {edit.new_text}"
    if edit.kind == EditKind.REPLACE:
        return f"REPLACE {edit.target_id} :: {edit.new_text}"
    return f"DELETE {edit.target_id}"


def render_proposal(proposal: ProposalDraft | Proposal) -> str:
    lines = [f"EDIT 1: {render_edit(e)}" for e in proposal.edits]
    lines.append(f"RATIONALE 1: {proposal.rationale}")
    lines.append("DELTAS 1: " + " ".join(encode_delta(d) for d in proposal.claimed_deltas))
    return "\n".join(lines)


def render_ballot(choice: str) -> str:
    return f"VOTE: {choice}"


# ---------------------------------------------------------------------------
# Prompt
# ---------------------------------------------------------------------------

_SCORE_INSTRUCTIONS = """TASK: Rate the current plan against each criterion.
Respond with exactly one line in this format:
SCORES: <s1> <s2> <s3>
Each score is a decimal from 0.0 to 10.0 ending in .0 or .5 (for example 7.5).
To sit out this round, respond with the single line: ABSTAIN"""

_PROPOSAL_INSTRUCTIONS = """TASK: Suggest concrete edits that would raise the plan's scores.
Respond with one proposal in exactly this format, one record per line, in this order:
EDIT 1: INSERT_AFTER <item-id> :: <text>
EDIT 1: INSERT_AT_START :: <text>
EDIT 1: REPLACE <item-id> :: <text>
EDIT 1: DELETE <item-id>
RATIONALE 1: <why these edits raise the scores>
DELTAS 1: <d1> <d2> <d3>
Use one or more EDIT 1 lines, choosing any of the four forms shown for each line,
then exactly one RATIONALE 1 line, then exactly one DELTAS 1 line. Each delta is
your claimed score change on that criterion: a signed decimal ending in .0 or .5
(for example +1.5, 0.0, -0.5).
To sit out this round, respond with the single line: ABSTAIN"""

_VOTE_INSTRUCTIONS = """TASK: Vote for the next move.
Respond with exactly one line in this format:
VOTE: <proposal-id>
To keep the plan unchanged, respond: VOTE: HOLD_STEADY
To sit out this round, respond with the single line: ABSTAIN"""


def build_prompt(
    goal: Goal,
    schema: ScoringSchema,
    weights: WeightVector,
    plan: Plan,
    phase: Phase,
    proposals: tuple[Proposal, ...] | list[Proposal] = (),
) -> str:
    """Deterministic, byte-stable prompt for a remote participant.

    Contains the goal, the three criteria with current weights, every plan
    item with its id, the phase task, and the exact response grammar.
    """
    if phase not in (Phase.AWAITING_SCORES, Phase.AWAITING_PROPOSALS, Phase.AWAITING_VOTES):
        raise ValidationError(f"no prompt exists for phase {phase.value}")

    parts = ["You are a participant in a structured plan optimization session.", ""]
    parts.append(f"GOAL: {goal.title}")
    parts.append(goal.statement)
    if goal.success_criteria:
        parts.append(f"SUCCESS CRITERIA: {goal.success_criteria}")
    parts.append("")
    parts.append("CRITERIA (each scored 0.0 to 10.0 in steps of 0.5):")
    for i, criterion in enumerate(schema.criteria):
        parts.append(
            f"  {i + 1}. {criterion.name} (weight {weights.weights[i]:.6f}): {criterion.description}"
        )
    parts.append("")
    parts.append(f"PLAN (revision {plan.revision}):")
    if plan.items:
        for item in plan.items:
            parts.append(f"  [{item.item_id}] {item.text}")
    else:
        parts.append("  (empty)")
    parts.append("")

    if phase == Phase.AWAITING_SCORES:
        parts.append(_SCORE_INSTRUCTIONS)
    elif phase == Phase.AWAITING_PROPOSALS:
        parts.append(_PROPOSAL_INSTRUCTIONS)
    else:
        parts.append("PROPOSALS UNDER VOTE:")
        for p in proposals:
            deltas = " ".join(encode_delta(d) for d in p.claimed_deltas)
            parts.append(f"  {p.proposal_id} (by {p.author}, claimed deltas {deltas}):")
            for e in p.edits:
                parts.append(f"    - {render_edit(e)}")
            parts.append(f"    rationale: {p.rationale}")
        if not proposals:
            parts.append("  (none)")
        parts.append("")
        parts.append(_VOTE_INSTRUCTIONS)
    return "\n".join(parts)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def _parse_scores_line(line: str) -> ScoreVector:
    m = _SCORES_RE.match(line)
    if m is None:
        raise ResponseFormatError(f"expected 'SCORES: <s1> <s2> <s3>', got {line!r}")
    try:
        return ScoreVector(tuple(ScoreValue.parse(tok) for tok in m.groups()))
    except ValidationError as exc:
        raise ResponseFormatError(f"bad score in {line!r}: {exc.message}") from exc


def _parse_edit_op(text: str, plan: Plan) -> Edit:
    known = set(plan.item_ids())

    def _target(token: str) -> str:
        if token not in known:
            raise ResponseFormatError(f"unknown item id: {token!r}")
        return token

    head, sep, body = text.partition(" :: ")
    body = body.strip()
    tokens = head.split()
    op = tokens[0] if tokens else ""
    try:
        if op == "INSERT_AFTER" and sep and len(tokens) == 2:
            return Edit(EditKind.INSERT_AFTER, target_id=_target(tokens[1]), new_text=body)
        if op == "INSERT_AT_START" and sep and len(tokens) == 1:
            return Edit(EditKind.INSERT_AT_START, new_text=body)
        if op == "REPLACE" and sep and len(tokens) == 2:
            return Edit(EditKind.REPLACE, target_id=_target(tokens[1]), new_text=body)
        if op == "DELETE" and not sep and len(tokens) == 2:
            return Edit(EditKind.DELETE, target_id=_target(tokens[1]))
    except ValidationError as exc:
        raise ResponseFormatError(f"bad edit {text!r}: {exc.message}") from exc
    raise ResponseFormatError(f"unrecognized edit operation: {text!r}")


def _parse_proposal_block(lines: list[str], plan: Plan) -> ProposalDraft:
    edits: list[Edit] = []
    rationale: str | None = None
    deltas: tuple[float, float, float] | None = None
    stage = "edits"

    for line in lines:
        edit_m = _EDIT_RE.match(line)
        rationale_m = _RATIONALE_RE.match(line)
        deltas_m = _DELTAS_RE.match(line)

        if edit_m:
            if stage != "edits":
                raise ResponseFormatError("EDIT lines must come before RATIONALE and DELTAS")
            if edit_m.group(1) != "1":
                raise ResponseFormatError("a response carries one proposal; use index 1")
            edits.append(_parse_edit_op(edit_m.group(2).strip(), plan))
        elif rationale_m:
            if stage != "edits" or rationale is not None:
                raise ResponseFormatError("exactly one RATIONALE line must follow the edits")
            if rationale_m.group(1) != "1":
                raise ResponseFormatError("a response carries one proposal; use index 1")
            rationale = rationale_m.group(2).strip()
            stage = "rationale"
        elif deltas_m:
            if stage != "rationale" or deltas is not None:
                raise ResponseFormatError("exactly one DELTAS line must follow the rationale")
            if deltas_m.group(1) != "1":
                raise ResponseFormatError("a response carries one proposal; use index 1")
            try:
                deltas = tuple(parse_delta(tok) for tok in deltas_m.groups()[1:])
            except ValidationError as exc:
                raise ResponseFormatError(f"bad delta in {line!r}: {exc.message}") from exc
            stage = "done"
        else:
            raise ResponseFormatError(f"unrecognized line in proposal: {line!r}")

    if not edits:
        raise ResponseFormatError("a proposal needs at least one EDIT line")
    if rationale is None:
        raise ResponseFormatError("a proposal needs a RATIONALE line")
    if deltas is None:
        raise ResponseFormatError("a proposal needs a DELTAS line")
    try:
        return ProposalDraft(edits=tuple(edits), rationale=rationale, claimed_deltas=deltas)
    except ValidationError as exc:
        raise ResponseFormatError(f"invalid proposal: {exc.message}") from exc


def parse_response(
    raw: str, phase: Phase, plan: Plan
) -> ScoreVector | ProposalDraft | str | None:
    """Parse a remote model's full text response for the given phase.

    Returns a ScoreVector (scores phase), ProposalDraft (proposals phase),
    a vote choice string (votes phase), or None for an explicit ABSTAIN.
    Anything else raises ResponseFormatError.
    """
    lines = [ln.strip() for ln in raw.splitlines() if ln.strip()]
    if not lines:
        raise ResponseFormatError("empty response")
    if lines == [ABSTAIN_TEXT]:
        return None

    if phase == Phase.AWAITING_SCORES:
        if len(lines) != 1:
            raise ResponseFormatError(f"expected a single SCORES line, got {len(lines)} lines")
        return _parse_scores_line(lines[0])

    if phase == Phase.AWAITING_PROPOSALS:
        return _parse_proposal_block(lines, plan)

    if phase == Phase.AWAITING_VOTES:
        if len(lines) != 1:
            raise ResponseFormatError(f"expected a single VOTE line, got {len(lines)} lines")
        m = _VOTE_RE.match(lines[0])
        if m is None:
            raise ResponseFormatError(f"expected 'VOTE: <proposal-id>', got {lines[0]!r}")
        return m.group(1)

    raise ValidationError(f"no response grammar for phase {phase.value}")
