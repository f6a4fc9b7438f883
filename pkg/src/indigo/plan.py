"""Plans as revisioned ordered item lists, plus the concrete-edit algebra.

A plan is the point in parameter space: an ordered list of identified items.
Edits address items by id; a proposal is an atomic bundle of edits that bumps
the revision by exactly one when applied. Item ids are allocated from a
per-plan counter and never reused, which keeps id assignment deterministic
under journal replay.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from indigo.errors import StaleTargetError, ValidationError
from indigo.model import validate_delta


class EditKind(str, Enum):
    INSERT_AFTER = "insert_after"
    INSERT_AT_START = "insert_at_start"
    REPLACE = "replace"
    DELETE = "delete"


@dataclass(frozen=True)
class PlanItem:
    item_id: str
    text: str

    def __post_init__(self):
        if not self.item_id:
            raise ValidationError("item_id must be nonempty")
        if not self.text or not self.text.strip():
            raise ValidationError("item text must be nonempty")


@dataclass(frozen=True)
class Edit:
    kind: EditKind
    target_id: str | None = None
    new_text: str | None = None

    def __post_init__(self):
        if self.kind == EditKind.INSERT_AT_START:
            if self.target_id is not None:
                raise ValidationError("insert_at_start takes no target_id")
        elif not self.target_id:
            raise ValidationError(f"{self.kind.value} requires a target_id")
        if self.kind == EditKind.DELETE:
            if self.new_text is not None:
                raise ValidationError("delete carries no text")
        elif not self.new_text or not self.new_text.strip():
            raise ValidationError(f"{self.kind.value} requires nonempty new_text")


@dataclass(frozen=True)
class Plan:
    revision: int = 0
    items: tuple[PlanItem, ...] = ()
    parent_revision: int | None = None
    next_item_seq: int = 1

    def __post_init__(self):
        ids = [it.item_id for it in self.items]
        if len(set(ids)) != len(ids):
            raise ValidationError(f"duplicate item ids in plan: {ids}")

    def item_ids(self) -> list[str]:
        return [it.item_id for it in self.items]

    def index_of(self, item_id: str) -> int:
        for i, it in enumerate(self.items):
            if it.item_id == item_id:
                return i
        raise StaleTargetError(
            f"no item {item_id!r} in plan revision {self.revision}",
            {"target_id": item_id, "revision": self.revision},
        )

    def texts(self) -> list[str]:
        return [it.text for it in self.items]


def make_item_id(seq: int) -> str:
    return f"it-{seq}"


def draft_plan(item_texts: list[str]) -> Plan:
    """Revision-0 plan from the initial draft's item texts."""
    if not item_texts:
        raise ValidationError("initial plan must have at least one item")
    items = tuple(PlanItem(make_item_id(i + 1), text) for i, text in enumerate(item_texts))
    return Plan(revision=0, items=items, parent_revision=None, next_item_seq=len(items) + 1)


def apply_edit(plan: Plan, edit: Edit) -> Plan:
    """Apply one edit, returning a new plan at the SAME revision.

    The revision bump happens once per proposal in apply_proposal. Inserts
    allocate a fresh id from the plan's counter.
    """
    if edit.kind == EditKind.INSERT_AT_START:
        new_item = PlanItem(make_item_id(plan.next_item_seq), edit.new_text)
        return replace(plan, items=(new_item,) + plan.items, next_item_seq=plan.next_item_seq + 1)

    idx = plan.index_of(edit.target_id)
    if edit.kind == EditKind.INSERT_AFTER:
        new_item = PlanItem(make_item_id(plan.next_item_seq), edit.new_text)
        items = plan.items[: idx + 1] + (new_item,) + plan.items[idx + 1 :]
        return replace(plan, items=items, next_item_seq=plan.next_item_seq + 1)
    if edit.kind == EditKind.REPLACE:
        swapped = PlanItem(plan.items[idx].item_id, edit.new_text)
        return replace(plan, items=plan.items[:idx] + (swapped,) + plan.items[idx + 1 :])
    # DELETE
    return replace(plan, items=plan.items[:idx] + plan.items[idx + 1 :])


@dataclass(frozen=True)
class ProposalDraft:
    """Proposal content as a participant produces it, before the engine
    assigns an id and records the author."""

    edits: tuple[Edit, ...]
    rationale: str
    claimed_deltas: tuple[float, float, float]

    def __post_init__(self):
        if not self.edits:
            raise ValidationError("a proposal must contain at least one edit")
        if not self.rationale or not self.rationale.strip():
            raise ValidationError("a proposal must carry a nonempty rationale")
        if len(self.claimed_deltas) != 3:
            raise ValidationError("claimed_deltas must have exactly 3 entries")
        for d in self.claimed_deltas:
            validate_delta(d)


@dataclass(frozen=True)
class Proposal:
    proposal_id: str
    author: str
    edits: tuple[Edit, ...]
    rationale: str
    claimed_deltas: tuple[float, float, float]

    def __post_init__(self):
        if not self.proposal_id:
            raise ValidationError("proposal_id must be nonempty")
        if not self.author:
            raise ValidationError("proposal author must be nonempty")
        ProposalDraft(self.edits, self.rationale, self.claimed_deltas)

    @property
    def draft(self) -> ProposalDraft:
        return ProposalDraft(self.edits, self.rationale, self.claimed_deltas)


def apply_proposal(plan: Plan, proposal: Proposal | ProposalDraft) -> Plan:
    """Apply all edits in order, atomically, bumping the revision once.

    Edits are sequential: each sees its predecessors' effects. Any stale
    target rejects the whole proposal and leaves the input plan untouched
    (trivially, since plans are immutable values).
    """
    current = plan
    for i, edit in enumerate(proposal.edits):
        try:
            current = apply_edit(current, edit)
        except StaleTargetError as exc:
            raise StaleTargetError(
                f"edit {i + 1} of proposal is stale: {exc.message}",
                dict(exc.details, edit_index=i),
            ) from exc
    return replace(current, revision=plan.revision + 1, parent_revision=plan.revision)


def inverse_edit(plan_before: Plan, edit: Edit) -> Edit:
    """Edit that undoes `edit` relative to the plan it applied to.

    Round-tripping restores the item texts in order; re-inserted items get
    fresh ids, which is permitted.
    """
    if edit.kind == EditKind.REPLACE:
        idx = plan_before.index_of(edit.target_id)
        return Edit(EditKind.REPLACE, target_id=edit.target_id, new_text=plan_before.items[idx].text)
    if edit.kind == EditKind.DELETE:
        idx = plan_before.index_of(edit.target_id)
        deleted_text = plan_before.items[idx].text
        if idx == 0:
            return Edit(EditKind.INSERT_AT_START, new_text=deleted_text)
        return Edit(
            EditKind.INSERT_AFTER,
            target_id=plan_before.items[idx - 1].item_id,
            new_text=deleted_text,
        )
    if edit.kind == EditKind.INSERT_AFTER:
        plan_before.index_of(edit.target_id)  # applicability check
    # Both inserts invert to deleting the id the insert will allocate.
    return Edit(EditKind.DELETE, target_id=make_item_id(plan_before.next_item_seq))
