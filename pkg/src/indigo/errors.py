"""Shared error taxonomy.

Every error raised by the engine maps onto exactly one wire-level code, so the
HTTP layer can translate exceptions mechanically and clients can branch on
`code` without parsing messages.
"""

from __future__ import annotations

from typing import Any


class IndigoError(Exception):
    """Base class. `code` is the stable machine-readable identifier."""

    code = "internal"

    def __init__(self, message: str, details: dict[str, Any] | None = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class ValidationError(IndigoError):
    code = "validation"


class PhaseError(IndigoError):
    """Operation not legal in the session's current phase."""

    code = "phase"


class ConflictError(IndigoError):
    """Duplicate submission or other already-done conflict."""

    code = "conflict"


class AuthorizationError(IndigoError):
    """Caller lacks the role or capability the operation requires."""

    code = "authorization"


class NotFoundError(IndigoError):
    code = "not_found"


class StaleTargetError(IndigoError):
    """An edit targets an item id that does not exist in the plan revision
    it is being applied to; signals the proposal was computed against an
    older revision."""

    code = "stale_target"


class CorruptionError(IndigoError):
    """Journal invariant violation (seq gap, post-terminal append, bad record)."""

    code = "corruption"


class StorageError(IndigoError):
    """Journal write failure. The session halts rather than diverging from
    its log."""

    code = "storage"


class UpstreamAdapterError(IndigoError):
    """Remote AI endpoint failed (transport error, HTTP failure, timeout)."""

    code = "upstream_adapter"
