"""Participant contract: who may score, propose, and vote.

Two implementations ship with the engine: a deterministic scripted oracle for
tests and simulation (oracle.py) and a vendor-agnostic remote text-model
adapter speaking a strict line grammar (grammar.py + adapter.py).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from indigo.errors import ValidationError


class Role(str, Enum):
    HUMAN = "human"
    AI = "ai"


class Capability(str, Enum):
    SCORER = "scorer"
    PROPOSER = "proposer"
    VOTER = "voter"


@dataclass(frozen=True)
class AdapterConfig:
    """How to reach a remote text model. The endpoint receives the prompt as
    the request body and must answer in the response grammar."""

    endpoint_url: str
    auth_header: str | None = None
    model_name: str = ""
    max_retries: int = 2
    timeout_seconds: int = 30

    def __post_init__(self):
        if not self.endpoint_url:
            raise ValidationError("adapter endpoint_url must be nonempty")
        if self.max_retries < 0:
            raise ValidationError("max_retries must be >= 0")
        if self.timeout_seconds <= 0:
            raise ValidationError("timeout_seconds must be positive")


@dataclass(frozen=True)
class ParticipantDescriptor:
    participant_id: str
    role: Role
    capabilities: tuple[Capability, ...]
    adapter_config: AdapterConfig | None = None

    def __post_init__(self):
        if not self.participant_id:
            raise ValidationError("participant_id must be nonempty")
        if not self.capabilities:
            raise ValidationError(f"participant {self.participant_id!r} has no capabilities")
        if len(set(self.capabilities)) != len(self.capabilities):
            raise ValidationError(f"participant {self.participant_id!r} repeats capabilities")
        if self.role == Role.HUMAN and self.adapter_config is not None:
            raise ValidationError("human participants carry no adapter_config")

    def can(self, capability: Capability) -> bool:
        return capability in self.capabilities
