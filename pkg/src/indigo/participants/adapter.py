"""Vendor-agnostic remote text-model participant.

One request per turn: the prompt goes to the configured endpoint as the raw
request body, the response body is parsed against the strict grammar. A
malformed response is retried with a corrective preamble up to max_retries
times, after which the participant abstains for the phase. Transport failures
surface as upstream_adapter errors after the same retry budget.
"""

from __future__ import annotations

from typing import Callable, Protocol

import requests

from indigo.engine import Phase
from indigo.errors import UpstreamAdapterError
from indigo.model import ScoreVector
from indigo.participants import AdapterConfig, ParticipantDescriptor
from indigo.participants.grammar import ResponseFormatError, parse_response
from indigo.plan import Plan, ProposalDraft

Transport = Callable[[AdapterConfig, str], str]


class ExchangeLog(Protocol):
    def __call__(self, request_body: str, response_body: str | None, error: str | None) -> None: ...


def http_transport(config: AdapterConfig, body: str) -> str:
    """POST the prompt as the message body; the response body is the reply."""
    headers = {"Content-Type": "text/plain; charset=utf-8"}
    if config.auth_header:
        headers["Authorization"] = config.auth_header
    try:
        response = requests.post(
            config.endpoint_url,
            data=body.encode("utf-8"),
            headers=headers,
            timeout=config.timeout_seconds,
        )
        response.raise_for_status()
    except requests.RequestException as exc:
        raise UpstreamAdapterError(f"remote call failed: {exc}") from exc
    return response.text


def _corrective_preamble(error: str) -> str:
    return (
        f"Your previous reply was rejected: {error}\n"
        "Reply again using EXACTLY the response format specified below, "
        "with no surrounding prose.\n\n"
    )


class RemoteParticipant:
    """Drives one adapter-configured AI seat."""

    def __init__(
        self,
        descriptor: ParticipantDescriptor,
        transport: Transport = http_transport,
        exchange_log: ExchangeLog | None = None,
    ):
        if descriptor.adapter_config is None:
            raise UpstreamAdapterError(
                f"participant {descriptor.participant_id!r} has no adapter_config"
            )
        self.descriptor = descriptor
        self.config = descriptor.adapter_config
        self._transport = transport
        self._log = exchange_log

    def respond(
        self, prompt: str, phase: Phase, plan: Plan
    ) -> ScoreVector | ProposalDraft | str | None:
        """Call the endpoint and parse; None means the participant abstains."""
        attempts = self.config.max_retries + 1
        body = prompt
        last_transport_error: UpstreamAdapterError | None = None
        for attempt in range(attempts):
            try:
                raw = self._transport(self.config, body)
            except UpstreamAdapterError as exc:
                last_transport_error = exc
                if self._log:
                    self._log(body, None, str(exc))
                continue
            last_transport_error = None
            if self._log:
                self._log(body, raw, None)
            try:
                return parse_response(raw, phase, plan)
            except ResponseFormatError as exc:
                body = _corrective_preamble(exc.message) + prompt
        if last_transport_error is not None:
            # The endpoint was unreachable on the final attempt.
            raise UpstreamAdapterError(
                f"adapter for {self.descriptor.participant_id!r} failed after "
                f"{attempts} attempts: {last_transport_error.message}"
            )
        return None  # parse retries exhausted: abstain for the phase
