"""HTTP surface for the session engine.

JSON in, JSON out; every error is an ApiError body {code, message, details}
whose code comes straight from the engine's error taxonomy. Command endpoints
authenticate with the per-participant token issued at session creation
(X-Participant-Token header). The event feed long-polls: a request returns as
soon as events past the cursor exist, or empty after the poll window.
"""

from __future__ import annotations

from typing import Any

from fastapi import Body, FastAPI, Header, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from indigo import engine
from indigo.errors import IndigoError, ValidationError
from indigo.model import Criterion, ScoreVector, describe_presets, preset_schema
from indigo.runner import AdapterAutoDriver
from indigo.serialize import (
    convergence_from_wire,
    draft_from_wire,
    goal_from_wire,
    participant_from_wire,
    schema_from_wire,
)
from indigo.store import SessionManager

STATUS_BY_CODE = {
    "validation": 422,
    "phase": 409,
    "conflict": 409,
    "authorization": 403,
    "not_found": 404,
    "stale_target": 409,
    "corruption": 500,
    "storage": 500,
    "upstream_adapter": 502,
    "internal": 500,
}


def _event_wire(event) -> dict:
    return {
        "seq": event.seq,
        "session_id": event.session_id,
        "ts": event.ts,
        "kind": event.kind,
        "payload": event.payload,
    }


def _schema_from_body(raw: Any):
    if not isinstance(raw, dict):
        raise ValidationError("schema must be an object")
    if "preset" in raw:
        third = raw.get("third_criterion")
        criterion = (
            Criterion(str(third["name"]), str(third.get("description", ""))) if third else None
        )
        return preset_schema(str(raw["preset"]), criterion)
    return schema_from_wire(raw)


def create_app(
    manager: SessionManager,
    long_poll_seconds: float = 30.0,
    auto_driver: AdapterAutoDriver | None = None,
) -> FastAPI:
    app = FastAPI(title="indigo", docs_url=None, redoc_url=None)
    # The browser console is served as static files from anywhere; auth is
    # the per-participant token, not the origin.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(IndigoError)
    async def _indigo_error(request: Request, exc: IndigoError) -> JSONResponse:
        return JSONResponse(
            status_code=STATUS_BY_CODE.get(exc.code, 500),
            content={"code": exc.code, "message": exc.message, "details": exc.details},
        )

    def _poke(session_id: str) -> None:
        if auto_driver is not None:
            auto_driver.poke(session_id)

    @app.get("/v1/presets")
    def presets() -> dict:
        return {"presets": describe_presets()}

    @app.post("/v1/sessions", status_code=201)
    def create_session(body: dict = Body(...)) -> dict:
        for field in ("goal", "schema", "weights", "initial_plan", "roster"):
            if field not in body:
                raise ValidationError(f"missing field: {field}")
        roster = [participant_from_wire(p) for p in body["roster"]]
        convergence = (
            convergence_from_wire(body["convergence"]) if "convergence" in body else None
        )
        live = manager.create_session(
            goal=goal_from_wire(body["goal"]),
            schema=_schema_from_body(body["schema"]),
            initial_weights=[float(w) for w in body["weights"]],
            initial_plan_items=[str(t) for t in body["initial_plan"]],
            roster=roster,
            convergence=convergence,
            merge_mode=str(body.get("merge_mode", engine.MERGE_MEAN)),
            session_id=body.get("session_id"),
        )
        _poke(live.state.session_id)
        return {
            "session": engine.state_to_wire(live.state),
            "tokens": dict(live.tokens),
        }

    @app.get("/v1/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        return manager.snapshot(session_id)

    @app.get("/v1/sessions/{session_id}/events")
    def get_events(
        session_id: str,
        after: int = Query(-1),
        wait: float | None = Query(None, ge=0),
    ) -> dict:
        window = long_poll_seconds if wait is None else min(wait, long_poll_seconds)
        events = manager.events_after(session_id, after, wait_seconds=window)
        return {"events": [_event_wire(e) for e in events]}

    def _auth(session_id: str, body: dict, token: str | None) -> str:
        participant = body.get("participant")
        if not participant:
            raise ValidationError("missing field: participant")
        live = manager.get(session_id)
        manager.authorize(live, str(participant), token)
        return str(participant)

    @app.post("/v1/sessions/{session_id}/scores")
    def post_scores(
        session_id: str,
        body: dict = Body(...),
        x_participant_token: str | None = Header(None),
    ) -> dict:
        participant = _auth(session_id, body, x_participant_token)
        if body.get("abstain"):
            state, _ = manager.abstain(session_id, participant)
        else:
            if "scores" not in body:
                raise ValidationError("missing field: scores")
            scores = ScoreVector.decode([str(s) for s in body["scores"]])
            state, _ = manager.submit_scores(session_id, participant, scores)
        _poke(session_id)
        return engine.state_to_wire(state)

    @app.post("/v1/sessions/{session_id}/proposals")
    def post_proposal(
        session_id: str,
        body: dict = Body(...),
        x_participant_token: str | None = Header(None),
    ) -> dict:
        participant = _auth(session_id, body, x_participant_token)
        proposal_id = None
        if body.get("abstain"):
            state, _ = manager.abstain(session_id, participant)
        else:
            if "proposal" not in body:
                raise ValidationError("missing field: proposal")
            draft = draft_from_wire(body["proposal"])
            state, events = manager.submit_proposal(session_id, participant, draft)
            for event in events:
                if event.kind == "ProposalSubmitted" and event.payload.get("participant") == participant:
                    proposal_id = event.payload["proposal"]["proposal_id"]
        _poke(session_id)
        return {"session": engine.state_to_wire(state), "proposal_id": proposal_id}

    @app.post("/v1/sessions/{session_id}/ballots")
    def post_ballot(
        session_id: str,
        body: dict = Body(...),
        x_participant_token: str | None = Header(None),
    ) -> dict:
        participant = _auth(session_id, body, x_participant_token)
        if body.get("abstain"):
            state, _ = manager.abstain(session_id, participant)
        else:
            if "choice" not in body:
                raise ValidationError("missing field: choice")
            state, _ = manager.cast_ballot(session_id, participant, str(body["choice"]))
        _poke(session_id)
        return engine.state_to_wire(state)

    @app.post("/v1/sessions/{session_id}/weights")
    def post_weights(
        session_id: str,
        body: dict = Body(...),
        x_participant_token: str | None = Header(None),
    ) -> dict:
        participant = _auth(session_id, body, x_participant_token)
        if "weights" not in body:
            raise ValidationError("missing field: weights")
        raw = [float(w) for w in body["weights"]]
        state, _ = manager.update_weights(session_id, participant, raw)
        _poke(session_id)
        return engine.state_to_wire(state)

    @app.post("/v1/sessions/{session_id}/abandon")
    def post_abandon(
        session_id: str,
        body: dict = Body(...),
        x_participant_token: str | None = Header(None),
    ) -> dict:
        participant = _auth(session_id, body, x_participant_token)
        state, _ = manager.abandon(session_id, participant, str(body.get("reason", "")))
        return engine.state_to_wire(state)

    return app
