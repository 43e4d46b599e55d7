"""FastAPI app: pont session endpoints (REST + WebSocket) plus thin
wrappers over the tables and chart tools.

All message bodies carry a schema version field v=1.  The WebSocket
transport exchanges exactly the same JSON payloads as the REST routes.
"""

from __future__ import annotations

import os
from typing import Optional

from fastapi import FastAPI, HTTPException, Query, WebSocket, WebSocketDisconnect
from pydantic import BaseModel, Field

from ..charts import ChartSeries, estimate_exponent, fake_chart, hourly_grid, match_category_exponent
from ..errors import DomainError, IllegalActionError, InsufficientDataError
from ..pont import GameConfig
from ..tables import render_table
from .sessions import SeatError, SessionManager, StaleSeqError, UnknownSessionError

DATA_DIR_ENV = "TWOBID_DATA_DIR"


class GameConfigModel(BaseModel):
    players: int = 3
    partnerships: bool = False
    variant: str = "full"
    seed: int = 0
    strict_scoring: bool = False


class CreateSessionRequest(BaseModel):
    v: int = 1
    config: GameConfigModel = Field(default_factory=GameConfigModel)
    bot_seats: list[int] = Field(default_factory=list)


class JoinRequest(BaseModel):
    v: int = 1
    seat: Optional[int] = None


class SubmitRequest(BaseModel):
    v: int = 1
    seat: int
    seq: int
    action: dict


class SessionInfo(BaseModel):
    v: int = 1
    session: str
    players: int
    variant: str
    bot_seats: list[int]
    free_seats: list[int]
    seq: int


class TableResponse(BaseModel):
    v: int = 1
    kind: str
    format: str
    table: str


class FakeChartRequest(BaseModel):
    v: int = 1
    start: float = 1.0
    stop: float = 150.0
    component: Optional[int] = None


class ChartPayload(BaseModel):
    v: int = 1
    times: list[float]
    values: list[float]
    meta: str = ""


class EstimateResponse(BaseModel):
    v: int = 1
    exponent: float
    matched_category: Optional[int] = None
    matched_exponent: Optional[float] = None


def create_app(data_dir: Optional[str] = None, bot_samples: int = 16) -> FastAPI:
    app = FastAPI(title="twobid service")
    manager = SessionManager(
        data_dir if data_dir is not None else os.environ.get(DATA_DIR_ENV),
        bot_samples=bot_samples,
    )
    app.state.manager = manager

    def _info(session) -> SessionInfo:
        return SessionInfo(
            session=session.id,
            players=session.config.players,
            variant=session.config.variant,
            bot_seats=sorted(session.bot_seats),
            free_seats=session.free_seats(),
            seq=session.seq,
        )

    def _get(sid: str):
        try:
            return manager.get(sid)
        except UnknownSessionError:
            raise HTTPException(status_code=404, detail="unknown session")

    def _submit(session, seat: int, seq: int, action: dict) -> dict:
        with session.lock:
            try:
                session.submit(seat, action, seq)
            except StaleSeqError as exc:
                raise HTTPException(
                    status_code=409,
                    detail={"error": "stale-seq", "seq": exc.current},
                )
            except (IllegalActionError, SeatError, DomainError) as exc:
                raise HTTPException(
                    status_code=400,
                    detail={"error": "illegal-action", "reason": str(exc)},
                )
            return session.state(seat)

    # -- sessions ------------------------------------------------------------

    @app.post("/v1/sessions", response_model=SessionInfo)
    def create_session(req: CreateSessionRequest):
        try:
            config = GameConfig(**req.config.model_dump())
            session = manager.create(config, set(req.bot_seats))
        except (DomainError, SeatError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return _info(session)

    @app.post("/v1/sessions/{sid}/join")
    def join_session(sid: str, req: JoinRequest):
        session = _get(sid)
        with session.lock:
            try:
                seat = session.join(req.seat)
            except SeatError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            return {"v": 1, "session": sid, "seat": seat, "seq": session.seq}

    @app.get("/v1/sessions/{sid}/state")
    def session_state(sid: str, seat: int = Query(...)):
        session = _get(sid)
        with session.lock:
            return session.state(seat)

    @app.get("/v1/sessions/{sid}/legal")
    def session_legal(sid: str, seat: int = Query(...)):
        session = _get(sid)
        with session.lock:
            state = session.state(seat)
        return {"v": 1, "session": sid, "seq": state["seq"], "legal": state["legal"]}

    @app.post("/v1/sessions/{sid}/actions")
    def submit_action(sid: str, req: SubmitRequest):
        session = _get(sid)
        return _submit(session, req.seat, req.seq, req.action)

    @app.websocket("/v1/sessions/{sid}/ws")
    async def session_ws(ws: WebSocket, sid: str, seat: int = Query(...)):
        await ws.accept()
        try:
            session = manager.get(sid)
        except UnknownSessionError:
            await ws.send_json({"v": 1, "error": "unknown-session"})
            await ws.close()
            return
        with session.lock:
            await ws.send_json(session.state(seat))
        try:
            while True:
                msg = await ws.receive_json()
                kind = msg.get("type")
                if kind == "state":
                    with session.lock:
                        await ws.send_json(session.state(seat))
                elif kind == "submit":
                    with session.lock:
                        try:
                            session.submit(msg["seat"], msg["action"], msg["seq"])
                            await ws.send_json(session.state(seat))
                        except StaleSeqError as exc:
                            await ws.send_json(
                                {"v": 1, "error": "stale-seq", "seq": exc.current}
                            )
                        except (IllegalActionError, SeatError, DomainError) as exc:
                            await ws.send_json(
                                {"v": 1, "error": "illegal-action", "reason": str(exc)}
                            )
                else:
                    await ws.send_json({"v": 1, "error": "bad-message"})
        except WebSocketDisconnect:
            return

    # -- math/tables wrappers ---------------------------------------------------

    @app.get("/v1/tables/{kind}", response_model=TableResponse)
    def table(kind: str, format: str = "text"):
        try:
            return TableResponse(kind=kind, format=format, table=render_table(kind, format))
        except DomainError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.post("/v1/charts/fake", response_model=ChartPayload)
    def make_fake_chart(req: FakeChartRequest):
        try:
            series = fake_chart(hourly_grid(req.start, req.stop), req.component)
        except DomainError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return ChartPayload(times=list(series.times), values=list(series.values), meta=series.meta)

    @app.post("/v1/charts/estimate", response_model=EstimateResponse)
    def estimate(req: ChartPayload):
        try:
            series = ChartSeries(tuple(req.times), tuple(req.values), req.meta)
            slope = estimate_exponent(series)
            cat, exp = match_category_exponent(series)
        except (DomainError, InsufficientDataError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return EstimateResponse(exponent=slope, matched_category=cat, matched_exponent=exp)

    return app


app = create_app()
