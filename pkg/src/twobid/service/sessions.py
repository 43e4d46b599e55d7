"""Game sessions: single-writer state around a PontMatch, optimistic
sequence numbers, and append-only JSON-lines persistence.

Only human actions are logged; bot moves are deterministic given the
config seed, so replaying the log reconstructs the exact state.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..errors import TwobidError
from ..pont import FINISHED, GameConfig, PontMatch


class UnknownSessionError(TwobidError, KeyError):
    pass


class StaleSeqError(TwobidError, ValueError):
    def __init__(self, current: int):
        self.current = current
        super().__init__(f"stale seq; current is {current}")


class SeatError(TwobidError, ValueError):
    pass


@dataclass
class Session:
    id: str
    config: GameConfig
    bot_seats: set[int]
    match: PontMatch
    log_path: Optional[Path]
    joined: dict[int, bool] = field(default_factory=dict)
    seq: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)

    def human_seats(self) -> list[int]:
        return [s for s in range(self.config.players) if s not in self.bot_seats]

    def free_seats(self) -> list[int]:
        return [s for s in self.human_seats() if not self.joined.get(s)]

    def _append_log(self, record: dict) -> None:
        if self.log_path is None:
            return
        with self.log_path.open("a") as fh:
            fh.write(json.dumps(record) + "\n")

    def join(self, seat: Optional[int] = None) -> int:
        if seat is None:
            free = self.free_seats()
            if not free:
                raise SeatError("no free seats")
            seat = free[0]
        if seat in self.bot_seats:
            raise SeatError(f"seat {seat} is a bot")
        if not 0 <= seat < self.config.players:
            raise SeatError(f"no seat {seat}")
        if not self.joined.get(seat):
            self.joined[seat] = True
            self.seq += 1
            self._append_log({"v": 1, "type": "join", "seat": seat})
        return seat

    def submit(self, seat: int, action: dict, seq: int) -> None:
        if seq != self.seq:
            raise StaleSeqError(self.seq)
        if seat in self.bot_seats:
            raise SeatError(f"seat {seat} is a bot")
        self.match.submit(seat, action)  # raises IllegalActionError untouched
        self.seq += 1
        self._append_log({"v": 1, "type": "action", "seat": seat, "action": action})

    def state(self, seat: int) -> dict:
        game = self.match.game
        view = game.view(seat)
        legal = self.match.legal_actions(seat) if game.turn == seat or (
            game.phase == FINISHED and seat not in self.bot_seats
        ) else []
        return {
            "v": 1,
            "session": self.id,
            "seq": self.seq,
            "seat": seat,
            "bot_seats": sorted(self.bot_seats),
            "scores": {str(s): v for s, v in self.match.scores.items()},
            "rewards": {str(s): v for s, v in self.match.rewards().items()},
            "games_played": self.match.games_played,
            "view": view,
            "legal": legal,
        }


class SessionManager:
    """Creates, persists and replays sessions under one data directory."""

    def __init__(self, data_dir: Optional[str | Path] = None, bot_samples: int = 16):
        self.data_dir = Path(data_dir) if data_dir else None
        if self.data_dir:
            self.data_dir.mkdir(parents=True, exist_ok=True)
        self.bot_samples = bot_samples
        self.sessions: dict[str, Session] = {}
        if self.data_dir:
            for path in sorted(self.data_dir.glob("*.jsonl")):
                try:
                    self._load(path)
                except (TwobidError, ValueError, KeyError) as exc:
                    raise TwobidError(f"corrupt session log {path}: {exc}") from exc

    def create(self, config: GameConfig, bot_seats: set[int]) -> Session:
        for s in bot_seats:
            if not 0 <= s < config.players:
                raise SeatError(f"bot seat {s} out of range")
        sid = uuid.uuid4().hex[:12]
        log_path = self.data_dir / f"{sid}.jsonl" if self.data_dir else None
        match = PontMatch(config, bot_seats=bot_seats, bot_samples=self.bot_samples)
        session = Session(sid, config, set(bot_seats), match, log_path)
        if log_path:
            record = {
                "v": 1,
                "type": "create",
                "session": sid,
                "config": {
                    "players": config.players,
                    "partnerships": config.partnerships,
                    "variant": config.variant,
                    "seed": config.seed,
                    "strict_scoring": config.strict_scoring,
                },
                "bot_seats": sorted(bot_seats),
            }
            log_path.write_text(json.dumps(record) + "\n")
        self.sessions[sid] = session
        return session

    def _load(self, path: Path) -> None:
        lines = [json.loads(l) for l in path.read_text().splitlines() if l.strip()]
        if not lines or lines[0].get("type") != "create":
            raise ValueError("log must start with a create record")
        head = lines[0]
        config = GameConfig(**head["config"])
        bot_seats = set(head["bot_seats"])
        match = PontMatch(config, bot_seats=bot_seats, bot_samples=self.bot_samples)
        session = Session(head["session"], config, bot_seats, match, path)
        for record in lines[1:]:
            if record["type"] == "join":
                session.joined[record["seat"]] = True
                session.seq += 1
            elif record["type"] == "action":
                match.submit(record["seat"], record["action"])
                session.seq += 1
        self.sessions[session.id] = session

    def get(self, sid: str) -> Session:
        try:
            return self.sessions[sid]
        except KeyError:
            raise UnknownSessionError(sid) from None
