"""A match: consecutive games with rotating dealer, cumulative scores and
optional bot seats."""

from __future__ import annotations

from typing import Optional

from ..errors import IllegalActionError
from .bot import DEFAULT_SAMPLES, bot_action, poker_bot_action
from .game import FINISHED, GameConfig, PontGame
from .poker import PokerTable
from .scoring import rewards


class PontMatch:
    def __init__(
        self,
        config: GameConfig,
        bot_seats: Optional[set[int]] = None,
        bot_samples: int = DEFAULT_SAMPLES,
    ):
        self.config = config
        self.bot_seats = set(bot_seats or ())
        self.bot_samples = bot_samples
        self.scores = {s: 0.0 for s in range(config.players)}
        self.games_played = 0
        self.game_no = 0
        self.dealer = 0
        self.pot = 0  # poker only
        self.game = self._new_game()
        self.run_bots()

    def _new_game(self):
        if self.config.variant == "poker":
            return PokerTable(self.config, self.dealer, self.game_no, pot=self.pot)
        return PontGame(self.config, self.dealer, self.game_no)

    @property
    def phase(self) -> str:
        return self.game.phase

    @property
    def turn(self) -> Optional[int]:
        return self.game.turn

    def legal_actions(self, seat: int) -> list[dict]:
        acts = self.game.legal_actions(seat)
        if self.game.phase == FINISHED:
            return [{"type": "next"}]
        return acts

    def submit(self, seat: int, action: dict) -> None:
        if action.get("type") == "next":
            if self.game.phase != FINISHED:
                raise IllegalActionError("the game is still running")
            self.next_game()
            return
        self.game.submit(seat, action)
        self._settle_if_finished()
        self.run_bots()

    def _settle_if_finished(self) -> None:
        if self.game.phase != FINISHED or self.game.result is None:
            return
        if getattr(self.game, "_settled", False):
            return
        result = self.game.result
        if self.config.variant == "poker":
            for s, chips in enumerate(self.game.net):
                self.scores[s] += chips
            self.pot = self.game.pot
        else:
            for s, delta in result["deltas"].items():
                self.scores[int(s)] += delta
        self.games_played += 1
        self.game._settled = True

    def next_game(self) -> None:
        self.dealer = (self.dealer + 1) % self.config.players
        self.game_no += 1
        self.game = self._new_game()
        self.run_bots()

    def run_bots(self) -> None:
        guard = 0
        while (
            self.game.phase != FINISHED
            and self.game.turn is not None
            and self.game.turn in self.bot_seats
        ):
            seat = self.game.turn
            if self.config.variant == "poker":
                action = poker_bot_action(
                    self.game, seat, self.config.seed, self.bot_samples
                )
            else:
                action = bot_action(self.game, seat, self.config.seed, self.bot_samples)
            self.game.submit(seat, action)
            self._settle_if_finished()
            guard += 1
            if guard > 2000:
                raise RuntimeError("bot loop did not converge")

    def rewards(self) -> dict[int, float]:
        return rewards(dict(self.scores), partnerships=self.config.partnerships)
