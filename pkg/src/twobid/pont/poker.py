"""Poker pont: chip betting replaces the auction; the play itself reuses
the standard trick rules through an embedded game.

Chips: every player antes into their own sector of the pool; the pot
carries over between games.  Upgrades cost one chip per new card, the
declarer's increases one chip each, and responding costs one chip per
increase.  On success the declarer takes pool and pot; on failure the
active opponents split the declarer's chips and the pot proportionally
to their tricks, fractions going to the pot.
"""

from __future__ import annotations

from typing import Optional

from ..errors import DomainError, IllegalActionError
from .bids import PontBid, bid_index, bid_order
from .cards import SUITS, card_from_str, card_str
from .game import FINISHED, PLAY, GameConfig, PontGame

BETTING = "betting"
UPGRADE_OFFER = "upgrade-offer"
UPGRADE_DISCARD = "upgrade-discard"
TIE_BID = "tie-bid"
DECLARE = "declare"
RESPOND = "respond"
PAYOUT = "finished"

MAX_POKER_UPGRADES = 3
MAX_POKER_INCREASES = 3

# minimal contract tricks by final hand size: 3/6, 4/7 for 3-4 players,
# 4/6, 5/7 for 2, and 6/8, 6/9 for either
_MIN_TRICKS_MULTI = {6: 3, 7: 4, 8: 6, 9: 6}
_MIN_TRICKS_TWO = {6: 4, 7: 5, 8: 6, 9: 6}


class PokerTable:
    """One poker-pont deal plus the chip pool around it."""

    def __init__(self, config: GameConfig, dealer: int = 0, game_no: int = 0,
                 pot: int = 0, ante: int = 1):
        if config.variant != "poker":
            raise DomainError("PokerTable needs the poker variant")
        if config.partnerships:
            raise DomainError("poker pont is for individual players")
        self.config = config
        self.game = PontGame(config, dealer, game_no)
        self.dealer = self.game.dealer
        n = config.players
        self.pot = pot
        self.ante = ante
        self.bets = [ante] * n          # sector chips that count for calling
        self.extra = [0] * n            # upgrade/increase/respond chips
        self.net = [-ante] * n          # chip flow per seat this game
        self.phase = BETTING
        self.turn: Optional[int] = self.dealer
        self.folded: set[int] = set()
        self.checked: set[int] = set()  # passed before any raise
        self.raised_any = False
        self.closer: Optional[int] = None
        self.betting_round = 0
        self.to_act: list[int] = self._cycle_from(self.dealer)
        self.upgrade_queue: list[int] = []
        self.discard_seat: Optional[int] = None
        self.tie_queue: list[int] = []
        self.tie_bids: dict[int, PontBid] = {}
        self.tie_bid_floor: Optional[PontBid] = None
        self.declarer: Optional[int] = None
        self.increases = 0
        self.active_opponents: set[int] = set()
        self.respond_queue: list[int] = []
        self.result: Optional[dict] = None

    # -- helpers ---------------------------------------------------------------

    @property
    def players(self) -> int:
        return self.config.players

    def _cycle_from(self, seat: int) -> list[int]:
        return [
            (seat + i) % self.players
            for i in range(self.players)
            if (seat + i) % self.players not in self.folded
        ]

    def _max_bet(self) -> int:
        live = [self.bets[s] for s in range(self.players) if s not in self.folded]
        return max(live) if live else 0

    def _pay(self, seat: int, chips: int, to_bets: bool) -> None:
        if chips < 0:
            raise IllegalActionError("chip amounts must be non-negative")
        if to_bets:
            self.bets[seat] += chips
        else:
            self.extra[seat] += chips
        self.net[seat] -= chips

    # -- legal actions -----------------------------------------------------------

    def legal_actions(self, seat: int) -> list[dict]:
        if self.phase == PAYOUT or self.turn != seat:
            return []
        if self.phase == BETTING:
            acts: list[dict] = [{"type": "pass"}]
            cost = self._max_bet() - self.bets[seat]
            acts.append({"type": "call", "cost": cost})
            acts.append({"type": "raise", "chips": 1})
            return acts
        if self.phase == UPGRADE_OFFER:
            return [{"type": "upgrade"}, {"type": "skip"}]
        if self.phase == UPGRADE_DISCARD:
            return [
                {"type": "discard", "card": card_str(c)}
                for c in self.game.hands[seat]
            ]
        if self.phase == TIE_BID:
            acts = [{"type": "pass"}]
            for b in bid_order(self.config.bid_players, "poker"):
                if self.tie_bid_floor is None or bid_index(
                    b, self.config.bid_players, "poker"
                ) >= bid_index(self.tie_bid_floor, self.config.bid_players, "poker"):
                    acts.append({"type": "bid", "bid": str(b)})
            return acts
        if self.phase == DECLARE:
            acts = []
            if (
                self.increases < MAX_POKER_INCREASES
                and self.game.cards_per_hand() < 9
                and len(self.game.stock) >= self.players
            ):
                acts.append({"type": "increase"})
            for trump in list(SUITS) + [None]:
                acts.append({"type": "declare", "trump": trump})
            return acts
        if self.phase == RESPOND:
            return [{"type": "respond", "cost": self.increases}, {"type": "pass"}]
        if self.phase == PLAY:
            return self.game.legal_actions(seat)
        return []

    # -- event entry ----------------------------------------------------------------

    def submit(self, seat: int, action: dict) -> None:
        if self.phase == PAYOUT:
            raise IllegalActionError("game is finished")
        if seat != self.turn:
            raise IllegalActionError(f"seat {seat} acted out of turn")
        kind = action.get("type")
        if self.phase == BETTING:
            self._bet(seat, action)
        elif self.phase == UPGRADE_OFFER:
            if kind == "upgrade":
                self._take_upgrade(seat)
            elif kind == "skip":
                self._advance_upgrade()
            else:
                raise IllegalActionError("upgrade offer expects upgrade or skip")
        elif self.phase == UPGRADE_DISCARD:
            if kind != "discard":
                raise IllegalActionError("expected a discard")
            self._upgrade_discard(seat, action)
        elif self.phase == TIE_BID:
            self._tie_bid(seat, action)
        elif self.phase == DECLARE:
            if kind == "increase":
                self._increase(seat)
            elif kind == "declare":
                self._declare(seat, action)
            else:
                raise IllegalActionError("declare phase expects increase/declare")
        elif self.phase == RESPOND:
            self._respond(seat, action)
        elif self.phase == PLAY:
            self.game.submit(seat, action)
            if self.game.phase == FINISHED:
                self._payout()
            else:
                self.turn = self.game.turn

    # -- betting ------------------------------------------------------------------

    def _bet(self, seat: int, action: dict) -> None:
        kind = action.get("type")
        if kind == "raise":
            chips = int(action.get("chips", 1))
            if chips < 1:
                raise IllegalActionError("a raise adds at least one chip")
            self._pay(seat, self._max_bet() - self.bets[seat] + chips, to_bets=True)
            self.raised_any = True
            self.closer = None
            self.checked.clear()
            self.to_act = [s for s in self._cycle_from((seat + 1) % self.players) if s != seat]
            if not self.to_act:
                self._betting_round_over()
            else:
                self.turn = self.to_act[0]
            return
        if kind == "call":
            cost = self._max_bet() - self.bets[seat]
            self._pay(seat, cost, to_bets=True)
            if cost == 0 and self.closer is None:
                self.closer = seat  # first call without adding closes
            self._advance_bet(seat)
            return
        if kind == "pass":
            if self.raised_any:
                self.folded.add(seat)
            else:
                self.checked.add(seat)
            self._advance_bet(seat)
            return
        raise IllegalActionError(f"bad betting action {kind!r}")

    def _advance_bet(self, seat: int) -> None:
        if seat in self.to_act:
            self.to_act.remove(seat)
        self.to_act = [s for s in self.to_act if s not in self.folded]
        live = [s for s in range(self.players) if s not in self.folded]
        if self.raised_any and len(live) == 1:
            self._make_declarer(live[0])  # everyone folded on the raiser
            return
        if self.closer is not None and all(
            s == self.closer or s in self.folded for s in range(self.players)
        ):
            self._make_declarer(self.closer)
            return
        if not self.to_act:
            self._betting_round_over()
        else:
            self.turn = self.to_act[0]

    def _betting_round_over(self) -> None:
        live = [s for s in range(self.players) if s not in self.folded]
        if self.raised_any and len(live) == 1:
            self._make_declarer(live[0])
            return
        if self.closer is not None and all(
            self.bets[s] < self.bets[self.closer] for s in live if s != self.closer
        ):
            # everyone else stayed below the closer: closer takes it
            self._make_declarer(self.closer)
            return
        if self.betting_round < MAX_POKER_UPGRADES:
            self.betting_round += 1
            self.phase = UPGRADE_OFFER
            start = self.closer if self.closer is not None else self.dealer
            self.upgrade_queue = self._cycle_from(start)
            self.turn = self.upgrade_queue[0]
            return
        # no more upgrades: one round of bidding among the tied players
        maxb = self._max_bet()
        tied = [s for s in live if self.bets[s] == maxb]
        if len(tied) >= 2 and self.raised_any:
            self.phase = TIE_BID
            start = self.closer if self.closer in tied else tied[0]
            self.tie_queue = [s for s in self._cycle_from(start) if s in tied]
            self.turn = self.tie_queue[0]
            return
        self._dead_game(all_passed=not self.raised_any)

    # -- upgrades -------------------------------------------------------------------

    def _take_upgrade(self, seat: int) -> None:
        if not self.game.stock:
            raise IllegalActionError("stock exhausted")
        self._pay(seat, 1, to_bets=False)
        self.game.hands[seat].append(self.game.stock.pop(0))
        self.game.hands[seat].sort()
        self.phase = UPGRADE_DISCARD
        self.discard_seat = seat

    def _upgrade_discard(self, seat: int, action: dict) -> None:
        card = action.get("card")
        card = card_from_str(card) if isinstance(card, str) else card
        if seat != self.discard_seat or card not in self.game.hands[seat]:
            raise IllegalActionError("bad upgrade discard")
        self.game.hands[seat].remove(card)
        self.game.discards.append(card)
        self.discard_seat = None
        self.phase = UPGRADE_OFFER
        self._advance_upgrade()

    def _advance_upgrade(self) -> None:
        self.upgrade_queue.pop(0)
        if self.upgrade_queue:
            self.turn = self.upgrade_queue[0]
            return
        # next betting round, the closer (or dealer) speaks first
        self.phase = BETTING
        self.checked.clear()
        start = self.closer if self.closer is not None else self.dealer
        self.closer = None
        self.to_act = self._cycle_from(start)
        self.turn = self.to_act[0]

    # -- tie bidding -------------------------------------------------------------------

    def _tie_bid(self, seat: int, action: dict) -> None:
        kind = action.get("type")
        if kind == "bid":
            bid = PontBid.parse(action["bid"])
            if self.tie_bid_floor is not None and bid_index(
                bid, self.config.bid_players, "poker"
            ) < bid_index(self.tie_bid_floor, self.config.bid_players, "poker"):
                raise IllegalActionError("tie bid below the current top")
            self.tie_bids[seat] = bid
            self.tie_bid_floor = bid
        elif kind != "pass":
            raise IllegalActionError("tie round expects bid or pass")
        self.tie_queue.pop(0)
        if self.tie_queue:
            self.turn = self.tie_queue[0]
            return
        if not self.tie_bids:
            self._dead_game(all_passed=False)
            return
        top = max(
            self.tie_bids.values(),
            key=lambda b: bid_index(b, self.config.bid_players, "poker"),
        )
        winners = [s for s, b in self.tie_bids.items() if b == top]
        if len(winners) != 1:
            self._dead_game(all_passed=False)
            return
        self._make_declarer(winners[0], floor_bid=top)

    # -- declaration and response ---------------------------------------------------------

    def _make_declarer(self, seat: int, floor_bid: Optional[PontBid] = None) -> None:
        self.declarer = seat
        self.tie_bid_floor = floor_bid
        self.phase = DECLARE
        self.turn = seat

    def _increase(self, seat: int) -> None:
        if self.increases >= MAX_POKER_INCREASES or self.game.cards_per_hand() >= 9:
            raise IllegalActionError("no more increases")
        if len(self.game.stock) < self.players:
            raise IllegalActionError("stock exhausted")
        self._pay(seat, 1, to_bets=False)
        self.increases += 1
        self.game.increases += 1
        for s in range(self.players):
            self.game.hands[s].append(self.game.stock.pop(0))
            self.game.hands[s].sort()

    def _min_contract_tricks(self) -> int:
        cards = self.game.cards_per_hand()
        table = _MIN_TRICKS_TWO if self.config.two_sided else _MIN_TRICKS_MULTI
        tricks = table[cards]
        if self.tie_bid_floor is not None:
            tricks = max(
                tricks, -(-cards * self.tie_bid_floor.n // self.tie_bid_floor.d)
            )
        return tricks

    def _declare(self, seat: int, action: dict) -> None:
        trump = action.get("trump")
        if trump is not None:
            if trump not in SUITS:
                raise IllegalActionError(f"bad trump {trump!r}")
            trump = SUITS.index(trump)
        g = self.game
        g.declarer = seat
        g.winning_bid = self.tie_bid_floor
        g.trump = trump
        g.tricks_declared = self._min_contract_tricks()
        # every opponent may respond, folded or not; all play regardless
        self.phase = RESPOND
        self.respond_queue = [
            (seat + i) % self.players for i in range(1, self.players)
        ]
        if self.respond_queue:
            self.turn = self.respond_queue[0]
        else:
            self._start_play()

    def _respond(self, seat: int, action: dict) -> None:
        kind = action.get("type")
        if kind == "respond":
            self._pay(seat, self.increases, to_bets=False)
            self.active_opponents.add(seat)
        elif kind != "pass":
            raise IllegalActionError("respond phase expects respond or pass")
        self.respond_queue.pop(0)
        if self.respond_queue:
            self.turn = self.respond_queue[0]
        else:
            self._start_play()

    def _start_play(self) -> None:
        g = self.game
        g.phase = PLAY
        g.leader = g.turn = self.declarer
        self.phase = PLAY
        self.turn = self.declarer

    # -- settlement ----------------------------------------------------------------------

    def _dead_game(self, all_passed: bool) -> None:
        """No declarer.  After an all-pass game the antes go to the pot;
        otherwise the sectors beyond the ante do and antes come back."""
        for s in range(self.players):
            if all_passed:
                self.pot += self.bets[s]
                refund = self.bets[s] - self.ante + self.extra[s]
            else:
                self.pot += self.bets[s] - self.ante
                refund = self.ante + self.extra[s]
            self.net[s] += refund
        self.result = {"kind": "dead", "all_passed": all_passed, "pot": self.pot}
        self.phase = PAYOUT
        self.turn = None

    def _payout(self) -> None:
        g = self.game
        assert g.result is not None and self.declarer is not None
        success = g.result["success"]
        d = self.declarer
        sectors = [self.bets[s] + self.extra[s] for s in range(self.players)]
        if success:
            take = sum(sectors) + self.pot
            self.net[d] += take
            self.pot = 0
        else:
            for s in range(self.players):
                if s != d:
                    self.net[s] += sectors[s]  # opponents take their sectors back
            if self.active_opponents:
                share_base = sectors[d] + self.pot
                total_tricks = sum(g.tricks_won[s] for s in self.active_opponents)
                distributed = 0
                if total_tricks > 0:
                    for s in sorted(self.active_opponents):
                        cut = share_base * g.tricks_won[s] // total_tricks
                        self.net[s] += cut
                        distributed += cut
                self.pot = share_base - distributed
            else:
                self.net[d] += sectors[d]  # chips back, but not the pot
        self.result = {
            "kind": "poker",
            "declarer": d,
            "success": success,
            "tricks": dict(g.tricks_won),
            "net": list(self.net),
            "pot": self.pot,
        }
        self.phase = PAYOUT
        self.turn = None


    # -- views -----------------------------------------------------------------------

    def view(self, seat: Optional[int]) -> dict:
        out = self.game.view(seat)
        out.update(
            {
                "phase": self.phase,
                "turn": self.turn,
                "pot": self.pot,
                "ante": self.ante,
                "bets": list(self.bets),
                "extra_chips": list(self.extra),
                "net": list(self.net),
                "folded": sorted(self.folded),
                "closer": self.closer,
                "betting_round": self.betting_round,
                "declarer": self.declarer,
                "increases": self.increases,
                "active_opponents": sorted(self.active_opponents),
                "result": self.result,
            }
        )
        return out


def poker_round(table: PokerTable, event: dict) -> PokerTable:
    """Apply one {"seat": s, "action": {...}} event to the table."""
    table.submit(event["seat"], event["action"])
    return table


def split_failure_shares(pot_share: int, tricks: dict[int, int]) -> tuple[dict[int, int], int]:
    """Proportional integer split of the declarer's chips + pot among the
    active opponents; the remainder goes to the pot."""
    total = sum(tricks.values())
    if total <= 0:
        return {s: 0 for s in tricks}, pot_share
    shares = {s: pot_share * t // total for s, t in tricks.items()}
    return shares, pot_share - sum(shares.values())
