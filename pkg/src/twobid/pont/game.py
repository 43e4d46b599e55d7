"""Pont game state machine: auction with upgrades, contract declaration
with increases, trick play, downplay and misere, scoring at the end.

Events are plain dicts ({"type": "bid", "bid": "4/6"}, ...) submitted per
seat; the full log replays deterministically for a given config, dealer
and game number.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from ..errors import DomainError, IllegalActionError, SearchBudgetExceeded
from .bids import MISERE, PontBid, bid_index, bid_name, bid_order, min_tricks
from .cards import SUITS, card_from_str, card_str, derive_seed, make_deck, suit_of, trick_winner_index
from .misere import DEFAULT_NODE_BUDGET, misere_defeated
from .scoring import ContractOutcome, downplay_score, score_game

AUCTION = "auction"
UPGRADE = "upgrade"
DECLARE = "declare"
PLAY = "play"
DOWNPLAY = "downplay"
FINISHED = "finished"

MAX_CARDS = 9
MAX_UPGRADES = 2


@dataclass(frozen=True)
class GameConfig:
    players: int = 3
    partnerships: bool = False
    variant: str = "full"  # full | basic | poker
    seed: int = 0
    strict_scoring: bool = False
    misere_node_budget: int = DEFAULT_NODE_BUDGET

    def __post_init__(self):
        if self.players not in (2, 3, 4):
            raise DomainError("players must be 2, 3 or 4")
        if self.partnerships and self.players != 4:
            raise DomainError("partnerships need four seats")
        if self.variant not in ("full", "basic", "poker"):
            raise DomainError(f"unknown variant {self.variant!r}")

    @property
    def deck_size(self) -> int:
        return 52 if self.players == 4 else 36

    @property
    def two_sided(self) -> bool:
        return self.players == 2 or self.partnerships

    @property
    def bid_players(self) -> int:
        return 2 if self.two_sided else self.players


def partner_of(seat: int) -> int:
    return (seat + 2) % 4


class PontGame:
    """One deal.  Drive it with submit(seat, action); inspect legal_actions."""

    def __init__(self, config: GameConfig, dealer: int = 0, game_no: int = 0):
        self.config = config
        self.dealer = dealer % config.players
        self.game_no = game_no
        rng = random.Random(derive_seed(config.seed, game_no, "deal"))
        deck = make_deck(config.deck_size, rng)
        n = config.players
        self.hands: list[list[int]] = [[] for _ in range(n)]
        for i in range(6 * n):
            self.hands[(self.dealer + 1 + i) % n].append(deck[i])
        for h in self.hands:
            h.sort()
        self.stock: list[int] = deck[6 * n :]
        self.full_deck: frozenset[int] = frozenset(deck)
        self.discards: list[int] = []
        self.played: list[int] = []

        self.phase = AUCTION
        self.turn: Optional[int] = self.dealer
        self.event_log: list[dict] = []

        # auction state
        self.order = bid_order(config.bid_players, config.variant)
        self.last_bid: dict[int, Optional[PontBid]] = {s: None for s in range(n)}
        self.round1_bid: dict[int, PontBid] = {}
        self.passed: set[int] = set()
        self.closer: Optional[int] = None
        self.upgrades_used = 0
        self.round_no = 1
        self.bids_made = False
        self.in_response = False
        self.response_queue: list[int] = []
        self.pending_discards: list[int] = []

        # contract / play state
        self.declarer: Optional[int] = None
        self.winning_bid: Optional[PontBid] = None
        self.increases = 0
        self.trump: Optional[int] = None
        self.tricks_declared = 0
        self.is_misere = False
        self.misere_out: Optional[int] = None  # discarded partner seat
        self.exposed: set[int] = set()
        self.leader: Optional[int] = None
        self.trick: list[tuple[int, int]] = []
        self.tricks_won: dict[int, int] = {s: 0 for s in range(n)}
        self.voids: dict[int, set[int]] = {s: set() for s in range(n)}
        self.misere_adjudicated = False
        self.result: Optional[dict] = None

    # -- helpers -------------------------------------------------------------

    @property
    def players(self) -> int:
        return self.config.players

    def cards_per_hand(self) -> int:
        return 6 + self.increases

    def _active(self) -> list[int]:
        return [s for s in range(self.players) if s not in self.passed]

    def _next_active(self, seat: int) -> Optional[int]:
        for i in range(1, self.players + 1):
            s = (seat + i) % self.players
            if s not in self.passed:
                return s
        return None

    def _max_index(self) -> Optional[int]:
        idxs = [bid_index(b, self.config.bid_players, self.config.variant)
                for b in self.last_bid.values() if b is not None]
        return max(idxs) if idxs else None

    def _bid_idx(self, bid: PontBid) -> int:
        return bid_index(bid, self.config.bid_players, self.config.variant)

    def _play_order(self) -> list[int]:
        seats = list(range(self.players))
        if self.misere_out is not None:
            seats.remove(self.misere_out)
        return seats

    def _seat_after(self, seat: int) -> int:
        seats = self._play_order()
        return seats[(seats.index(seat) + 1) % len(seats)]

    def check_conservation(self) -> bool:
        """Hands + discards + played + trick + stock partition the deck."""
        pool = (
            [c for h in self.hands for c in h]
            + self.discards
            + self.played
            + [c for _, c in self.trick]
            + self.stock
        )
        return len(pool) == len(self.full_deck) and frozenset(pool) == self.full_deck

    # -- legal actions --------------------------------------------------------

    def legal_bids(self, seat: int) -> list[PontBid]:
        """Bids the seat may claim right now (self-repeat acts as close)."""
        if self.phase != AUCTION or seat != self.turn:
            raise IllegalActionError("not this seat's turn to bid")
        max_idx = self._max_index()
        out = []
        for bid in self.order:
            if bid.misere and self.round_no != 1:
                continue
            if max_idx is not None and self._bid_idx(bid) < max_idx:
                continue
            out.append(bid)
        return out

    def _can_pass(self, seat: int) -> bool:
        if self.in_response:
            return True
        others = [s for s in self._active() if s != seat]
        if not others and self.bids_made:
            return False  # the last survived player may not pass
        return True

    def _can_close(self, seat: int) -> bool:
        if self.in_response:
            return False
        bid = self.last_bid[seat]
        if bid is None:
            return False
        return self._bid_idx(bid) == self._max_index()

    def legal_actions(self, seat: int) -> list[dict]:
        if self.phase == FINISHED or self.turn != seat:
            return []
        if self.phase == AUCTION:
            acts: list[dict] = []
            for b in self.legal_bids(seat):
                entry = {"type": "bid", "bid": str(b),
                         "name": bid_name(b, self.config.bid_players)}
                if b == self.last_bid[seat]:
                    entry["closes"] = True
                acts.append(entry)
            if self._can_pass(seat):
                acts.append({"type": "pass"})
            if self._can_close(seat):
                acts.append({"type": "close"})
            return acts
        if self.phase == UPGRADE:
            return [{"type": "discard", "card": card_str(c)} for c in self.hands[seat]]
        if self.phase == DECLARE:
            acts = []
            if (
                self.cards_per_hand() < MAX_CARDS
                and len(self.stock) >= self.players
                and self.config.variant != "poker"
            ):
                acts.append({"type": "increase"})
            cards = self.cards_per_hand()
            if self._misere_declarable():
                acts.append({"type": "declare", "misere": True})
            lo = self._min_declared_tricks()
            for tricks in range(lo, cards + 1):
                for trump in list(SUITS) + [None]:
                    acts.append({"type": "declare", "trump": trump, "tricks": tricks})
            return acts
        if self.phase in (PLAY, DOWNPLAY):
            return [{"type": "play", "card": card_str(c)} for c in self.legal_cards(seat)]
        return []

    def _misere_declarable(self) -> bool:
        if self.config.variant != "full" or self.increases:
            return False
        assert self.winning_bid is not None
        if self.winning_bid.misere:
            return True
        return (
            self.winning_bid == PontBid(6, 8)
            and self.upgrades_used == 0
        )

    def _min_declared_tricks(self) -> int:
        cards = self.cards_per_hand()
        assert self.winning_bid is not None
        if self.winning_bid.misere:
            # conversion contracts: 6/7, 7/8, 8/9 or the full row; at six
            # cards only 6/6 remains
            return 6 if cards == 6 else min_tricks(MISERE, cards)
        return min_tricks(self.winning_bid, cards)

    def legal_cards(self, seat: int) -> list[int]:
        """Follow suit if able, else trump under a trump contract, else any;
        trump leads are the declarer's privilege."""
        if self.phase not in (PLAY, DOWNPLAY) or seat != self.turn:
            raise IllegalActionError("not this seat's turn to play")
        hand = self.hands[seat]
        if self.trick:
            led = suit_of(self.trick[0][1])
            follow = [c for c in hand if suit_of(c) == led]
            if follow:
                return follow
            if self.trump is not None:
                trumps = [c for c in hand if suit_of(c) == self.trump]
                if trumps:
                    return trumps
            return list(hand)
        # leading
        if self.trump is not None and seat != self.declarer:
            non_trump = [c for c in hand if suit_of(c) != self.trump]
            if non_trump:
                return non_trump
        return list(hand)

    # -- event entry point -----------------------------------------------------

    def submit(self, seat: int, action: dict) -> None:
        if self.phase == FINISHED:
            raise IllegalActionError("game is finished")
        if seat != self.turn:
            raise IllegalActionError(f"seat {seat} acted out of turn")
        kind = action.get("type")
        if self.phase == AUCTION:
            if kind == "bid":
                self._do_bid(seat, PontBid.parse(action["bid"]))
            elif kind == "pass":
                self._do_pass(seat)
            elif kind == "close":
                self._do_close(seat)
            else:
                raise IllegalActionError(f"bad auction action {kind!r}")
        elif self.phase == UPGRADE:
            if kind != "discard":
                raise IllegalActionError("upgrade phase expects a discard")
            self._do_discard(seat, self._card_arg(action))
        elif self.phase == DECLARE:
            if kind == "increase":
                self._do_increase(seat)
            elif kind == "declare":
                self._do_declare(seat, action)
            else:
                raise IllegalActionError(f"bad declare action {kind!r}")
        elif self.phase in (PLAY, DOWNPLAY):
            if kind != "play":
                raise IllegalActionError("play phase expects a card")
            self._do_play(seat, self._card_arg(action))
        self.event_log.append({"v": 1, "seat": seat, "event": action})

    @staticmethod
    def _card_arg(action: dict) -> int:
        card = action.get("card")
        if isinstance(card, int):
            return card
        if isinstance(card, str):
            return card_from_str(card)
        raise IllegalActionError("action needs a card")

    # -- auction --------------------------------------------------------------

    def _do_bid(self, seat: int, bid: PontBid) -> None:
        if bid not in self.legal_bids(seat):
            raise IllegalActionError(f"bid {bid} not available")
        if not self.in_response and bid == self.last_bid[seat]:
            self._do_close(seat)  # repeating one's own bid closes
            return
        prev_max = self._max_index()
        self.last_bid[seat] = bid
        if self.round_no == 1:
            self.round1_bid[seat] = bid
        self.bids_made = True
        idx = self._bid_idx(bid)
        if self.in_response:
            if prev_max is not None and idx > prev_max:
                # a raise voids the close attempt; normal bidding resumes
                self.in_response = False
                self.response_queue.clear()
                self.turn = self._next_active(seat)
            else:
                self._advance_response()
        else:
            self.turn = self._next_active(seat)

    def _do_pass(self, seat: int) -> None:
        if not self._can_pass(seat):
            raise IllegalActionError("the last survived player may not pass")
        self.passed.add(seat)
        if self.in_response:
            self._advance_response()
            return
        active = self._active()
        if not active:
            self._end_round()  # everyone passed
            return
        if len(active) == 1 and self.bids_made:
            last = active[0]
            if self.last_bid[last] is not None and self._bid_idx(
                self.last_bid[last]
            ) == self._max_index():
                self._set_declarer(last)
                return
            self.turn = last  # must bid or close
            return
        self.turn = self._next_active(seat)

    def _do_close(self, seat: int) -> None:
        if not self._can_close(seat):
            raise IllegalActionError("closing requires holding the top bid")
        self.closer = seat
        skip = {seat}
        if self.config.partnerships:
            skip.add(partner_of(seat))  # only the opponents respond
        queue = []
        for i in range(1, self.players):
            s = (seat + i) % self.players
            if s not in self.passed and s not in skip:
                queue.append(s)
        if not queue:
            self._set_declarer(seat)
            return
        self.in_response = True
        self.response_queue = queue
        self.turn = queue[0]

    def _advance_response(self) -> None:
        self.response_queue.pop(0)
        if self.response_queue:
            self.turn = self.response_queue[0]
            return
        self.in_response = False
        assert self.closer is not None
        max_idx = self._max_index()
        ties = [
            s
            for s in self._active()
            if s != self.closer
            and self.last_bid[s] is not None
            and self._bid_idx(self.last_bid[s]) == max_idx
        ]
        if self.config.partnerships:
            ties = [s for s in ties if s % 2 != self.closer % 2]
        if ties:
            self._end_round()
        else:
            self._set_declarer(self.closer)

    def _end_round(self) -> None:
        """No declarer this round: upgrade if possible, else downplay."""
        self.in_response = False
        self.response_queue.clear()
        if self.upgrades_used < MAX_UPGRADES and len(self.stock) >= self.players:
            self.upgrades_used += 1
            self.round_no += 1
            for s in range(self.players):
                self.hands[s].append(self.stock.pop(0))
                self.hands[s].sort()
            self.pending_discards = [
                (self.dealer + i) % self.players for i in range(self.players)
            ]
            self.phase = UPGRADE
            self.turn = self.pending_discards[0]
            return
        # terminal: downplay, led by the closer (coinciding bids) or the
        # dealer (everyone passed)
        self.phase = DOWNPLAY
        self.trump = None
        self.declarer = None
        self.leader = self.closer if self.bids_made and self.closer is not None else self.dealer
        self.turn = self.leader

    def _set_declarer(self, seat: int) -> None:
        self.declarer = seat
        self.winning_bid = self.last_bid[seat]
        assert self.winning_bid is not None
        self.phase = DECLARE
        self.turn = seat

    # -- upgrade --------------------------------------------------------------

    def _do_discard(self, seat: int, card: int) -> None:
        if not self.pending_discards or self.pending_discards[0] != seat:
            raise IllegalActionError("not this seat's discard")
        if card not in self.hands[seat]:
            raise IllegalActionError("cannot discard a card you do not hold")
        self.hands[seat].remove(card)
        self.discards.append(card)
        self.pending_discards.pop(0)
        if self.pending_discards:
            self.turn = self.pending_discards[0]
            return
        # new auction round: the closer (or dealer after an all-pass
        # round) claims first; if nobody has bid yet, everyone rejoins
        self.phase = AUCTION
        if not self.bids_made:
            self.passed.clear()
        start = self.closer if self.closer is not None else self.dealer
        self.turn = start if start not in self.passed else self._next_active(start)

    # -- declaration ------------------------------------------------------------

    def _do_increase(self, seat: int) -> None:
        if self.config.variant == "poker":
            raise IllegalActionError("poker increases are chip events")
        if self.cards_per_hand() >= MAX_CARDS:
            raise IllegalActionError("hands are capped at nine cards")
        if len(self.stock) < self.players:
            raise IllegalActionError("stock exhausted")
        self.increases += 1
        for s in range(self.players):
            self.hands[s].append(self.stock.pop(0))
            self.hands[s].sort()

    def _do_declare(self, seat: int, action: dict) -> None:
        if action.get("misere"):
            if not self._misere_declarable():
                raise IllegalActionError("misere cannot be declared here")
            self.is_misere = True
            self.trump = None
            self.tricks_declared = 0
            if self.config.partnerships:
                out = partner_of(seat)
                self.misere_out = out
                self.discards.extend(self.hands[out])
                self.hands[out].clear()
        else:
            tricks = int(action.get("tricks", 0))
            lo = self._min_declared_tricks()
            if not lo <= tricks <= self.cards_per_hand():
                raise IllegalActionError(
                    f"tricks must be in [{lo}, {self.cards_per_hand()}]"
                )
            trump = action.get("trump")
            if trump is not None:
                if trump not in SUITS:
                    raise IllegalActionError(f"bad trump {trump!r}")
                trump = SUITS.index(trump)
            self.trump = trump
            self.tricks_declared = tricks
        self.phase = PLAY
        self.leader = seat
        self.turn = seat

    # -- play -------------------------------------------------------------------

    def _do_play(self, seat: int, card: int) -> None:
        legal = self.legal_cards(seat)
        if card not in legal:
            raise IllegalActionError(f"card {card_str(card)} is not legal here")
        if self.trick:
            led = suit_of(self.trick[0][1])
            if suit_of(card) != led:
                self.voids[seat].add(led)
        self.hands[seat].remove(card)
        self.trick.append((seat, card))

        if self.is_misere and not self.misere_adjudicated and seat == self.declarer:
            self._adjudicate_misere()
            if self.phase == FINISHED:
                return

        if len(self.trick) == len(self._play_order()):
            cards = [c for _, c in self.trick]
            winner = self.trick[trick_winner_index(cards, self.trump)][0]
            self.tricks_won[winner] += 1
            self.played.extend(cards)
            self.trick.clear()
            self.leader = winner
            self.turn = winner
            self._check_play_end()
        else:
            self.turn = self._seat_after(seat)

    def _adjudicate_misere(self) -> None:
        """All cards go face up after the opening lead; solve the rest."""
        self.exposed = set(self._play_order())
        hands = {s: tuple(self.hands[s]) for s in self._play_order()}
        try:
            defeated = misere_defeated(
                hands,
                tuple(self._play_order()),
                declarer=self.declarer,
                leader=self.leader,
                trick=tuple(self.trick),
                node_budget=self.config.misere_node_budget,
            )
        except SearchBudgetExceeded:
            # position too large to solve exactly: play it out instead,
            # terminating as soon as the declarer takes a trick
            self.misere_adjudicated = True
            return
        self.misere_adjudicated = True
        # return the unplayed cards to the table record and score
        for s in self._play_order():
            self.played.extend(self.hands[s])
            self.hands[s].clear()
        self.played.extend(c for _, c in self.trick)
        self.trick.clear()
        self._finish_contract(success=not defeated, missed=1 if defeated else 0)

    def _side_tricks(self) -> int:
        assert self.declarer is not None
        total = self.tricks_won[self.declarer]
        if self.config.partnerships and self.misere_out is None:
            total += self.tricks_won[partner_of(self.declarer)]
        return total

    def _check_play_end(self) -> None:
        remaining = len(self.hands[self.turn]) if self.turn is not None else 0
        if self.phase == DOWNPLAY:
            if remaining == 0:
                self._finish_downplay()
            return
        assert self.declarer is not None
        if self.is_misere:
            if self.tricks_won[self.declarer] > 0:
                self._finish_contract(success=False, missed=1)
            elif remaining == 0:
                self._finish_contract(success=True, missed=0)
            return
        side = self._side_tricks()
        if not self.config.strict_scoring:
            if side >= self.tricks_declared:
                self._finish_contract(success=True, missed=0)
                return
            if self.tricks_declared - side > remaining:
                self._finish_contract(
                    success=False, missed=self.tricks_declared - side - remaining
                )
                return
        if remaining == 0:
            missed = max(0, self.tricks_declared - side)
            self._finish_contract(success=missed == 0, missed=missed)

    # -- finishing ---------------------------------------------------------------

    def _premium_earned(self) -> bool:
        if self.config.variant != "full":
            return False
        assert self.declarer is not None
        bid = self.round1_bid.get(self.declarer)
        if bid is None:
            return False
        if bid.misere:
            return True
        return bid.fraction >= PontBid(5, 6).fraction

    def _finish_contract(self, success: bool, missed: int) -> None:
        assert self.declarer is not None
        outcome = ContractOutcome(
            declarer=self.declarer,
            tricks_declared=self.tricks_declared,
            cards=self.cards_per_hand(),
            is_misere=self.is_misere,
            premium=self._premium_earned(),
            success=success,
            missed=missed,
        )
        deltas = score_game(
            outcome,
            seats=self.players,
            two_sided=self.config.two_sided,
            variant=self.config.variant,
            strict=self.config.strict_scoring,
        )
        self.result = {
            "kind": "misere" if self.is_misere else "contract",
            "declarer": self.declarer,
            "bid": str(self.winning_bid),
            "tricks_declared": self.tricks_declared,
            "tricks_taken": self._side_tricks() if not self.is_misere else self.tricks_won[self.declarer],
            "cards": self.cards_per_hand(),
            "success": success,
            "premium": outcome.premium,
            "deltas": deltas,
        }
        self.phase = FINISHED
        self.turn = None

    def _finish_downplay(self) -> None:
        deltas = downplay_score(dict(self.tricks_won), self.config.two_sided)
        self.result = {
            "kind": "downplay",
            "tricks": dict(self.tricks_won),
            "deltas": deltas,
        }
        self.phase = FINISHED
        self.turn = None

    # -- views ------------------------------------------------------------------

    def view(self, seat: Optional[int]) -> dict:
        """Redacted JSON-safe state: hands are visible only to their owner
        or when the rules expose them (misere open play)."""
        n = self.players
        hands = {}
        for s in range(n):
            if seat is not None and (s == seat or s in self.exposed):
                hands[str(s)] = [card_str(c) for c in self.hands[s]]
            else:
                hands[str(s)] = len(self.hands[s])
        return {
            "v": 1,
            "phase": self.phase,
            "turn": self.turn,
            "dealer": self.dealer,
            "players": n,
            "variant": self.config.variant,
            "partnerships": self.config.partnerships,
            "hands": hands,
            "bids": {str(s): (str(b) if b else None) for s, b in self.last_bid.items()},
            "passed": sorted(self.passed),
            "closer": self.closer,
            "declarer": self.declarer,
            "winning_bid": str(self.winning_bid) if self.winning_bid else None,
            "round": self.round_no,
            "upgrades_used": self.upgrades_used,
            "cards_per_hand": self.cards_per_hand(),
            "trump": SUITS[self.trump] if self.trump is not None else None,
            "tricks_declared": self.tricks_declared,
            "is_misere": self.is_misere,
            "trick": [[s, card_str(c)] for s, c in self.trick],
            "tricks_won": {str(s): t for s, t in self.tricks_won.items()},
            "result": self.result,
        }

    @staticmethod
    def replay(
        config: GameConfig, dealer: int, game_no: int, events: list[dict]
    ) -> "PontGame":
        game = PontGame(config, dealer, game_no)
        for entry in events:
            game.submit(entry["seat"], entry["event"])
        return game
