"""Exact open-cards misere adjudication.

After the opening lead the hands are face up; the contract is defeated
iff the opponents, playing jointly with full information, can force the
declarer to take at least one trick while the declarer plays to avoid
it.  Plain AND-OR minimax over notrump play with memoized positions and
a node budget.
"""

from __future__ import annotations

from ..errors import DomainError, SearchBudgetExceeded
from .cards import suit_of, trick_winner_index

DEFAULT_NODE_BUDGET = 10_000_000


def _legal_notrump(hand: tuple[int, ...], led_suit: int | None) -> tuple[int, ...]:
    if led_suit is None:
        return hand
    follow = tuple(c for c in hand if suit_of(c) == led_suit)
    return follow or hand


class _Solver:
    def __init__(self, order: tuple[int, ...], declarer: int, budget: int):
        self.order = order  # seats in clockwise play order
        self.declarer = declarer
        self.budget = budget
        self.nodes = 0
        self.memo: dict = {}

    def defeated(
        self,
        hands: dict[int, tuple[int, ...]],
        leader: int,
        trick: tuple[tuple[int, int], ...],
    ) -> bool:
        key = (tuple(sorted(hands.items())), leader, trick)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.nodes += 1
        if self.nodes > self.budget:
            raise SearchBudgetExceeded(f"misere search exceeded {self.budget} nodes")

        if len(trick) == len(self.order):
            cards = [c for _, c in trick]
            winner = trick[trick_winner_index(cards, None)][0]
            if winner == self.declarer:
                self.memo[key] = True
                return True
            if not hands[winner]:
                self.memo[key] = False
                return False
            result = self.defeated(hands, winner, ())
            self.memo[key] = result
            return result

        seat = self._next_seat(leader, len(trick))
        led = suit_of(trick[0][1]) if trick else None
        moves = _legal_notrump(hands[seat], led)
        minimizing = seat == self.declarer
        result = minimizing  # AND over declarer moves, OR over opponents'
        for card in moves:
            rest = tuple(c for c in hands[seat] if c != card)
            sub = self.defeated({**hands, seat: rest}, leader, trick + ((seat, card),))
            if minimizing and not sub:
                result = False
                break
            if not minimizing and sub:
                result = True
                break
        self.memo[key] = result
        return result

    def _next_seat(self, leader: int, played: int) -> int:
        idx = self.order.index(leader)
        return self.order[(idx + played) % len(self.order)]


def misere_defeated(
    hands: dict[int, tuple[int, ...]],
    order: tuple[int, ...],
    declarer: int,
    leader: int,
    trick: tuple[tuple[int, int], ...] = (),
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> bool:
    """True iff the declarer can be forced to take a trick.

    hands maps each participating seat to its remaining cards; order is
    the clockwise seat cycle (the team-variant partner, whose hand is
    discarded, simply does not appear).  Raises SearchBudgetExceeded when
    the position is too large for the configured budget.
    """
    if declarer not in order or leader not in order:
        raise DomainError("declarer and leader must participate")
    sizes = {
        seat: len(hands.get(seat, ())) + sum(1 for s, _ in trick if s == seat)
        for seat in order
    }
    if len(set(sizes.values())) > 1:
        raise DomainError(f"hands plus trick cards must be equal-sized, got {sizes}")
    solver = _Solver(tuple(order), declarer, node_budget)
    norm = {seat: tuple(sorted(h)) for seat, h in hands.items()}
    return solver.defeated(norm, leader, tuple(trick))
