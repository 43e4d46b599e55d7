"""Pont bids: fractions N/D with D in 6..8, the misere marker, their total
order per player count, bid names, and minimum-trick computation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import DomainError


@dataclass(frozen=True)
class PontBid:
    n: int = 0
    d: int = 0
    misere: bool = False

    def __post_init__(self):
        if self.misere:
            if self.n or self.d:
                raise DomainError("misere bid carries no fraction")
            return
        if self.d not in (6, 7, 8):
            raise DomainError(f"denominator must be 6..8, got {self.d}")
        if not 1 <= self.n <= self.d:
            raise DomainError(f"numerator must be 1..{self.d}, got {self.n}")
        if (self.n, self.d) in ((4, 8), (7, 7), (8, 8)):
            raise DomainError(f"bid {self.n}/{self.d} is excluded")

    @property
    def fraction(self) -> Fraction:
        if self.misere:
            raise DomainError("misere has no fraction value")
        return Fraction(self.n, self.d)

    def __str__(self) -> str:
        return "misere" if self.misere else f"{self.n}/{self.d}"

    @staticmethod
    def parse(text: str) -> "PontBid":
        text = text.strip().lower()
        if text in ("m", "misere", "misère"):
            return MISERE
        try:
            n, d = text.split("/")
            return PontBid(int(n), int(d))
        except (ValueError, TypeError) as exc:
            raise DomainError(f"bad bid {text!r}") from exc


MISERE = PontBid(misere=True)

# ascending fraction order; 4/8, 7/7 and 8/8 are excluded outright
_FRACTION_ORDER = [
    PontBid(3, 6),
    PontBid(4, 7),
    PontBid(5, 8),
    PontBid(4, 6),
    PontBid(5, 7),
    PontBid(6, 8),
    PontBid(5, 6),
    PontBid(6, 7),
    PontBid(7, 8),
    PontBid(6, 6),
]

_NAMES_MULTI = ["1", "1+1", "1+2", "2", "2+1", "2+2", "3", "3+1", "3+2", "4"]
_NAMES_TWO = {
    "4/6": "1",
    "5/7": "1+1",
    "6/8": "1+2",
    "5/6": "2",
    "6/7": "2+1",
    "7/8": "2+2",
    "6/6": "3",
}


def bid_order(players: int, variant: str = "full") -> list[PontBid]:
    """Ascending bid list for the given player count and variant.

    Misere sits above 6/8 for 3-4 individual players and above 5/6 for
    2 players or partnerships; the basic and poker variants drop the
    denominator-8 bids and (with them) misere.
    """
    two_sided = players == 2
    order = list(_FRACTION_ORDER)
    if two_sided:
        order = [b for b in order if b.fraction >= Fraction(4, 6)]
        # 2-player novelty bids 3/6, 4/7, 5/8 are already below 4/6
    if variant in ("basic", "poker"):
        order = [b for b in order if b.d != 8]
        return order
    if variant != "full":
        raise DomainError(f"unknown variant {variant!r}")
    anchor = PontBid(5, 6) if two_sided else PontBid(6, 8)
    out: list[PontBid] = []
    for b in order:
        out.append(b)
        if b == anchor:
            out.append(MISERE)
    return out


def bid_index(bid: PontBid, players: int, variant: str = "full") -> int:
    order = bid_order(players, variant)
    try:
        return order.index(bid)
    except ValueError as exc:
        raise DomainError(f"bid {bid} not available for {players} players/{variant}") from exc


def bid_name(bid: PontBid, players: int) -> str:
    """Auction-table name of a bid: contract value plus '+extra cards'."""
    if bid.misere:
        return "m"
    if players == 2:
        name = _NAMES_TWO.get(str(bid))
        if name is None:
            raise DomainError(f"bid {bid} not available for 2 players")
        return name
    return _NAMES_MULTI[_FRACTION_ORDER.index(bid)]


def min_tricks(bid: PontBid, cards_final: int) -> int:
    """Minimum contract tricks: ceil(cards_final * N/D).

    A misere bid converts to its high-contract row for 7..9 cards; at 6
    cards it stands for the zero-trick play and has no trick minimum.
    """
    if not 6 <= cards_final <= 9:
        raise DomainError(f"cards per hand must be 6..9, got {cards_final}")
    if bid.misere:
        if cards_final == 6:
            raise DomainError("misere at 6 cards is the zero-trick play")
        # converted contracts 6/7, 7/8, 8/9 match the 5/6 valuation
        return -(-cards_final * 5 // 6)
    return -(-cards_final * bid.n // bid.d)
