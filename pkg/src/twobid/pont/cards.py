"""Cards and decks.  A card is an int: suit = card // 13, rank = card % 13
with rank 0 = '2' up to 12 = 'A'.  The 36-card deck keeps ranks 6..A."""

from __future__ import annotations

import hashlib
import random

SUITS = "SHDC"


def derive_seed(*parts) -> int:
    """Stable cross-process seed from arbitrary parts (unlike hash())."""
    data = ":".join(str(p) for p in parts).encode()
    return int.from_bytes(hashlib.sha256(data).digest()[:8], "big")
RANKS = "23456789TJQKA"

FULL_DECK = tuple(range(52))
SMALL_DECK = tuple(c for c in range(52) if c % 13 >= 4)  # 6..A in four suits


def suit_of(card: int) -> int:
    return card // 13

def rank_of(card: int) -> int:
    return card % 13

def card_str(card: int) -> str:
    return RANKS[rank_of(card)] + SUITS[suit_of(card)]

def card_from_str(text: str) -> int:
    text = text.strip().upper()
    if len(text) != 2 or text[0] not in RANKS or text[1] not in SUITS:
        raise ValueError(f"bad card {text!r}")
    return SUITS.index(text[1]) * 13 + RANKS.index(text[0])


def make_deck(size: int, rng: random.Random) -> list[int]:
    if size == 52:
        deck = list(FULL_DECK)
    elif size == 36:
        deck = list(SMALL_DECK)
    else:
        raise ValueError(f"deck size must be 36 or 52, got {size}")
    rng.shuffle(deck)
    return deck


def trick_winner_index(cards: list[int], trump: int | None) -> int:
    """Index within the trick of the winning card: highest trump if any
    were played, otherwise highest card of the led suit."""
    led = suit_of(cards[0])
    best = 0
    for i in range(1, len(cards)):
        c, b = cards[i], cards[best]
        if trump is not None:
            c_trump, b_trump = suit_of(c) == trump, suit_of(b) == trump
            if c_trump and not b_trump:
                best = i
                continue
            if b_trump and not c_trump:
                continue
            if c_trump and b_trump:
                if rank_of(c) > rank_of(b):
                    best = i
                continue
        if suit_of(c) == led and (suit_of(b) != led or rank_of(c) > rank_of(b)):
            best = i
    return best
