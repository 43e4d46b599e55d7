"""Heuristic computer player.

Bidding samples random completions of the hidden hands, picks the modal
best bid and steps it down one level.  Play follows the smallest-
sufficient-card rule with the lead preferences: known-void suits first,
then adjacent-honor suits, then the longest suit's highest card.
"""

from __future__ import annotations

import random
from collections import Counter
from typing import Optional

from .bids import PontBid, min_tricks
from .cards import derive_seed, rank_of, suit_of, trick_winner_index
from .game import AUCTION, DECLARE, DOWNPLAY, PLAY, UPGRADE, PontGame, partner_of

DEFAULT_SAMPLES = 64


def _unseen_cards(game: PontGame, seat: int) -> list[int]:
    visible = set(game.hands[seat]) | set(game.played) | {c for _, c in game.trick}
    for s in game.exposed:
        visible.update(game.hands[s])
    return [c for c in game.full_deck if c not in visible]


def _sample_world(game: PontGame, seat: int, rng: random.Random) -> dict[int, list[int]]:
    """One random completion of the hidden hands (void-aware, best effort)."""
    pool = _unseen_cards(game, seat)
    hidden = [
        s for s in range(game.players) if s != seat and s not in game.exposed
    ]
    world: dict[int, list[int]] = {}
    for attempt in range(20):
        rng.shuffle(pool)
        world = {}
        i = 0
        ok = True
        for s in hidden:
            need = len(game.hands[s])
            world[s] = pool[i : i + need]
            i += need
            # respect known voids, but give up after enough rejections
            if attempt < 19 and any(suit_of(c) in game.voids[s] for c in world[s]):
                ok = False
                break
        if ok:
            break
    world[seat] = list(game.hands[seat])
    for s in game.exposed:
        if s != seat:
            world[s] = list(game.hands[s])
    return world


def _estimate_tricks(world: dict[int, list[int]], me: int, trump: Optional[int]) -> int:
    """Static trick estimate: consecutive top cards per suit, plus spare
    trump length."""
    mine = world[me]
    others = [c for s, h in world.items() if s != me for c in h]
    total = 0
    for suit in range(4):
        my_ranks = sorted((rank_of(c) for c in mine if suit_of(c) == suit), reverse=True)
        opp_ranks = sorted((rank_of(c) for c in others if suit_of(c) == suit), reverse=True)
        run = 0
        oi = 0
        for r in my_ranks:
            if oi < len(opp_ranks) and opp_ranks[oi] > r:
                break
            run += 1
            if oi < len(opp_ranks):
                oi += 1
        total += run
        if trump is not None and suit == trump:
            total += max(0, len(my_ranks) - len(opp_ranks))
    return min(total, len(mine))


def _best_bid_for_sample(
    game: PontGame, world: dict[int, list[int]], seat: int
) -> tuple[int, Optional[int]]:
    """(tricks, trump) the sample supports best at six cards."""
    best = (0, None)
    for trump in range(4):
        est = _estimate_tricks(world, seat, trump)
        if est > best[0]:
            best = (est, trump)
    return best


def _target_bid(game: PontGame, seat: int, rng: random.Random, samples: int):
    """Modal best bid across sampled worlds, stepped down one level.

    Returns (order index or None to pass, modal trump suit)."""
    fractions = [b for b in game.order if not b.misere]
    votes: Counter = Counter()
    trump_votes: Counter = Counter()
    for _ in range(samples):
        world = _sample_world(game, seat, rng)
        est, trump = _best_bid_for_sample(game, world, seat)
        best_idx = -1
        for b in fractions:
            if min_tricks(b, 6) <= est:
                idx = game._bid_idx(b)
                if idx > best_idx:
                    best_idx = idx
        votes[best_idx] += 1
        if trump is not None:
            trump_votes[trump] += 1
    modal = votes.most_common(1)[0][0]
    modal -= 1  # play it safe: one level below the most likely bid
    trump = trump_votes.most_common(1)[0][0] if trump_votes else 0
    if modal < 0:
        return None, trump
    return modal, trump


def _misere_worthy(game: PontGame, seat: int) -> bool:
    hand = game.hands[seat]
    return bool(hand) and max(rank_of(c) for c in hand) <= 7  # nothing above a nine


def bot_action(
    game: PontGame, seat: int, seed: int = 0, samples: int = DEFAULT_SAMPLES
) -> dict:
    """Choose an action for the seat; deterministic for a given seed and
    game state (the RNG is keyed to the event count)."""
    rng = random.Random(derive_seed(seed, game.game_no, len(game.event_log), seat))
    phase = game.phase
    if phase == AUCTION:
        return _auction_action(game, seat, rng, samples)
    if phase == UPGRADE:
        return _discard_action(game, seat, rng)
    if phase == DECLARE:
        return _declare_action(game, seat, rng, samples)
    if phase in (PLAY, DOWNPLAY):
        card = choose_play_card(game, seat, rng)
        from .cards import card_str

        return {"type": "play", "card": card_str(card)}
    raise ValueError(f"bot cannot act in phase {phase}")


def _auction_action(game: PontGame, seat: int, rng: random.Random, samples: int) -> dict:
    legal = game.legal_bids(seat)
    can_pass = game._can_pass(seat)
    target, _ = _target_bid(game, seat, rng, samples)

    misere_bid = next((b for b in legal if b.misere), None)
    if misere_bid is not None and _misere_worthy(game, seat) and target is None:
        return {"type": "bid", "bid": "misere"}

    max_idx = game._max_index()
    if game._can_close(seat) and target is not None and max_idx is not None and target <= max_idx:
        return {"type": "close"}
    choices = sorted(
        (b for b in legal if not b.misere), key=game._bid_idx
    )
    if target is not None:
        for b in choices:
            if game._bid_idx(b) <= target:
                return {"type": "bid", "bid": str(b)}
    if can_pass:
        return {"type": "pass"}
    return {"type": "bid", "bid": str(choices[0])}


def _discard_action(game: PontGame, seat: int, rng: random.Random) -> dict:
    from .cards import card_str

    hand = game.hands[seat]
    own = game.last_bid.get(seat)
    if own is not None and own.misere:
        card = max(hand, key=rank_of)
    else:
        low = min(rank_of(c) for c in hand)
        candidates = [c for c in hand if rank_of(c) == low]
        card = rng.choice(candidates)
    return {"type": "discard", "card": card_str(card)}


def _declare_action(game: PontGame, seat: int, rng: random.Random, samples: int) -> dict:
    from .cards import SUITS

    assert game.winning_bid is not None
    if game.winning_bid.misere and game._misere_declarable():
        return {"type": "declare", "misere": True}
    trump_votes: Counter = Counter()
    for _ in range(max(samples // 2, 1)):
        world = _sample_world(game, seat, rng)
        _, trump = _best_bid_for_sample(game, world, seat)
        if trump is not None:
            trump_votes[trump] += 1
    trump = trump_votes.most_common(1)[0][0] if trump_votes else 0
    return {
        "type": "declare",
        "trump": SUITS[trump],
        "tricks": game._min_declared_tricks(),
    }


# -- card play ----------------------------------------------------------------


def _currently_winning(game: PontGame) -> Optional[int]:
    if not game.trick:
        return None
    cards = [c for _, c in game.trick]
    return game.trick[trick_winner_index(cards, game.trump)][0]


def _would_win(game: PontGame, card: int) -> bool:
    cards = [c for _, c in game.trick] + [card]
    return trick_winner_index(cards, game.trump) == len(cards) - 1


def _avoid_mode(game: PontGame, seat: int) -> bool:
    if game.phase == DOWNPLAY:
        return True
    return game.is_misere and seat == game.declarer


def choose_play_card(game: PontGame, seat: int, rng: random.Random) -> int:
    legal = game.legal_cards(seat)
    if len(legal) == 1:
        return legal[0]
    if not game.trick:
        return _choose_lead(game, seat, legal, rng)
    if _avoid_mode(game, seat):
        ducks = [c for c in legal if not _would_win(game, c)]
        if ducks:
            return max(ducks, key=rank_of)  # shed the highest safe card
        return min(legal, key=rank_of)
    if game.is_misere and seat != game.declarer:
        # steer the trick toward the declarer: stay under when they lead
        winner = _currently_winning(game)
        if winner == game.declarer:
            under = [c for c in legal if not _would_win(game, c)]
            if under:
                return max(under, key=rank_of)
        return min(legal, key=rank_of)
    winner = _currently_winning(game)
    if (
        game.config.partnerships
        and winner is not None
        and winner == partner_of(seat)
    ):
        return min(legal, key=rank_of)
    winners = [c for c in legal if _would_win(game, c)]
    if winners:
        return min(winners, key=rank_of)  # smallest sufficient card
    return min(legal, key=rank_of)


# -- poker-pont policy ----------------------------------------------------------


def poker_bot_action(table, seat: int, seed: int = 0, samples: int = DEFAULT_SAMPLES) -> dict:
    """Chip decisions for poker pont; play reuses the standard heuristics."""
    from .cards import card_str
    from .poker import BETTING, DECLARE, RESPOND, TIE_BID, UPGRADE_DISCARD, UPGRADE_OFFER

    game = table.game
    rng = random.Random(derive_seed(seed, game.game_no, "poker", len(game.played),
                                    sum(table.bets), sum(table.extra), table.phase, seat))
    phase = table.phase
    if phase == PLAY:
        return {"type": "play", "card": card_str(choose_play_card(game, seat, rng))}
    if phase == UPGRADE_DISCARD:
        hand = game.hands[seat]
        low = min(rank_of(c) for c in hand)
        return {"type": "discard",
                "card": card_str(rng.choice([c for c in hand if rank_of(c) == low]))}

    target, _ = _target_bid(game, seat, rng, max(samples // 4, 2))
    strength = -1 if target is None else target
    if phase == BETTING:
        cost = table._max_bet() - table.bets[seat]
        if strength >= 4 and table.bets[seat] <= table.ante + table.betting_round:
            return {"type": "raise", "chips": 1}
        if cost == 0:
            return {"type": "call"} if strength >= 2 else {"type": "pass"}
        if cost <= max(0, strength - 1):
            return {"type": "call"}
        return {"type": "pass"}
    if phase == UPGRADE_OFFER:
        return {"type": "upgrade"} if strength <= 1 and game.stock else {"type": "skip"}
    if phase == TIE_BID:
        for act in table.legal_actions(seat):
            if act["type"] == "bid" and game._bid_idx(PontBid.parse(act["bid"])) <= strength:
                return act
        return {"type": "pass"}
    if phase == DECLARE:
        trump_votes: Counter = Counter()
        for _ in range(max(samples // 4, 2)):
            world = _sample_world(game, seat, rng)
            _, trump = _best_bid_for_sample(game, world, seat)
            if trump is not None:
                trump_votes[trump] += 1
        from .cards import SUITS

        trump = trump_votes.most_common(1)[0][0] if trump_votes else 0
        return {"type": "declare", "trump": SUITS[trump]}
    if phase == RESPOND:
        if table.increases <= 1 and strength >= 2:
            return {"type": "respond"}
        return {"type": "pass"}
    raise ValueError(f"poker bot cannot act in phase {phase}")


def _choose_lead(game: PontGame, seat: int, legal: list[int], rng: random.Random) -> int:
    if _avoid_mode(game, seat) or (game.is_misere and seat != game.declarer):
        return min(legal, key=rank_of)
    by_suit: dict[int, list[int]] = {}
    for c in legal:
        by_suit.setdefault(suit_of(c), []).append(c)
    for cards in by_suit.values():
        cards.sort(key=rank_of, reverse=True)

    opponents = [
        s
        for s in game._play_order()
        if s != seat and not (game.config.partnerships and s == partner_of(seat))
    ]
    void_suits = [
        s for s in by_suit if any(s in game.voids[o] for o in opponents)
    ]
    if void_suits:
        suit = rng.choice(sorted(void_suits))
        return by_suit[suit][-1]  # force them cheaply

    def adjacent(cards: list[int]) -> bool:
        if len(cards) < 2:
            return False
        top, nxt = rank_of(cards[0]), rank_of(cards[1])
        return top - nxt == 1 or top - nxt >= 4

    adj = [s for s, cards in by_suit.items() if adjacent(cards)]
    if adj:
        suit = rng.choice(sorted(adj))
        return by_suit[suit][0]
    longest = max(len(c) for c in by_suit.values())
    long_suits = [s for s, cards in by_suit.items() if len(cards) == longest]
    adj_long = [s for s in long_suits if adjacent(by_suit[s])]
    suit = rng.choice(sorted(adj_long or long_suits))
    return by_suit[suit][0]
