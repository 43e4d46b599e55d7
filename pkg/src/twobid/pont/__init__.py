"""Pont: the contract card game with poker-style auction."""

from .bids import MISERE, PontBid, bid_index, bid_name, bid_order, min_tricks
from .bot import bot_action, choose_play_card, poker_bot_action
from .cards import card_from_str, card_str, make_deck, trick_winner_index
from .game import FINISHED, GameConfig, PontGame, partner_of
from .match import PontMatch
from .misere import misere_defeated
from .poker import PokerTable, poker_round, split_failure_shares
from .scoring import ContractOutcome, downplay_score, rewards, score_game

__all__ = [
    "MISERE",
    "PontBid",
    "bid_index",
    "bid_name",
    "bid_order",
    "min_tricks",
    "bot_action",
    "poker_bot_action",
    "choose_play_card",
    "card_from_str",
    "card_str",
    "make_deck",
    "trick_winner_index",
    "FINISHED",
    "GameConfig",
    "PontGame",
    "PontMatch",
    "partner_of",
    "misere_defeated",
    "PokerTable",
    "poker_round",
    "split_failure_shares",
    "ContractOutcome",
    "downplay_score",
    "rewards",
    "score_game",
]
