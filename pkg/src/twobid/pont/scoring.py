"""Score and reward arithmetic for finished pont games."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DomainError


@dataclass(frozen=True)
class ContractOutcome:
    """What the score of one played contract depends on."""

    declarer: int
    tricks_declared: int
    cards: int
    is_misere: bool
    premium: bool  # declarer's round-1 bid was >= 5/6 (or misere)
    success: bool
    missed: int = 0  # tricks short of the contract, for strict scoring


def contract_value(outcome: ContractOutcome, two_sided: bool, variant: str = "full") -> int:
    """Base value: declared tricks minus 3 (2 players/teams) or minus 2
    (3-4 individuals); misere is valued as 5/6; premium adds one."""
    base = 3 if two_sided else 2
    tricks = 5 if outcome.is_misere else outcome.tricks_declared
    value = tricks - base
    if outcome.premium and variant == "full":
        value += 1
    return value


def _bonus(outcome: ContractOutcome, two_sided: bool) -> int:
    # bonus only on success and never for misere (its printed totals,
    # 3 points for 2 players and 4 for 3-4, already include the premium)
    if not outcome.success or outcome.is_misere:
        return 0
    if outcome.tricks_declared == outcome.cards:
        return 1 if two_sided else 2
    if not two_sided and outcome.tricks_declared == outcome.cards - 1:
        return 1
    return 0


def score_game(
    outcome: ContractOutcome,
    seats: int,
    two_sided: bool,
    variant: str = "full",
    strict: bool = False,
) -> dict[int, float]:
    """Per-seat score deltas of a played contract.

    Made contracts add value (plus bonus); failed ones subtract value,
    multiplied by the missed tricks under strict scoring.  The bonus is
    never subtracted.
    """
    deltas = {seat: 0.0 for seat in range(seats)}
    value = contract_value(outcome, two_sided, variant)
    if outcome.success:
        deltas[outcome.declarer] = float(value + _bonus(outcome, two_sided))
    else:
        loss = value * (outcome.missed if strict and outcome.missed > 0 else 1)
        deltas[outcome.declarer] = -float(loss)
    return deltas


def downplay_score(tricks: dict[int, int], two_sided: bool) -> dict[int, float]:
    """Downplay deltas: tricks diminished by the table minimum and
    subtracted, halved for 2 players."""
    if not tricks:
        raise DomainError("downplay needs trick counts")
    low = min(tricks.values())
    deltas = {}
    for seat, t in tricks.items():
        diminished = t - low
        if two_sided and len(tricks) == 2:
            deltas[seat] = -diminished / 2.0
        else:
            deltas[seat] = -float(diminished)
    return deltas


def rewards(scores: dict[int, float], partnerships: bool = False) -> dict[int, float]:
    """Zero-sum rewards: scores diminished by their arithmetic mean.

    With partnerships the two partners' rewards are redistributed: same
    signs stay as they are; with mixed signs the whole (negative) total
    falls on the negative partner, or the whole (positive) total goes to
    the positive partner.
    """
    if len(scores) < 2:
        raise DomainError("rewards need at least two seats")
    mean = sum(scores.values()) / len(scores)
    out = {seat: score - mean for seat, score in scores.items()}
    if partnerships:
        if len(scores) != 4:
            raise DomainError("partnerships need four seats")
        for a, b in ((0, 2), (1, 3)):
            ra, rb = out[a], out[b]
            if ra * rb >= 0:
                continue
            total = ra + rb
            pos, neg = (a, b) if ra > 0 else (b, a)
            if total <= 0:
                out[pos], out[neg] = 0.0, total
            else:
                out[pos], out[neg] = total, 0.0
    return out
