"""Category g-functions, backward bid computation, 2-bid ranking and the
printed bid tables.

All durations are business time measured in hours: 1d = 6.5h, 1w = 5d,
1m = 22d, 2m = 45d, 3m = 65d, 4m = 86d, 6m = 126d, 9m = 191d, 12m = 252d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

HOURS_PER_DAY = 6.5
DAY = HOURS_PER_DAY
WEEK = 5 * DAY
MONTH = 22 * DAY

# duration label -> hours, for table columns and CLI input
DURATIONS = {
    "1h": 1.0,
    "2h": 2.0,
    "3h": 3.0,
    "4h": 4.0,
    "1d": DAY,
    "2d": 2 * DAY,
    "4d": 4 * DAY,
    "5d": WEEK,
    "1w": WEEK,
    "2w": 2 * WEEK,
    "3w": 3 * WEEK,
    "15d": 15 * DAY,
    "45d": 45 * DAY,
    "1m": MONTH,
    "2m": 45 * DAY,
    "3m": 65 * DAY,
    "4m": 86 * DAY,
    "6m": 126 * DAY,
    "9m": 191 * DAY,
    "12m": 252 * DAY,
}

# prime time-intervals per category; even ones are twice the preceding odd
PRIME_INTERVALS = {
    1: 1.0,
    2: 2.0,
    3: DAY,
    4: 2 * DAY,
    5: WEEK,
    6: 2 * WEEK,
    7: MONTH,
}

CATEGORY_NAMES = {1: "super", 3: "ultra", 5: "extra", 7: "regular"}

# exponent inside each odd category's curve (x ~ 0.137 + log(u)/6)
CATEGORY_EXPONENTS = {1: 0.137, 3: 0.418, 5: 0.5678, 7: 1.0}


def _floor(z: float) -> float:
    # table entries sit on floor boundaries (e.g. extra at 1m is 85.99...),
    # so nudge up before flooring
    return math.floor(z + 1e-9)


@dataclass(frozen=True)
class Category:
    """Investment-horizon class 1..7 with its prime time-interval."""

    index: int

    def __post_init__(self):
        if self.index not in PRIME_INTERVALS:
            raise DomainError(f"category must be 1..7, got {self.index}")

    @property
    def prime_interval(self) -> float:
        return PRIME_INTERVALS[self.index]

    @property
    def name(self) -> str:
        return CATEGORY_NAMES.get(self.index, "·")


def _g_prime_branch(t: float, c: int) -> float:
    if c == 1:
        # The printed curve carries a 0.5 prefactor on the floored term,
        # but only the prefactor-free form reproduces the super/minimal
        # tables (1, 1.49, 3, 6.49, 10.99, 15.01); that form is used.
        return _floor(1548.0 * (0.26 * t + 0.74) ** 0.137 - 1548.0) / 100.0 + 1.0
    if c == 3:
        return 2.0 * _floor(10.0 * (2.0 * (t / DAY) - 1.0) ** 0.418) / 10.0
    if c == 5:
        return 0.1 * _floor(22.875 * (2.024 * t / WEEK - 1.024) ** 0.5678 + 12.125)
    if c == 7:
        return 3.5 * (_floor(10.25 * (t / MONTH)) / 10.0 + 1.0)
    raise DomainError(f"no prime branch for category {c}")


def g(t: float, c: int) -> float:
    """Expected percent return of category c after t hours.

    Odd categories use their floored power curves above the prime
    interval and the uniform linear extension g(t*) (2t + t*) / (3 t*)
    below it; even categories average the two odd neighbours.
    """
    if t <= 0:
        raise DomainError(f"g needs t > 0, got {t}")
    if c not in PRIME_INTERVALS:
        raise DomainError(f"category must be 1..7, got {c}")
    if c % 2 == 0:
        return (g(t, c - 1) + g(t, c + 1)) / 2.0
    prime = PRIME_INTERVALS[c]
    if t < prime:
        return _g_prime_branch(prime, c) * (2.0 * t + prime) / (3.0 * prime)
    return _g_prime_branch(t, c)


@dataclass(frozen=True, order=False)
class TwoBid:
    """Discretized forecast unit: bid integer b, category c, depth m."""

    b: int
    c: int
    m: int = 1

    def __post_init__(self):
        if self.b < 0:
            raise DomainError("bid must be >= 0")
        if self.c not in PRIME_INTERVALS:
            raise DomainError(f"category must be 1..7, got {self.c}")
        if self.m < 1:
            raise DomainError("depth must be >= 1")

    @property
    def admissible(self) -> bool:
        return self.b >= 1

    @property
    def span_hours(self) -> float:
        return self.m * PRIME_INTERVALS[self.c]

    def rank_key(self) -> tuple[int, int, int]:
        # bigger bid first, then smaller category, then smaller depth
        return (-self.b, self.c, self.m)

    def beats(self, other: "TwoBid | None") -> bool:
        return other is None or self.rank_key() < other.rank_key()


def bid_backward(p_now: float, p_then: float, span: float, c: int, beta: float = 1.0) -> int:
    """Backward bid: Floor[100 beta |p_now - p_then| / (g(span, c) p_then)]."""
    if p_now <= 0 or p_then <= 0:
        raise DomainError("prices must be positive")
    if beta < 1.0:
        raise DomainError(f"rescaling coefficient must be >= 1, got {beta}")
    return int(_floor(100.0 * beta * abs(p_now - p_then) / (g(span, c) * p_then)))


def rank(bids: list[TwoBid]) -> list[TwoBid]:
    """Rank admissible 2-bids, top first; stable under the total key order."""
    if not bids:
        raise DomainError("rank needs a non-empty bid list")
    return sorted(bids, key=TwoBid.rank_key)


# ---------------------------------------------------------------------------
# table rendering

_CATEGORY_TABLES = {
    "super": (1, range(1, 7), ["1h", "2h", "1d", "5d", "1m", "3m"]),
    "ultra": (3, range(1, 7), ["1d", "2d", "5d", "15d", "45d", "6m"]),
    "extra": (5, range(1, 6), ["1w", "2w", "1m", "3m", "9m"]),
    "regular": (7, range(1, 5), ["1m", "2m", "4m", "12m"]),
}

_MIN4_COLS = ["1h", "2h", "1d", "2d", "1w", "2w", "3w", "1m", "2m", "3m", "4m", "6m", "9m"]
_MIN7_COLS = ["1h", "2h", "3h", "1d", "2d", "4d", "1w", "2w", "1m", "2m", "3m", "4m"]

TABLE_KINDS = ("super", "ultra", "extra", "regular", "min-4cat", "min-7cat")


def _column_hours(label: str) -> float:
    # the printed 7-category table labels its third column "3h" but its
    # entries are the g-values at 4h; reproduce the self-consistent values
    if label == "3h":
        return DURATIONS["4h"]
    return DURATIONS[label]


def table_data(kind: str) -> tuple[list[str], list[list[str]]]:
    """Header and rows of one of the printed tables, entries to 2 decimals."""
    if kind in _CATEGORY_TABLES:
        cat, bids, cols = _CATEGORY_TABLES[kind]
        header = ["b"] + cols
        rows = []
        for b in bids:
            rows.append([str(b)] + [f"{b * g(DURATIONS[c], cat):.2f}" for c in cols])
        return header, rows
    if kind == "min-4cat":
        header = ["cat"] + _MIN4_COLS
        cats = [7, 5, 3, 1]
        cols = _MIN4_COLS
    elif kind == "min-7cat":
        header = ["cat"] + _MIN7_COLS
        cats = [1, 2, 3, 4, 5, 6, 7]
        cols = _MIN7_COLS
    else:
        raise DomainError(f"unknown table kind {kind!r}; choose from {TABLE_KINDS}")
    rows = []
    for cat in cats:
        row = [str(cat)]
        for label in cols:
            hours = _column_hours(label)
            if hours < PRIME_INTERVALS[cat]:
                row.append("---")
            else:
                row.append(f"{g(hours, cat):.2f}")
        rows.append(row)
    return header, rows


def render_table(kind: str, fmt: str = "text") -> str:
    """Render a table as aligned text or CSV."""
    header, rows = table_data(kind)
    if fmt == "csv":
        lines = [",".join(header)] + [",".join(r) for r in rows]
        return "\n".join(lines) + "\n"
    if fmt != "text":
        raise DomainError(f"format must be 'text' or 'csv', got {fmt!r}")
    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) for i in range(len(header))]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    for r in rows:
        lines.append("  ".join(v.rjust(w) for v, w in zip(r, widths)))
    if kind == "min-7cat":
        lines.append("note: the '3h' column is evaluated at t=4h (printed-label mismatch)")
    return "\n".join(lines) + "\n"
