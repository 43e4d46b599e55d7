"""Per-symbol signal engine: top/start 2-bids gated by price deceleration
and acceleration, termination curves, open/close signals with levels, and
the position book that turns signals into trades.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import DomainError, QuoteOrderError
from .tables import PRIME_INTERVALS, TwoBid, g

LONG, SHORT = "long", "short"
BUY, SELL = "buy", "sell"

KIND_BID = "bid-increase"
KIND_START = "start-bid"
KIND_CURVE = "curve-intersection"

_DIR_TO_OPEN = {LONG: BUY, SHORT: SELL}
_FLIP = {BUY: SELL, SELL: BUY}


@dataclass(frozen=True)
class EngineConfig:
    """Trading parameters; all thresholds/shifts are in percent units."""

    mode: str = "long-short"  # long-only | short-only | long-short
    trend: str = "pro"  # pro | counter
    categories: tuple[int, ...] = (1, 2, 3)
    beta: float = 1.0
    decel_threshold: float = 0.05
    accel_threshold: float = 0.05
    kappa: float = 0.5
    curve_shift: float = 0.5
    depth_cap_hours: float = PRIME_INTERVALS[7]  # one month back
    step_hours: float = 6.5 / 3.0  # three quotes per business day
    cost_pct: float = 0.0  # optional per-position cost, off by default

    def __post_init__(self):
        if self.mode not in ("long-only", "short-only", "long-short"):
            raise DomainError(f"bad mode {self.mode!r}")
        if self.trend not in ("pro", "counter"):
            raise DomainError(f"bad trend {self.trend!r}")
        if not self.categories:
            raise DomainError("need at least one category")
        for c in self.categories:
            if c not in PRIME_INTERVALS:
                raise DomainError(f"bad category {c}")
        if self.beta < 1.0:
            raise DomainError("beta must be >= 1")
        if self.decel_threshold < 0 or self.accel_threshold < 0:
            raise DomainError("thresholds must be >= 0")
        if not 0 < self.kappa <= 1:
            raise DomainError("kappa must be in (0, 1]")
        if self.curve_shift < 0:
            raise DomainError("curve shift must be >= 0")
        if self.step_hours <= 0 or self.depth_cap_hours <= 0:
            raise DomainError("step and depth cap must be positive")

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "trend": self.trend,
            "categories": ",".join(str(c) for c in self.categories),
            "beta": self.beta,
            "decel_threshold": self.decel_threshold,
            "accel_threshold": self.accel_threshold,
            "kappa": self.kappa,
            "curve_shift": self.curve_shift,
            "depth_cap_hours": self.depth_cap_hours,
            "step_hours": self.step_hours,
            "cost_pct": self.cost_pct,
        }

    @staticmethod
    def from_dict(raw: dict) -> "EngineConfig":
        kwargs: dict = {}
        for key, value in raw.items():
            if key in ("mode", "trend"):
                kwargs[key] = str(value)
            elif key == "categories":
                if isinstance(value, str):
                    kwargs[key] = tuple(int(x) for x in value.split(",") if x.strip())
                else:
                    kwargs[key] = tuple(int(x) for x in value)
            else:
                kwargs[key] = float(value)
        return EngineConfig(**kwargs)


@dataclass(frozen=True)
class TerminationCurve:
    """Scaled, shifted category curve anchored at the bid's origin.

    Long curves trail the price from below and close the position when
    the price dips under them; short curves mirror this from above.
    """

    bid: TwoBid
    t0: float  # anchor time, business hours from series start
    p0: float  # anchor price
    direction: str  # long | short
    kappa: float
    shift: float

    def value(self, t: float) -> float:
        if t < self.t0:
            raise DomainError(f"curve defined for t >= {self.t0}, got {t}")
        dt = t - self.t0
        prime = PRIME_INTERVALS[self.bid.c]
        # the linear sub-prime branch tends to g(prime)/3 as dt -> 0+
        gval = g(dt, self.bid.c) if dt > 0 else g(prime, self.bid.c) / 3.0
        offset = (self.kappa * self.bid.b * gval - self.shift) / 100.0
        if self.direction == LONG:
            return self.p0 * (1.0 + offset)
        return self.p0 * (1.0 - offset)


def termination_value(curve: TerminationCurve, t: float) -> float:
    return curve.value(t)


@dataclass(frozen=True)
class Signal:
    symbol: str
    direction: str  # buy | sell
    level: int
    kind: str
    time: object
    price: float
    step: int
    source: object = None  # TwoBid or TerminationCurve

    def csv_row(self) -> str:
        return f"{self.time},{self.symbol},{self.direction},{self.level},{self.kind},{self.price!r}"


SIGNAL_CSV_HEADER = "time,symbol,direction,level,kind,price"


class _DirState:
    __slots__ = ("top", "start", "level", "curve")

    def __init__(self):
        self.top: Optional[TwoBid] = None
        self.start: Optional[TwoBid] = None
        self.level = 0
        self.curve: Optional[TerminationCurve] = None


class SignalEngine:
    """Single-symbol state machine; feed quotes in time order via step()."""

    def __init__(self, config: EngineConfig, symbol: str = ""):
        self.config = config
        self.symbol = symbol
        self.prices: list[float] = []
        self.times: list = []
        self._state = {LONG: _DirState(), SHORT: _DirState()}
        # (category, depth m, lookback steps, g at the nominal span)
        self._lookups: list[tuple[int, int, int, float]] = []
        for cat in sorted(config.categories):
            prime = PRIME_INTERVALS[cat]
            m = 1
            while m * prime <= config.depth_cap_hours + 1e-9:
                steps = int(m * prime / config.step_hours + 0.5)
                if steps >= 1:
                    self._lookups.append((cat, m, steps, g(m * prime, cat)))
                m += 1

    # -- bid computation ----------------------------------------------------

    def _best_candidate(self, want_long: bool) -> Optional[TwoBid]:
        n = len(self.prices) - 1
        p_now = self.prices[n]
        scale = 100.0 * self.config.beta
        best: Optional[tuple[int, int, int]] = None
        for cat, m, steps, gval in self._lookups:
            i = n - steps
            if i < 0:
                continue
            p_then = self.prices[i]
            move = p_now - p_then
            if (move <= 0) if want_long else (move >= 0):
                continue
            b = int(scale * abs(move) / (gval * p_then) + 1e-9)
            if b >= 1 and (best is None or b > best[0]):
                best = (b, cat, m)
        if best is None:
            return None
        return TwoBid(*best)

    # -- main transition -----------------------------------------------------

    def step(self, time, price: float) -> list[Signal]:
        """Consume one quote, return the signals it triggers (pro order:
        curve closes first, then long gate, then short gate)."""
        if price <= 0:
            raise DomainError(f"price must be positive, got {price}")
        if self.times and not (time > self.times[-1]):
            raise QuoteOrderError(f"quote at {time} not after {self.times[-1]}")
        self.times.append(time)
        self.prices.append(price)
        n = len(self.prices) - 1
        hours = n * self.config.step_hours
        out: list[Signal] = []

        # terminations use the curves as they stood before this quote
        for direction in (LONG, SHORT):
            st = self._state[direction]
            if st.curve is None:
                continue
            value = st.curve.value(hours)
            crossed = price < value if direction == LONG else price > value
            if crossed:
                close_dir = SHORT if direction == LONG else LONG
                out.append(self._emit(close_dir, KIND_CURVE, time, price, n, st.curve))
                st.curve = None

        acc = None
        if n >= 2:
            p0, p1, p2 = self.prices[n - 2], self.prices[n - 1], price
            acc = 100.0 * ((p2 - p1) - (p1 - p0)) / p0

        if acc is not None:
            for direction in (LONG, SHORT):
                signed = acc if direction == LONG else -acc
                st = self._state[direction]
                cand = None
                kind = None
                if signed < -self.config.decel_threshold:
                    cand = self._best_candidate(direction == LONG)
                    if cand is not None:
                        increased = cand.beats(st.top)
                        st.top = cand  # renewal replaces, up or down
                        if increased:
                            kind = KIND_BID
                elif signed > self.config.accel_threshold:
                    cand = self._best_candidate(direction == LONG)
                    if cand is not None:
                        increased = cand.beats(st.start)
                        st.start = cand
                        if increased:
                            kind = KIND_START
                if kind is not None:
                    out.append(self._emit(direction, kind, time, price, n, cand))
                    if kind == KIND_BID:
                        self._anchor_curve(direction, cand, n)
        return out

    def _emit(self, direction: str, kind: str, time, price: float, step: int, source) -> Signal:
        st = self._state[direction]
        other = self._state[SHORT if direction == LONG else LONG]
        st.level += 1
        other.level = 0
        label = _DIR_TO_OPEN[direction]
        if self.config.trend == "counter":
            label = _FLIP[label]
        return Signal(self.symbol, label, st.level, kind, time, price, step, source)

    def _anchor_curve(self, direction: str, bid: TwoBid, n: int) -> None:
        st = self._state[direction]
        if st.curve is not None and not bid.beats(st.curve.bid):
            return  # only a strictly higher top 2-bid re-anchors
        cat, m = bid.c, bid.m
        steps = int(m * PRIME_INTERVALS[cat] / self.config.step_hours + 0.5)
        anchor_step = max(n - steps, 0)
        st.curve = TerminationCurve(
            bid=bid,
            t0=anchor_step * self.config.step_hours,
            p0=self.prices[anchor_step],
            direction=direction,
            kappa=self.config.kappa,
            shift=self.config.curve_shift,
        )

    def run(self, quotes) -> list[Signal]:
        out: list[Signal] = []
        for time, price in quotes:
            out.extend(self.step(time, price))
        return out


# -- position book ----------------------------------------------------------

MAX_LEVELS = 4


@dataclass(frozen=True)
class TradeRecord:
    symbol: str
    direction: str  # buy -> long position, sell -> short position
    level: int
    entry_time: object
    exit_time: object
    entry_price: float
    exit_price: float
    entry_step: int
    exit_step: int
    return_pct: float
    duration_days: float


@dataclass
class _Position:
    direction: str
    level: int
    entry_time: object
    entry_price: float
    entry_step: int


@dataclass
class PositionBook:
    """Open positions for one symbol, at most one direction at a time."""

    symbol: str = ""
    positions: dict = field(default_factory=dict)  # level -> _Position
    direction: Optional[str] = None
    skipped: list = field(default_factory=list)  # over-level signals

    def open_count(self) -> int:
        return len(self.positions)


def _close_all(
    book: PositionBook, time, price: float, step: int, step_hours: float, cost: float
) -> list[TradeRecord]:
    trades = []
    for level in sorted(book.positions):
        pos = book.positions[level]
        if pos.direction == BUY:
            ret = (price - pos.entry_price) / pos.entry_price * 100.0
        else:
            ret = (pos.entry_price - price) / pos.entry_price * 100.0
        trades.append(
            TradeRecord(
                symbol=book.symbol,
                direction=pos.direction,
                level=pos.level,
                entry_time=pos.entry_time,
                exit_time=time,
                entry_price=pos.entry_price,
                exit_price=price,
                entry_step=pos.entry_step,
                exit_step=step,
                return_pct=ret - cost,
                duration_days=(step - pos.entry_step) * step_hours / 6.5,
            )
        )
    book.positions.clear()
    book.direction = None
    return trades


def apply_signals(
    book: PositionBook, signals: list[Signal], config: EngineConfig
) -> tuple[PositionBook, list[TradeRecord]]:
    """Feed time-ordered signals through the book.

    Any opposite-direction signal closes every open position; open-kind
    signals then open at their level (capped at 4).  Mode filters openings
    only, never closings.
    """
    trades: list[TradeRecord] = []
    for sig in signals:
        if book.direction is not None and sig.direction != book.direction:
            trades.extend(
                _close_all(book, sig.time, sig.price, sig.step, config.step_hours, config.cost_pct)
            )
        if sig.kind == KIND_CURVE:
            continue  # curve intersections never open or reverse
        if config.mode == "long-only" and sig.direction == SELL:
            continue
        if config.mode == "short-only" and sig.direction == BUY:
            continue
        if sig.level > MAX_LEVELS:
            book.skipped.append(sig)
            continue
        if sig.level in book.positions:
            continue
        book.positions[sig.level] = _Position(
            sig.direction, sig.level, sig.time, sig.price, sig.step
        )
        book.direction = sig.direction
    return book, trades


def force_close(
    book: PositionBook, time, price: float, step: int, config: EngineConfig
) -> list[TradeRecord]:
    """Close everything at the given quote (used at period end)."""
    return _close_all(book, time, price, step, config.step_hours, config.cost_pct)
