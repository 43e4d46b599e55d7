"""Quote ingestion, replay of the signal engine over control periods, and
the NUM/RET/LNGTH performance report."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DomainError, ParseError
from .signals import (
    EngineConfig,
    PositionBook,
    SignalEngine,
    TradeRecord,
    apply_signals,
    force_close,
)

QUOTES_CSV_HEADER = "timestamp,symbol,price"


@dataclass(frozen=True)
class QuoteSeries:
    symbol: str
    samples: tuple[tuple[datetime, float], ...]  # strictly increasing times

    def __post_init__(self):
        last = None
        for ts, price in self.samples:
            if price <= 0:
                raise DomainError(f"non-positive price {price} at {ts}")
            if last is not None and ts <= last:
                raise DomainError(f"timestamps not strictly increasing at {ts}")
            last = ts

    def __len__(self) -> int:
        return len(self.samples)

    def change_pct(self, start: datetime, end: datetime) -> float:
        window = [p for ts, p in self.samples if start <= ts <= end]
        if len(window) < 2:
            return 0.0
        return (window[-1] / window[0] - 1.0) * 100.0


def ingest_csv(path: str | Path) -> dict[str, QuoteSeries]:
    """Parse a `timestamp,symbol,price` CSV into per-symbol sorted series."""
    lines = Path(path).read_text().strip().splitlines()
    if not lines or lines[0].strip() != QUOTES_CSV_HEADER:
        raise ParseError(f"expected header {QUOTES_CSV_HEADER!r}", line=1)
    rows: dict[str, list[tuple[datetime, float]]] = {}
    for i, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise ParseError("expected timestamp,symbol,price", line=i)
        try:
            ts = datetime.fromisoformat(parts[0].strip())
        except ValueError as exc:
            raise ParseError(f"bad timestamp {parts[0]!r}", line=i) from exc
        symbol = parts[1].strip()
        try:
            price = float(parts[2])
        except ValueError as exc:
            raise ParseError(f"bad price {parts[2]!r}", line=i) from exc
        if price <= 0:
            raise ParseError(f"non-positive price {price}", line=i)
        rows.setdefault(symbol, []).append((ts, price))
    out = {}
    for symbol, samples in rows.items():
        samples.sort(key=lambda sp: sp[0])
        for (t1, _), (t2, _) in zip(samples, samples[1:]):
            if t1 == t2:
                raise ParseError(f"duplicate timestamp {t1} for {symbol}")
        out[symbol] = QuoteSeries(symbol, tuple(samples))
    return out


# ---------------------------------------------------------------------------


def _mean_std(xs: Sequence[float]) -> tuple[float, float]:
    if not xs:
        return 0.0, 0.0
    mean = sum(xs) / len(xs)
    var = sum((x - mean) ** 2 for x in xs) / len(xs)
    return mean, math.sqrt(var)


@dataclass(frozen=True)
class LevelStats:
    num: int
    ret: float
    ret_std: float
    lngth: float


@dataclass(frozen=True)
class Metrics:
    """NUM positions, mean RET %/position (std), mean LNGTH in business
    days, plus the per-level breakdown."""

    num: int
    ret: float
    ret_std: float
    lngth: float
    levels: dict[int, LevelStats] = field(default_factory=dict)

    @staticmethod
    def from_trades(trades: Sequence[TradeRecord]) -> "Metrics":
        rets = [t.return_pct for t in trades]
        durs = [t.duration_days for t in trades]
        ret, std = _mean_std(rets)
        lngth = sum(durs) / len(durs) if durs else 0.0
        levels: dict[int, LevelStats] = {}
        for lev in sorted({t.level for t in trades}):
            sub = [t for t in trades if t.level == lev]
            r, s = _mean_std([t.return_pct for t in sub])
            levels[lev] = LevelStats(
                len(sub), r, s, sum(t.duration_days for t in sub) / len(sub)
            )
        return Metrics(len(trades), ret, std, lngth, levels)


@dataclass(frozen=True)
class PeriodResult:
    label: str
    benchmark_change: float
    metrics: Metrics
    trades: tuple[TradeRecord, ...]


def run(
    config: EngineConfig,
    quotes: QuoteSeries,
    period: tuple[datetime, datetime],
) -> tuple[list[TradeRecord], Metrics]:
    """Replay the engine from scratch over one period.

    Quotes up to depth_cap before the period feed bid lookbacks only;
    their signals are never traded.  All open positions are force-closed
    on the last quote of the period.
    """
    start, end = period
    if start >= end:
        raise DomainError("period start must precede its end")
    in_period = [(ts, p) for ts, p in quotes.samples if start <= ts <= end]
    if not in_period:
        raise DomainError("period contains no quotes")
    warm_steps = int(math.ceil(config.depth_cap_hours / config.step_hours))
    before = [(ts, p) for ts, p in quotes.samples if ts < start]
    warmup = before[-warm_steps:] if warm_steps else []

    engine = SignalEngine(config, quotes.symbol)
    book = PositionBook(symbol=quotes.symbol)
    trades: list[TradeRecord] = []
    for ts, price in warmup:
        engine.step(ts, price)  # warm-up signals are discarded
    for ts, price in in_period:
        signals = engine.step(ts, price)
        _, closed = apply_signals(book, signals, config)
        trades.extend(closed)
    last_ts, last_price = in_period[-1]
    last_step = len(engine.prices) - 1
    trades.extend(force_close(book, last_ts, last_price, last_step, config))
    return trades, Metrics.from_trades(trades)


def run_periods(
    config: EngineConfig,
    quotes: QuoteSeries,
    periods: Sequence[tuple[datetime, datetime]],
) -> list[PeriodResult]:
    out = []
    for start, end in periods:
        trades, metrics = run(config, quotes, (start, end))
        label = f"{start:%Y%m%d}-{end:%Y%m%d}"
        out.append(
            PeriodResult(label, quotes.change_pct(start, end), metrics, tuple(trades))
        )
    return out


def avrg_return(period_stats: Iterable) -> float:
    """88-business-day normalized return across control periods.

    88 * sum(RET_i * NUM_i) / sum(LNGTH_i * NUM_i); accepts Metrics
    objects or (num, ret, lngth) tuples.
    """
    num_ret = 0.0
    num_lngth = 0.0
    any_positions = False
    for stats in period_stats:
        if isinstance(stats, Metrics):
            num, ret, lngth = stats.num, stats.ret, stats.lngth
        else:
            num, ret, lngth = stats
        if num > 0:
            any_positions = True
        num_ret += ret * num
        num_lngth += lngth * num
    if not any_positions or num_lngth == 0:
        raise DomainError("avrg_return needs at least one period with positions")
    return 88.0 * num_ret / num_lngth


def render_report(
    periods: Sequence[PeriodResult],
    benchmark: str = "",
    title: str = "",
) -> str:
    """Text report in the historical-testing layout: per-period header with
    the benchmark change, an ALL line, then one line per level."""
    lines: list[str] = []
    if title:
        lines.append(title)
    if len(periods) > 1:
        total_num = sum(p.metrics.num for p in periods)
        if total_num:
            avg_lngth = sum(p.metrics.lngth * p.metrics.num for p in periods) / total_num
            lines.append(f"AVERAGE POSITION LNGTH: {avg_lngth:.1f} d;")
            try:
                lines.append(f"AVERAGE 4 MONTH RETURN: {avrg_return(p.metrics for p in periods):.2f}")
            except DomainError:
                pass
        avg_chg = sum(p.benchmark_change for p in periods) / len(periods)
        lines.append(f"AVR {benchmark or 'BENCH'} 4 MONTH CHANGE: {avg_chg:.2f}")
        lines.append("")
    for p in periods:
        lines.append(f"PERIOD: {p.label}, {benchmark or 'BENCH'} CHANGE={p.benchmark_change:.1f}%")
        m = p.metrics
        lines.append(
            f"{'NUM=' + str(m.num):<12}"
            f"{'RET=' + f'{m.ret:.2f}({m.ret_std:.2f})':<18}"
            f"{'LNGTH=' + f'{m.lngth:.1f}d':<14}ALL"
        )
        for lev in sorted(m.levels):
            ls = m.levels[lev]
            lines.append(
                f"{'num=' + str(ls.num):<12}"
                f"{'ret=' + f'{ls.ret:.2f}({ls.ret_std:.2f})':<18}"
                f"{'lngth=' + f'{ls.lngth:.1f}d':<14}lev={lev}"
            )
    return "\n".join(lines) + "\n"
