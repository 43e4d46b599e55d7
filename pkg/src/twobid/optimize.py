"""Coordinate-ascent parameter search over the engine's opti-parameters,
plus optimization-based company weights."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field, replace
from datetime import datetime
from typing import Callable, Optional, Sequence

from .backtest import QuoteSeries, run
from .errors import DomainError, InsufficientDataError
from .signals import EngineConfig

NEG_INF = float("-inf")


@dataclass(frozen=True)
class ContinuousDim:
    name: str
    low: float
    high: float
    init: float

    def __post_init__(self):
        if not (math.isfinite(self.low) and math.isfinite(self.high)):
            raise DomainError(f"bounds of {self.name} must be finite")
        if not self.low <= self.init <= self.high:
            raise DomainError(f"initial {self.name}={self.init} outside bounds")

    @property
    def span(self) -> float:
        return self.high - self.low


def _default_category_choices() -> tuple[tuple[int, ...], ...]:
    # 2-3 categories work best for single equities
    pool = range(1, 8)
    twos = itertools.combinations(pool, 2)
    threes = itertools.combinations(pool, 3)
    return tuple(itertools.chain(twos, threes))


@dataclass(frozen=True)
class ParamSpace:
    continuous: tuple[ContinuousDim, ...] = (
        ContinuousDim("beta", 1.0, 6.0, 1.0),
        ContinuousDim("decel_threshold", 0.0, 1.0, 0.05),
        ContinuousDim("accel_threshold", 0.0, 1.0, 0.05),
        ContinuousDim("kappa", 0.05, 1.0, 0.5),
        ContinuousDim("curve_shift", 0.0, 3.0, 0.5),
    )
    category_choices: tuple[tuple[int, ...], ...] = field(
        default_factory=_default_category_choices
    )
    trend_choices: tuple[str, ...] = ("pro", "counter")
    init_categories: tuple[int, ...] = (1, 2, 3)
    init_trend: str = "pro"

    def initial_params(self) -> dict:
        params = {dim.name: dim.init for dim in self.continuous}
        params["categories"] = self.init_categories
        params["trend"] = self.init_trend
        return params


@dataclass(frozen=True)
class OptResult:
    symbol: str
    params: dict
    config: EngineConfig
    education_return: float
    trade_count: int
    history: tuple[float, ...]  # best objective after each outer iteration


def config_from_params(params: dict, base: EngineConfig) -> EngineConfig:
    return replace(
        base,
        beta=params["beta"],
        decel_threshold=params["decel_threshold"],
        accel_threshold=params["accel_threshold"],
        kappa=params["kappa"],
        curve_shift=params["curve_shift"],
        categories=tuple(params["categories"]),
        trend=params["trend"],
    )


def make_objective(
    quotes: QuoteSeries,
    period: tuple[datetime, datetime],
    base: EngineConfig,
    duration_band: Optional[tuple[float, float]] = None,
) -> Callable[[dict], float]:
    """Mean return per position on the education period; -inf with no
    trades or outside the requested mean-duration band."""

    def objective(params: dict) -> float:
        metrics = run(config_from_params(params, base), quotes, period)[1]
        if metrics.num == 0:
            return NEG_INF
        if duration_band is not None:
            lo, hi = duration_band
            if not lo <= metrics.lngth <= hi:
                return NEG_INF
        return metrics.ret

    return objective


def _ascend_dim(
    params: dict,
    dim: ContinuousDim,
    best: float,
    objective: Callable[[dict], float],
) -> tuple[dict, float, bool]:
    """One coordinate step: central-difference slope, then a halving line
    search along its sign, projected to the bounds."""
    span = dim.span
    if span <= 0:
        return params, best, False
    h = 0.01 * span
    x = params[dim.name]

    def at(v: float) -> float:
        return objective({**params, dim.name: v})

    up = at(min(x + h, dim.high))
    down = at(max(x - h, dim.low))
    if up == down == NEG_INF and best == NEG_INF:
        return params, best, False
    direction = 1.0 if up >= down else -1.0
    step = 0.25 * span
    improved = False
    while step >= 1e-3 * span:
        candidate = min(max(x + direction * step, dim.low), dim.high)
        if candidate != x:
            value = at(candidate)
            if value > best:
                params = {**params, dim.name: candidate}
                best = value
                x = candidate
                improved = True
                continue
        step /= 2.0
    return params, best, improved


def optimize(
    space: ParamSpace,
    quotes: Optional[QuoteSeries] = None,
    education_period: Optional[tuple[datetime, datetime]] = None,
    objective: Optional[Callable[[dict], float]] = None,
    base_config: EngineConfig = EngineConfig(),
    max_iterations: int = 6,
    duration_band: Optional[tuple[float, float]] = None,
    seed: int = 0,
    restarts: int = 0,
) -> OptResult:
    """Coordinate ascent: per outer iteration an exhaustive sweep of the
    discrete dims, then a gradient-signed line search per continuous dim.

    The objective defaults to the education-period return per position;
    pass a callable to optimize something else (used by tests).
    """
    if objective is None:
        if quotes is None or education_period is None:
            raise DomainError("optimize needs quotes and a period, or an objective")
        start, end = education_period
        n = sum(1 for ts, _ in quotes.samples if start <= ts <= end)
        if n < 30:
            raise InsufficientDataError(
                f"education period holds {n} quotes; need at least 30"
            )
        objective = make_objective(quotes, education_period, base_config, duration_band)

    rng = random.Random(seed)
    symbol = quotes.symbol if quotes is not None else ""

    def one_run(params: dict) -> tuple[dict, float, list[float]]:
        best = objective(params)
        history = []
        for _ in range(max_iterations):
            moved = False
            for choice in space.category_choices:
                value = objective({**params, "categories": choice})
                if value > best:
                    params, best, moved = {**params, "categories": choice}, value, True
            for choice in space.trend_choices:
                value = objective({**params, "trend": choice})
                if value > best:
                    params, best, moved = {**params, "trend": choice}, value, True
            for dim in space.continuous:
                params, best, improved = _ascend_dim(params, dim, best, objective)
                moved = moved or improved
            history.append(best)
            if not moved:
                break
        return params, best, history

    params, best, history = one_run(space.initial_params())
    for _ in range(restarts):
        start_params = {
            dim.name: rng.uniform(dim.low, dim.high) for dim in space.continuous
        }
        start_params["categories"] = rng.choice(space.category_choices)
        start_params["trend"] = rng.choice(space.trend_choices)
        p, b, h = one_run(start_params)
        if b > best:
            params, best, history = p, b, h

    config = config_from_params(params, base_config)
    trade_count = 0
    if quotes is not None and education_period is not None:
        trade_count = run(config, quotes, education_period)[1].num
    return OptResult(symbol, params, config, best, trade_count, tuple(history))


def weights(results: Sequence[OptResult] | dict[str, float], rule: str) -> dict[str, float]:
    """Company weights from education returns.

    Rules: "cutoff:X" (1 above X, else 0), "proportional" (positive
    returns normalized to sum 1), "top:K" (1 for the K best).
    """
    if isinstance(results, dict):
        returns = dict(results)
    else:
        if not results:
            raise DomainError("weights need at least one result")
        returns = {r.symbol: r.education_return for r in results}
    if not returns:
        raise DomainError("weights need at least one result")

    if rule.startswith("cutoff:"):
        cut = float(rule.split(":", 1)[1])
        return {s: (1.0 if r > cut else 0.0) for s, r in returns.items()}
    if rule == "proportional":
        clipped = {s: max(r, 0.0) for s, r in returns.items()}
        total = sum(clipped.values())
        if total == 0:
            return {s: 0.0 for s in clipped}
        return {s: v / total for s, v in clipped.items()}
    if rule.startswith("top:"):
        k = int(rule.split(":", 1)[1])
        ordered = sorted(returns, key=lambda s: (-returns[s], s))
        chosen = set(ordered[:k])
        return {s: (1.0 if s in chosen else 0.0) for s in returns}
    raise DomainError(f"unknown weights rule {rule!r}")
