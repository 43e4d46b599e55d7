"""Synthetic "algebraic volatility" charts and power-law exponent recovery."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import DomainError, InsufficientDataError, ParseError
from .tables import CATEGORY_EXPONENTS, g

CSV_HEADER = "t_hours,value"


@dataclass(frozen=True)
class ChartSeries:
    """Sampled chart: strictly increasing time grid (hours) and finite values."""

    times: tuple[float, ...]
    values: tuple[float, ...]
    meta: str = ""

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise DomainError("times and values must have equal length")
        ts = np.asarray(self.times, dtype=float)
        vs = np.asarray(self.values, dtype=float)
        if len(ts) and not np.all(np.diff(ts) > 0):
            raise DomainError("times must be strictly increasing")
        if not (np.all(np.isfinite(ts)) and np.all(np.isfinite(vs))):
            raise DomainError("chart samples must be finite")

    def __len__(self) -> int:
        return len(self.times)

    def scaled(self, k: float) -> "ChartSeries":
        return ChartSeries(self.times, tuple(k * v for v in self.values), self.meta)

    def to_csv(self, path: str | Path) -> None:
        lines = [CSV_HEADER]
        lines += [f"{t!r},{v!r}" for t, v in zip(self.times, self.values)]
        Path(path).write_text("\n".join(lines) + "\n")

    @staticmethod
    def from_csv(path: str | Path, meta: str = "") -> "ChartSeries":
        text = Path(path).read_text().strip().splitlines()
        if not text or text[0].strip() != CSV_HEADER:
            raise ParseError(f"expected header {CSV_HEADER!r}", line=1)
        ts, vs = [], []
        for i, line in enumerate(text[1:], start=2):
            if not line.strip():
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ParseError("expected two comma-separated fields", line=i)
            try:
                ts.append(float(parts[0]))
                vs.append(float(parts[1]))
            except ValueError as exc:
                raise ParseError(str(exc), line=i) from exc
        return ChartSeries(tuple(ts), tuple(vs), meta or str(path))


def fake_chart_value(t: float, component: int | None = None) -> float:
    """Deterministic volatility chart value at t hours (t >= 1).

    Two log-periodic terms riding the super and ultra category curves:
        0.4 (1 - sin(t)/3)   cos(2 pi ln t) g(t, 1)
      + 0.5 (1 - sin(t/5)/3) sin(2 pi ln t) g(t + 12, 3)
    component=1 or 2 picks a single term.
    """
    if t < 1.0:
        raise DomainError(f"fake chart defined for t >= 1h, got {t}")
    logt = math.log(t)
    first = 0.4 * (1.0 - math.sin(t) / 3.0) * math.cos(2.0 * math.pi * logt) * g(t, 1)
    second = (
        0.5 * (1.0 - math.sin(t / 5.0) / 3.0) * math.sin(2.0 * math.pi * logt) * g(t + 12.0, 3)
    )
    if component is None:
        return first + second
    if component == 1:
        return first
    if component == 2:
        return second
    raise DomainError(f"component must be 1 or 2, got {component}")


def fake_chart(grid: Iterable[float], component: int | None = None) -> ChartSeries:
    """Evaluate the fake chart on a grid within [1h, 150h]."""
    ts = tuple(float(t) for t in grid)
    if not ts:
        raise DomainError("fake chart needs a non-empty grid")
    if min(ts) < 1.0 or max(ts) > 150.0:
        raise DomainError("fake chart grid must lie within [1h, 150h]")
    label = "fake-chart" if component is None else f"fake-chart-g{component}"
    return ChartSeries(ts, tuple(fake_chart_value(t, component) for t in ts), label)


def hourly_grid(start: float = 1.0, stop: float = 150.0) -> list[float]:
    return [float(t) for t in range(int(start), int(stop) + 1)]


def _envelope_peaks(values: np.ndarray) -> list[int]:
    """Indices of interior local maxima of |values| (upper envelope)."""
    mags = np.abs(values)
    peaks = []
    for i in range(1, len(mags) - 1):
        if mags[i] >= mags[i - 1] and mags[i] >= mags[i + 1] and (
            mags[i] > mags[i - 1] or mags[i] > mags[i + 1]
        ):
            peaks.append(i)
    return peaks


def _sign_changes(values: np.ndarray) -> int:
    signs = np.sign(values)
    signs = signs[signs != 0]
    if len(signs) < 2:
        return 0
    return int(np.sum(signs[1:] != signs[:-1]))


def estimate_exponent(chart: ChartSeries) -> float:
    """Least-squares slope of log(envelope amplitude) against log(t).

    Oscillating charts are reduced to their local |value| maxima first;
    a chart without sign oscillation is fitted on all samples.
    """
    if len(chart) < 30:
        raise InsufficientDataError(f"need >= 30 samples, got {len(chart)}")
    ts = np.asarray(chart.times, dtype=float)
    vs = np.asarray(chart.values, dtype=float)
    if ts[0] <= 0 or ts[-1] <= ts[0]:
        raise InsufficientDataError("need positive times spanning a positive range")
    peaks = _envelope_peaks(vs)
    if len(peaks) >= 3:
        fit_t, fit_v = ts[peaks], np.abs(vs[peaks])
    elif _sign_changes(vs) < 3:
        fit_t, fit_v = ts, np.abs(vs)
    else:
        raise InsufficientDataError(
            f"oscillating chart with only {len(peaks)} envelope extrema (need 3)"
        )
    keep = fit_v > 0
    if keep.sum() < 3:
        raise InsufficientDataError("too few non-zero envelope samples")
    slope, _ = np.polyfit(np.log(fit_t[keep]), np.log(fit_v[keep]), 1)
    return float(slope)


def match_category_exponent(chart: ChartSeries) -> tuple[int, float]:
    """Identify which odd-category curve a log-periodic chart rides.

    The model family is a log-periodic oscillation riding a category
    curve with a slow multiplicative profit-taking wobble:
        {cos, sin}(2 pi ln t) * (1, cos(w t), sin(w t)) * g(t + lag, c).
    The fit scans odd categories, a small anchor-lag grid and a wobble
    frequency grid and returns (category, its curve exponent) of the best
    residual.  Useful for charts built from the category curves
    themselves, where the raw envelope slope does not expose the curve's
    exponent label.
    """
    if len(chart) < 30:
        raise InsufficientDataError(f"need >= 30 samples, got {len(chart)}")
    ts = np.asarray(chart.times, dtype=float)
    vs = np.asarray(chart.values, dtype=float)
    if np.any(ts <= 0):
        raise InsufficientDataError("need positive times")
    phases = 2.0 * math.pi * np.log(ts)
    quads = (np.cos(phases), np.sin(phases))
    best: tuple[float, int] | None = None
    for cat in (1, 3, 5, 7):
        for lag in (0.0, 6.0, 12.0, 18.0, 24.0):
            curve = np.array([g(t + lag, cat) for t in ts])
            for w in (1.0, 0.5, 1.0 / 3.0, 0.2, 0.1):
                mods = (np.ones_like(ts), np.cos(w * ts), np.sin(w * ts))
                basis = np.column_stack([q * m * curve for q in quads for m in mods])
                coef, *_ = np.linalg.lstsq(basis, vs, rcond=None)
                resid = float(np.sum((vs - basis @ coef) ** 2))
                if best is None or resid < best[0]:
                    best = (resid, cat)
    assert best is not None
    return best[1], CATEGORY_EXPONENTS[best[1]]
