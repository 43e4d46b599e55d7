"""Acceptance suite: one test per criterion, each printing a PASS line
with its measured numbers once its assertions hold."""

import math
import random
import time
from datetime import datetime, timedelta

import numpy as np
import pytest

from oracles import d1, d2, derangements, exhaustive_misere_defeated, relative_residual
from twobid.backtest import QuoteSeries, avrg_return, run
from twobid.charts import ChartSeries, estimate_exponent, fake_chart, hourly_grid
from twobid.impact import (
    char_roots,
    logistic_solution,
    modified_profit_path,
    price_path,
    profit_path,
    profit_path_pair,
    tree_growth,
    two_event_price,
)
from twobid.optimize import ParamSpace, optimize
from twobid.pont import GameConfig, PontMatch, misere_defeated, min_tricks, rewards
from twobid.pont.bids import MISERE, PontBid
from twobid.pont.cards import SMALL_DECK
from twobid.signals import EngineConfig, PositionBook, SignalEngine, apply_signals
from twobid.special import _bessel_asymptotic, _bessel_series, bessel_crossover, bessel_j
from twobid.tables import table_data

T0 = datetime(2024, 1, 1, 9, 30)


def announce(name, detail=""):
    print(f"ACCEPTANCE PASS: {name}" + (f"  [{detail}]" if detail else ""))


# -- criterion: table reproduction -------------------------------------------------

SUPER = {1: [1, 1.5, 3, 6.5, 11, 15], 2: [2, 3, 6, 13, 22, 30],
         3: [3, 4.5, 9, 19.5, 33, 45], 4: [4, 6, 12, 26, 44, 60]}
ULTRA = {1: [2, 3, 5, 8, 13, 20], 2: [4, 6, 10, 16, 26, 40],
         3: [6, 9, 15, 24, 39, 60], 4: [8, 12, 20, 32, 52, 80],
         5: [10, 15, 25, 40, 65, 100], 6: [12, 18, 30, 48, 78, 120]}
EXTRA = {1: [3.5, 5.5, 8.5, 15.5, 28], 2: [7, 11, 17, 31, 56],
         3: [10.5, 16.5, 25.5, 46.5, 84], 4: [14, 22, 34, 62, 112],
         5: [17.5, 27.5, 42.5, 77.5, 140]}
REGULAR = {1: [7, 10.5, 17.5, 44.45], 2: [14, 21, 35, 88.9],
           3: [21, 31.5, 52.5, 133.35], 4: [28, 42, 70, 177.8]}
MIN7 = {
    1: [1.0, 1.49, 2.27, 3.0, 4.31, 5.92, 6.49, 8.44, 10.99, 13.57, 15.01, 16.16],
    2: [None, 1.28, 1.87, 2.5, 3.65, 5.16, 5.74, 7.62, 10.29, 13.28, 15.1, 16.57],
    3: [None, None, None, 2.0, 3.0, 4.4, 5.0, 6.8, 9.6, 13.0, 15.2, 17.0],
    4: [None, None, None, None, 2.54, 3.71, 4.25, 6.15, 9.05, 12.85, 15.35, 17.5],
    5: [None, None, None, None, None, None, 3.5, 5.5, 8.5, 12.7, 15.5, 18.0],
    6: [None, None, None, None, None, None, None, 4.97, 7.75, 11.6, 14.75, 17.75],
    7: [None, None, None, None, None, None, None, None, 7.0, 10.5, 14.0, 17.5],
}


def test_acceptance_table_reproduction():
    start = time.monotonic()
    checked = 0
    for kind, printed, tol in (
        ("super", SUPER, 0.05),
        ("ultra", ULTRA, 0.05),
        ("extra", EXTRA, 0.05),
        ("regular", REGULAR, 0.05),  # 12m column vs the computed 44.45 base
    ):
        header, rows = table_data(kind)
        for row in rows:
            b = int(row[0])
            if b not in printed:
                continue
            for value, expect in zip(row[1:], printed[b]):
                assert abs(float(value) - expect) <= tol, (kind, b, value, expect)
                checked += 1
    assert checked == 24 + 36 + 25 + 16
    header, rows = table_data("min-7cat")
    assert header[3] == "3h"  # printed label; values sit at t=4h
    for row in rows:
        cat = int(row[0])
        for value, expect in zip(row[1:], MIN7[cat]):
            if expect is None:
                assert value == "---"
            else:
                assert abs(float(value) - expect) <= 0.02, (cat, value, expect)
                checked += 1
    elapsed = time.monotonic() - start
    assert elapsed < 1.0
    announce("table reproduction", f"{checked} cells, {elapsed:.2f}s")


# -- criterion: AVRG RETURN fixture ---------------------------------------------------

def test_acceptance_avrg_return_fixture():
    long_only = [(18, 0.72, 3.0), (13, 0.45, 5.2), (23, 0.56, 2.2), (12, 0.59, 2.2), (17, 0.10, 2.4)]
    short_only = [(33, 0.02, 3.7), (46, 0.50, 2.7), (66, 0.04, 2.9), (42, 0.05, 4.4), (68, 0.00, 2.5)]
    lo = avrg_return(long_only)
    so = avrg_return(short_only)
    assert lo == pytest.approx(14.9, abs=0.05)
    assert so == pytest.approx(3.15, abs=0.05)
    announce("AVRG RETURN fixture", f"long={lo:.3f}, short={so:.3f}")


# -- criterion: special-function suite --------------------------------------------------

def test_acceptance_special_functions():
    start = time.monotonic()

    # price/upgrade system: t^2 p'' + (1+b-c) t p' + a p = 0 on [0.5, 50]
    a, b, c = 0.02, 0.1, 0.7
    roots = char_roots(a, b, c)
    f = lambda t: price_path(roots, 0.8, 0.5, t)
    worst_price = max(
        relative_residual([t * t * d2(f, t, 1e-2 * t), (1 + b - c) * t * d1(f, t, 1e-2 * t), a * f(t)])
        for t in np.linspace(0.5, 50.0, 41)
    )
    assert worst_price < 1e-6

    # logistic variant with a=0: u' = (1-u)(r u - beta)/t on [0.1, 100]
    c2, b2, beta, B = 0.9, 0.35, 0.2, 1.3
    r = c2 - b2
    fu = lambda t: logistic_solution(c2, b2, beta, B, 1.0, t)[0]
    worst_logistic = max(
        relative_residual(
            [d1(fu, t, 1e-3 * max(t, 0.2)), -(1 - fu(t)) * (r * fu(t) - beta) / t]
        )
        for t in np.linspace(0.1, 100.0, 57)
    )
    assert worst_logistic < 1e-6

    # profit-taking: t^2 p'' - c t p' + e t^2 p = 0 on [1, 60]
    cp, e = 0.7, 0.01
    fp = lambda t: profit_path(cp, e, 0.9, 0.4, t)
    worst_profit = max(
        relative_residual(
            [t * t * d2(fp, t, 0.008 * t ** (2 / 3)), -cp * t * d1(fp, t, 0.008 * t ** (2 / 3)),
             e * t * t * fp(t)]
        )
        for t in np.linspace(1.0, 60.0, 60)
    )
    assert worst_profit < 1e-8

    # modified pair: t^2 p'' + (1-c) t p' + e t^nu p = 0 on [1, 60]
    cm, em, nu = 0.55, 0.09, 0.6
    fm = lambda t: modified_profit_path(cm, em, nu, t)[0]
    worst_modified = max(
        relative_residual(
            [t * t * d2(fm, t, 0.008 * t ** (2 / 3)), (1 - cm) * t * d1(fm, t, 0.008 * t ** (2 / 3)),
             em * t**nu * fm(t)]
        )
        for t in np.linspace(1.0, 60.0, 60)
    )
    assert worst_modified < 1e-7

    # two-event hypergeometric ODE on (0, 0.9 tau)
    a3, c0, ct, tau = 0.05, 0.3, 0.3, 2.0
    c3 = c0 + ct
    ftwo = lambda t: two_event_price(a3, c0, ct, tau, t).p
    worst_two = max(
        relative_residual(
            [t * (t + tau) * d2(ftwo, t, 5e-4 * tau),
             ((1 - c3) * t + (1 - c0) * tau) * d1(ftwo, t, 5e-4 * tau),
             a3 * ftwo(t)]
        )
        for t in np.linspace(0.05 * tau, 0.85 * tau, 33)
    )
    assert worst_two < 1e-6

    # Bessel series vs asymptotic branch at the crossover, alpha in [0, 3]
    worst_cross = 0.0
    for alpha in np.linspace(0.0, 3.0, 13):
        xc = bessel_crossover(alpha)
        s, asym = _bessel_series(alpha, xc), _bessel_asymptotic(alpha, xc)
        worst_cross = max(worst_cross, abs(s - asym) / abs(s))
    assert worst_cross < 0.01

    # half-integer closed form
    assert bessel_j(0.5, math.pi / 2) == pytest.approx(2 / math.pi, abs=1e-10)

    # profit-path peak spacing 2 pi / sqrt(e) within 2% for t sqrt(e) > 40
    cpk, epk = 0.6, 1.0
    ts = np.arange(42.0, 92.0, 1e-3)
    vals = np.array([profit_path_pair(cpk, epk, t)[0] for t in ts])
    peaks = [ts[i] for i in range(1, len(ts) - 1) if vals[i] >= vals[i - 1] and vals[i] >= vals[i + 1]]
    gaps = np.diff(peaks)
    expect = 2 * math.pi / math.sqrt(epk)
    assert np.all(np.abs(gaps - expect) / expect < 0.02)

    elapsed = time.monotonic() - start
    assert elapsed < 10.0
    announce(
        "special-function suite",
        f"residuals {worst_price:.1e}/{worst_logistic:.1e}/{worst_profit:.1e}"
        f"/{worst_modified:.1e}/{worst_two:.1e}, crossover {worst_cross:.1e}, {elapsed:.1f}s",
    )


# -- criterion: tree growth ------------------------------------------------------------

def test_acceptance_tree_growth():
    linear = tree_growth(1.0, 0.0, 1.0, 2.0, 12)
    assert linear == [float(n) for n in range(3, 13)]  # exact
    seq = [0.0, 1.0] + tree_growth(1.0, 0.0, 0.0, 1.0, 20)
    for n in range(1, 13):
        assert seq[n - 1] == pytest.approx(derangements(n) / math.factorial(n - 1), abs=1e-12)
    ratio = seq[19] / 20
    assert abs(ratio - 1 / math.e) / (1 / math.e) < 0.015
    announce("tree growth", f"f1_20/20 = {ratio:.6f} vs 1/e = {1/math.e:.6f}")


# -- criterion: exponent recovery ---------------------------------------------------------

def test_acceptance_exponent_recovery():
    ts = tuple(np.linspace(1.0, 150.0, 300))
    errors = []
    for r in (0.137, 0.3, 0.418):
        pure = ChartSeries(ts, tuple(2.0 * t**r for t in ts))
        got = estimate_exponent(pure)
        assert got == pytest.approx(r, abs=0.01)
        errors.append(abs(got - r))
    hour = tuple(float(t) for t in range(1, 151))
    for r in (0.137, 0.3, 0.418):
        vals = tuple(1.7 * t**r * math.sin(2 * math.pi * math.log(t) + 0.4) for t in hour)
        got = estimate_exponent(ChartSeries(hour, vals))
        assert got == pytest.approx(r, abs=0.05)
        errors.append(abs(got - r))
    announce("exponent recovery", f"max error {max(errors):.4f}")


# -- criterion: fake-chart trading ------------------------------------------------------------

def test_acceptance_fake_chart_trading():
    start = time.monotonic()
    chart = fake_chart(hourly_grid())
    assert len(chart) == 150
    quotes = QuoteSeries(
        "FAKE",
        tuple((T0 + timedelta(hours=i), 100.0 + v) for i, v in enumerate(chart.values)),
    )
    period = (quotes.samples[0][0], quotes.samples[-1][0])
    base = EngineConfig(step_hours=1.0)
    default_ret = run(base, quotes, period)[1].ret
    result = optimize(ParamSpace(), quotes, period, base_config=base, seed=0)
    elapsed = time.monotonic() - start
    assert result.education_return > 0
    assert result.education_return > default_ret
    assert elapsed < 120.0
    announce(
        "fake-chart trading",
        f"optimized {result.education_return:.3f} vs default {default_ret:.3f}, "
        f"{result.trade_count} trades, {elapsed:.1f}s",
    )


# -- criterion: engine invariants ------------------------------------------------------------

def _walk(seed, n=240):
    rng = random.Random(seed)
    prices = [100.0]
    for _ in range(n - 1):
        prices.append(max(prices[-1] * (1 + rng.gauss(0, 0.01)), 1.0))
    return prices


def _run_stream(config, prices):
    engine = SignalEngine(config, "W")
    out = []
    for i, p in enumerate(prices):
        out.extend(engine.step(i, p))
    return out


def test_acceptance_engine_invariants():
    flip = {"buy": "sell", "sell": "buy"}
    pro_cfg = EngineConfig(categories=(1, 2, 3), trend="pro")
    counter_cfg = EngineConfig(categories=(1, 2, 3), trend="counter")
    total_signals = 0
    for seed in range(50):
        prices = _walk(seed)
        pro = _run_stream(pro_cfg, prices)
        counter = _run_stream(counter_cfg, prices)
        again = _run_stream(pro_cfg, prices)

        # byte-identical determinism
        assert "\n".join(s.csv_row() for s in pro) == "\n".join(s.csv_row() for s in again)
        # direction-flip symmetry
        assert len(pro) == len(counter)
        for a, b in zip(pro, counter):
            assert flip[a.direction] == b.direction
            assert (a.level, a.kind, a.step) == (b.level, b.kind, b.step)
        # gapless level sequences
        counts = {"buy": 0, "sell": 0}
        for s in pro:
            other = flip[s.direction]
            assert s.level == counts[s.direction] + 1
            counts[s.direction] = s.level
            counts[other] = 0
        # close-all on opposite signal
        book = PositionBook(symbol="W")
        for s in pro:
            apply_signals(book, [s], pro_cfg)
            if book.direction is not None:
                assert all(p.direction == book.direction for p in book.positions.values())
                assert book.open_count() <= 4
        total_signals += len(pro)
    assert total_signals > 0
    announce("engine invariants", f"50 series, {total_signals} signals")


# -- criterion: pont rules ------------------------------------------------------------------

BID_TABLE = {
    "3/6": [3, 4, 4, 5], "4/7": [4, 4, 5, 6], "5/8": [4, 5, 5, 6],
    "4/6": [4, 5, 6, 6], "5/7": [5, 5, 6, 7], "6/8": [5, 6, 6, 7],
    "5/6": [5, 6, 7, 8], "6/7": [6, 6, 7, 8], "7/8": [6, 7, 7, 8],
    "6/6": [6, 7, 8, 9],
}


def test_acceptance_pont_rules():
    start = time.monotonic()
    cells = 0
    for bid, expects in BID_TABLE.items():
        for cards, expect in zip(range(6, 10), expects):
            assert min_tricks(PontBid.parse(bid), cards) == expect
            cells += 1
    # the misere row: its 6-card cell is the zero-trick play itself
    for cards, expect in ((7, 6), (8, 7), (9, 8)):
        assert min_tricks(MISERE, cards) == expect
        cells += 1
    from twobid.errors import DomainError

    try:
        min_tricks(MISERE, 6)
        raise AssertionError("misere at six cards has no trick minimum")
    except DomainError:
        cells += 1
    assert cells == 44

    # downplay example: 2 players, tricks (4, 2) -> deltas (-1, 0)
    from twobid.pont import downplay_score

    assert downplay_score({0: 4, 1: 2}, two_sided=True) == {0: -1.0, 1: 0.0}

    # 10,000 seeded self-play games across variants and player counts
    configs = [
        (2, False, "full"), (3, False, "full"), (4, False, "full"), (4, True, "full"),
        (2, False, "basic"), (3, False, "basic"), (4, False, "basic"),
        (2, False, "poker"), (3, False, "poker"), (4, False, "poker"),
    ]
    games = 0
    for players, teams, variant in configs:
        for seed in range(10):
            config = GameConfig(players=players, partnerships=teams, variant=variant, seed=seed)
            match = PontMatch(config, bot_seats=set(range(players)), bot_samples=4)
            for _ in range(100):
                game = match.game
                assert game.phase == "finished", (players, variant, seed)
                inner = game.game if variant == "poker" else game
                assert inner.check_conservation(), "card conservation violated"
                if variant == "poker":
                    assert sum(match.scores.values()) + match.pot == pytest.approx(0.0)
                else:
                    got = rewards(dict(match.scores), partnerships=teams)
                    assert sum(got.values()) == pytest.approx(0.0, abs=1e-9)
                games += 1
                match.next_game()
    assert games == 10_000
    elapsed = time.monotonic() - start
    announce("pont rules", f"44 table cells, {games} games, {elapsed:.0f}s")


# -- criterion: misere solver -----------------------------------------------------------------

def test_acceptance_misere_solver():
    from twobid.pont.cards import card_from_str as C

    curated = [
        # (hands, declarer, leader, expected)
        ({0: (C("6S"),), 1: (C("7S"),), 2: (C("8S"),)}, 0, 1, False),
        ({0: (C("AS"),), 1: (C("6S"),), 2: (C("6H"),)}, 0, 1, True),
        ({0: (C("AS"), C("6H")), 1: (C("KS"), C("7H"))}, 0, 1, True),
        ({0: (C("6S"), C("6H")), 1: (C("7S"), C("AH")), 2: (C("8S"), C("KH"))}, 0, 0, False),
        (
            {0: (C("AS"), C("6H"), C("7H")), 1: (C("7S"), C("8H"), C("9H")),
             2: (C("8S"), C("TH"), C("JH"))},
            0, 1, True,
        ),
    ]
    for hands, declarer, leader, expect in curated:
        order = tuple(sorted(hands))
        got = misere_defeated(hands, order, declarer, leader)
        brute = exhaustive_misere_defeated(hands, order, declarer, leader)
        assert got == brute == expect

    checked = 0
    for players in (2, 3):
        for cards in (2, 3, 4):
            rng = random.Random(players * 31 + cards)
            for trial in range(30):
                deck = list(SMALL_DECK)
                rng.shuffle(deck)
                hands = {
                    s: tuple(sorted(deck[cards * s : cards * (s + 1)]))
                    for s in range(players)
                }
                order = tuple(range(players))
                declarer, leader = trial % players, (trial + 1) % players
                fast = misere_defeated(hands, order, declarer, leader)
                slow = exhaustive_misere_defeated(hands, order, declarer, leader)
                assert fast == slow
                checked += 1
    announce("misere solver", f"{len(curated)} curated + {checked} random endgames")
