import random

import pytest

from twobid.errors import DomainError, QuoteOrderError
from twobid.signals import (
    KIND_BID,
    KIND_CURVE,
    KIND_START,
    EngineConfig,
    PositionBook,
    SignalEngine,
    TerminationCurve,
    apply_signals,
    force_close,
    termination_value,
)
from twobid.tables import TwoBid, g


def cfg(**kw):
    base = dict(
        categories=(3,),
        beta=1.0,
        decel_threshold=0.05,
        accel_threshold=0.05,
        kappa=0.5,
        curve_shift=0.5,
    )
    base.update(kw)
    return EngineConfig(**base)


def run_engine(config, prices):
    engine = SignalEngine(config, "TEST")
    out = []
    for i, p in enumerate(prices):
        out.extend(engine.step(i, p))
    return out


RAMP_PLATEAU = [100.0 + i for i in range(10)] + [109.0] * 6


class TestStep:
    def test_constant_prices_no_signals(self):
        assert run_engine(cfg(), [100.0] * 40) == []

    def test_ramp_then_plateau_single_buy(self):
        # 3 quotes/day ramp of 1 per step (3%/day), then flat: exactly one
        # buy at the first deceleration, level 1
        signals = run_engine(cfg(), RAMP_PLATEAU)
        assert len(signals) == 1
        sig = signals[0]
        assert (sig.direction, sig.level, sig.kind) == ("buy", 1, KIND_BID)
        assert sig.step == 10
        assert (sig.source.b, sig.source.c, sig.source.m) == (2, 3, 3)

    def test_two_increases_then_curve_cross(self):
        prices = (
            [100.0 + i for i in range(10)]
            + [109.0]            # decel -> buy level 1
            + [112.0, 115.0, 118.0]
            + [118.0]            # decel -> higher top bid, buy level 2
            + [116.0, 114.0, 112.0, 110.0]
        )
        config = cfg(accel_threshold=5.0)  # keep start bids quiet
        signals = run_engine(config, prices)
        assert [(s.direction, s.level, s.kind) for s in signals] == [
            ("buy", 1, KIND_BID),
            ("buy", 2, KIND_BID),
            ("sell", 1, KIND_CURVE),
        ]
        book = PositionBook(symbol="TEST")
        _, trades = apply_signals(book, signals, config)
        assert len(trades) == 2
        assert trades[0].exit_price == trades[1].exit_price
        assert book.open_count() == 0

    def test_start_bid_fires_on_acceleration(self):
        prices = (
            [100.0 + i for i in range(10)]
            + [109.0, 112.0, 115.0, 118.0, 118.0]
        )
        signals = run_engine(cfg(), prices)
        kinds = [s.kind for s in signals]
        assert KIND_START in kinds

    def test_out_of_order_quote(self):
        engine = SignalEngine(cfg(), "TEST")
        engine.step(5, 100.0)
        with pytest.raises(QuoteOrderError):
            engine.step(4, 101.0)

    def test_bad_price(self):
        engine = SignalEngine(cfg(), "TEST")
        with pytest.raises(DomainError):
            engine.step(0, 0.0)

    def test_no_signal_from_inadmissible_bid(self):
        signals = run_engine(cfg(), [100.0, 100.2, 100.3, 100.3, 100.3, 100.3])
        assert signals == []


class TestTerminationCurve:
    def curve(self, direction="long"):
        return TerminationCurve(
            bid=TwoBid(2, 3, 1), t0=6.5, p0=100.0, direction=direction,
            kappa=0.5, shift=0.5,
        )

    def test_anchor_value_uses_linear_limit(self):
        # g(0+) limit is g(prime)/3
        curve = self.curve()
        expect = 100.0 * (1 + (0.5 * 2 * g(6.5, 3) / 3 - 0.5) / 100)
        assert termination_value(curve, 6.5) == pytest.approx(expect)

    def test_monotone_for_long(self):
        curve = self.curve()
        ts = [6.5 + k for k in range(0, 120, 7)]
        values = [termination_value(curve, t) for t in ts]
        assert all(a <= b + 1e-12 for a, b in zip(values, values[1:]))

    def test_short_mirrors_long(self):
        long_v = termination_value(self.curve("long"), 20.0)
        short_v = termination_value(self.curve("short"), 20.0)
        assert long_v - 100.0 == pytest.approx(100.0 - short_v)

    def test_domain(self):
        with pytest.raises(DomainError):
            termination_value(self.curve(), 6.0)

    def test_crossing_emits_exactly_one_close(self):
        prices = RAMP_PLATEAU + [109.0] * 80  # long stall: curve overtakes
        signals = run_engine(cfg(), prices)
        curve_sells = [s for s in signals if s.kind == KIND_CURVE]
        assert len(curve_sells) == 1
        assert curve_sells[0].direction == "sell"


class TestApplySignals:
    def make(self, direction, level, kind, step, price):
        from twobid.signals import Signal

        return Signal("TEST", direction, level, kind, step, price, step)

    def test_close_all_on_opposite(self):
        config = cfg()
        book = PositionBook(symbol="TEST")
        signals = [
            self.make("buy", 1, KIND_BID, 0, 100.0),
            self.make("buy", 2, KIND_BID, 5, 102.0),
            self.make("sell", 1, KIND_BID, 9, 104.0),
        ]
        _, trades = apply_signals(book, signals, config)
        assert len(trades) == 2
        assert all(t.exit_price == 104.0 for t in trades)
        # the open-kind sell then opens a short
        assert book.direction == "sell"
        assert book.open_count() == 1

    def test_short_only_drops_buy_openings_but_closes(self):
        config = cfg(mode="short-only")
        book = PositionBook(symbol="TEST")
        _, trades = apply_signals(
            book,
            [
                self.make("sell", 1, KIND_BID, 0, 100.0),
                self.make("buy", 1, KIND_BID, 4, 98.0),
            ],
            config,
        )
        assert len(trades) == 1
        assert trades[0].direction == "sell"
        assert trades[0].return_pct == pytest.approx(2.0)
        assert book.open_count() == 0  # the buy closed but did not open

    def test_level_cap_at_four(self):
        config = cfg()
        book = PositionBook(symbol="TEST")
        signals = [self.make("buy", lev, KIND_BID, lev, 100.0) for lev in range(1, 6)]
        apply_signals(book, signals, config)
        assert book.open_count() == 4
        assert len(book.skipped) == 1

    def test_curve_close_never_opens(self):
        config = cfg()
        book = PositionBook(symbol="TEST")
        apply_signals(book, [self.make("sell", 1, KIND_CURVE, 3, 100.0)], config)
        assert book.open_count() == 0

    def test_force_close(self):
        config = cfg()
        book = PositionBook(symbol="TEST")
        apply_signals(book, [self.make("buy", 1, KIND_BID, 0, 100.0)], config)
        trades = force_close(book, 10, 105.0, 10, config)
        assert len(trades) == 1
        assert trades[0].return_pct == pytest.approx(5.0)
        assert trades[0].duration_days == pytest.approx(10 * config.step_hours / 6.5)


def random_walk(seed, n=240, start=100.0):
    rng = random.Random(seed)
    prices = [start]
    for _ in range(n - 1):
        prices.append(max(prices[-1] * (1 + rng.gauss(0, 0.01)), 1.0))
    return prices


class TestStreamInvariants:
    def test_counter_trend_is_direction_flip(self):
        flip = {"buy": "sell", "sell": "buy"}
        for seed in range(8):
            prices = random_walk(seed)
            pro = run_engine(cfg(trend="pro", categories=(1, 2, 3)), prices)
            counter = run_engine(cfg(trend="counter", categories=(1, 2, 3)), prices)
            assert len(pro) == len(counter)
            for a, b in zip(pro, counter):
                assert flip[a.direction] == b.direction
                assert (a.level, a.kind, a.step, a.price) == (b.level, b.kind, b.step, b.price)

    def test_determinism(self):
        for seed in (3, 11):
            prices = random_walk(seed)
            a = run_engine(cfg(categories=(1, 2, 3)), prices)
            b = run_engine(cfg(categories=(1, 2, 3)), prices)
            assert [repr(s) for s in a] == [repr(s) for s in b]

    def test_level_sequences_gapless(self):
        for seed in range(8):
            signals = run_engine(cfg(categories=(1, 2, 3)), random_walk(seed))
            counts = {"buy": 0, "sell": 0}
            for s in signals:
                other = "sell" if s.direction == "buy" else "buy"
                assert s.level == counts[s.direction] + 1
                counts[s.direction] = s.level
                counts[other] = 0

    def test_no_position_survives_opposite_signal(self):
        config = cfg(categories=(1, 2, 3))
        for seed in range(8):
            signals = run_engine(config, random_walk(seed))
            book = PositionBook(symbol="TEST")
            for sig in signals:
                apply_signals(book, [sig], config)
                if book.direction is not None:
                    assert all(
                        p.direction == book.direction for p in book.positions.values()
                    )
                    assert book.open_count() <= 4
