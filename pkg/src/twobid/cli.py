"""Command-line entry point.

Exit codes: 0 success, 1 domain/input error, 2 usage error.  Every error
path prints one `error: <kind>: <reason>` line to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime
from pathlib import Path

from .backtest import PeriodResult, ingest_csv, render_report, run
from .charts import ChartSeries, estimate_exponent, fake_chart, hourly_grid, match_category_exponent
from .errors import TwobidError
from .optimize import ParamSpace, optimize
from .signals import SIGNAL_CSV_HEADER, EngineConfig, SignalEngine
from .tables import TABLE_KINDS, render_table

TRADES_CSV_HEADER = "symbol,direction,level,entry_time,exit_time,entry_price,exit_price,return_pct,duration_days"


def _load_config(path: str | None, overrides: dict) -> EngineConfig:
    """Flags beat the config file, the file beats the defaults."""
    raw: dict = {}
    if path:
        for i, line in enumerate(Path(path).read_text().splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise TwobidError(f"config line {i}: expected key=value, got {line!r}")
            key, value = line.split("=", 1)
            raw[key.strip()] = value.strip()
    raw.update({k: v for k, v in overrides.items() if v is not None})
    return EngineConfig.from_dict(raw)


def _write_config(path: Path, config: EngineConfig) -> None:
    lines = [f"{k}={v}" for k, v in config.to_dict().items()]
    path.write_text("\n".join(lines) + "\n")


def _parse_when(text: str) -> datetime:
    try:
        return datetime.fromisoformat(text)
    except ValueError as exc:
        raise TwobidError(f"bad timestamp {text!r}") from exc


def _pick_series(quotes: dict, symbol: str | None):
    if symbol:
        if symbol not in quotes:
            raise TwobidError(f"symbol {symbol!r} not in file (has {sorted(quotes)})")
        return quotes[symbol]
    if len(quotes) != 1:
        raise TwobidError(f"file holds {sorted(quotes)}; pick one with --symbol")
    return next(iter(quotes.values()))


# -- subcommands ---------------------------------------------------------------


def cmd_tables(args) -> int:
    sys.stdout.write(render_table(args.kind, args.format))
    return 0


def cmd_fake_chart(args) -> int:
    series = fake_chart(hourly_grid(args.start, args.stop), args.component)
    series.to_csv(args.out)
    print(f"wrote {len(series)} samples to {args.out}")
    return 0


def cmd_estimate_r(args) -> int:
    series = ChartSeries.from_csv(getattr(args, "in"))
    r = estimate_exponent(series)
    print(f"envelope exponent r = {r:.4f}")
    if args.match_category:
        cat, exp = match_category_exponent(series)
        print(f"matched category {cat} (curve exponent {exp})")
    return 0


def _engine_overrides(args) -> dict:
    return {
        "mode": args.mode,
        "trend": args.trend,
        "categories": args.categories,
        "beta": args.beta,
        "step_hours": args.step_hours,
    }


def cmd_backtest(args) -> int:
    config = _load_config(args.config, _engine_overrides(args))
    if args.show_config:
        for k, v in config.to_dict().items():
            print(f"{k}={v}")
        return 0
    quotes = _pick_series(ingest_csv(args.quotes), args.symbol)
    period = (_parse_when(getattr(args, "from")), _parse_when(args.to))
    trades, metrics = run(config, quotes, period)
    label = f"{period[0]:%Y%m%d}-{period[1]:%Y%m%d}"
    result = PeriodResult(label, quotes.change_pct(*period), metrics, tuple(trades))
    if args.report == "csv":
        print(TRADES_CSV_HEADER)
        for t in trades:
            print(
                f"{t.symbol},{t.direction},{t.level},{t.entry_time},{t.exit_time},"
                f"{t.entry_price!r},{t.exit_price!r},{t.return_pct:.4f},{t.duration_days:.3f}"
            )
    else:
        sys.stdout.write(render_report([result], benchmark=quotes.symbol))
    if args.signals_csv:
        engine = SignalEngine(config, quotes.symbol)
        rows = [s.csv_row() for s in engine.run(quotes.samples)]
        Path(args.signals_csv).write_text(
            SIGNAL_CSV_HEADER + "\n" + "\n".join(rows) + ("\n" if rows else "")
        )
    return 0


def cmd_optimize(args) -> int:
    base = _load_config(args.config, _engine_overrides(args))
    quotes = _pick_series(ingest_csv(args.quotes), args.symbol)
    period = (_parse_when(getattr(args, "from")), _parse_when(args.to))
    band = None
    if args.duration_band:
        lo, hi = args.duration_band.split(":")
        band = (float(lo), float(hi))
    result = optimize(
        ParamSpace(),
        quotes,
        period,
        base_config=base,
        seed=args.seed,
        restarts=args.restarts,
        duration_band=band,
    )
    _write_config(Path(args.out), result.config)
    print(
        f"{quotes.symbol}: education return/position = {result.education_return:.4f}"
        f" over {result.trade_count} trades -> {args.out}"
    )
    if args.results_json:
        payload = {
            "v": 1,
            "symbol": result.symbol,
            "education_return": result.education_return,
            "trade_count": result.trade_count,
            "params": {k: (list(v) if isinstance(v, tuple) else v) for k, v in result.params.items()},
        }
        Path(args.results_json).write_text(json.dumps(payload, indent=2) + "\n")
    return 0


def cmd_pont_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(data_dir=args.data, bot_samples=args.bot_samples)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_pont_play(args) -> int:
    from .pont import FINISHED, GameConfig
    from .service.sessions import SessionManager

    players = args.players
    human_seats = {int(s) for s in args.seats.split(",")} if args.seats else {0}
    bot_seats = {s for s in range(players) if s not in human_seats}
    manager = SessionManager(args.data, bot_samples=args.bot_samples)
    config = GameConfig(
        players=players,
        partnerships=args.partnerships,
        variant=args.variant,
        seed=args.seed,
    )
    session = manager.create(config, bot_seats)
    for seat in sorted(human_seats):
        session.join(seat)
    print(f"session {session.id}: you play seat(s) {sorted(human_seats)} vs bots {sorted(bot_seats)}")
    games_target = args.games
    while True:
        game = session.match.game
        if game.phase == FINISHED and session.match.games_played >= games_target:
            break
        seat = game.turn
        if game.phase == FINISHED:
            seat = min(human_seats)
        if seat not in human_seats:
            print("(waiting on bots...)")  # bots act inside submit; shouldn't happen
            break
        state = session.state(seat)
        view = state["view"]
        print(f"\n== game {session.match.games_played + 1}, phase {view['phase']}, seat {seat} to act")
        print(f"   scores {state['scores']}  hand: {view['hands'].get(str(seat))}")
        if view.get("trick"):
            print(f"   trick so far: {view['trick']}")
        legal = state["legal"]
        for i, act in enumerate(legal):
            print(f"   [{i}] {act}")
        line = sys.stdin.readline()
        if not line:
            print("eof; leaving table")
            return 0
        line = line.strip()
        if line in ("q", "quit"):
            return 0
        try:
            choice = legal[int(line)]
        except (ValueError, IndexError):
            print("pick an action number")
            continue
        try:
            session.submit(seat, choice, state["seq"])
        except TwobidError as exc:
            print(f"rejected: {exc}")
    print(f"\nfinal scores: {session.match.scores}")
    print(f"rewards: {session.match.rewards()}")
    return 0


# -- argument wiring ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twobid",
        description="2-bid tables, news-impact math, backtesting and the pont card game",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tables", help="print a bid table")
    p.add_argument("--kind", choices=TABLE_KINDS, required=True)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("fake-chart", help="write the synthetic volatility chart as CSV")
    p.add_argument("--out", required=True)
    p.add_argument("--component", type=int, choices=(1, 2))
    p.add_argument("--start", type=float, default=1.0)
    p.add_argument("--stop", type=float, default=150.0)
    p.set_defaults(func=cmd_fake_chart)

    p = sub.add_parser("estimate-r", help="estimate the power-law exponent of a chart CSV")
    p.add_argument("--in", required=True)
    p.add_argument("--match-category", action="store_true",
                   help="also report the closest category curve")
    p.set_defaults(func=cmd_estimate_r)

    def engine_flags(p):
        p.add_argument("--config", help="key=value config file")
        p.add_argument("--symbol")
        p.add_argument("--mode", choices=("long-only", "short-only", "long-short"))
        p.add_argument("--trend", choices=("pro", "counter"))
        p.add_argument("--categories", help="comma list, e.g. 1,2,3")
        p.add_argument("--beta", type=float)
        p.add_argument("--step-hours", dest="step_hours", type=float)

    p = sub.add_parser("backtest", help="replay the signal engine over a period")
    p.add_argument("--quotes", required=True)
    p.add_argument("--from", required=True)
    p.add_argument("--to", required=True)
    p.add_argument("--report", choices=("text", "csv"), default="text")
    p.add_argument("--signals-csv", help="also dump the raw signal log")
    p.add_argument("--show-config", action="store_true",
                   help="print the effective config and exit")
    engine_flags(p)
    p.set_defaults(func=cmd_backtest)

    p = sub.add_parser("optimize", help="search opti-parameters on an education period")
    p.add_argument("--quotes", required=True)
    p.add_argument("--from", required=True)
    p.add_argument("--to", required=True)
    p.add_argument("--out", required=True, help="where to write the tuned config")
    p.add_argument("--results-json", help="JSON summary for weights")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=0)
    p.add_argument("--duration-band", help="lo:hi mean-duration constraint in days")
    engine_flags(p)
    p.set_defaults(func=cmd_optimize)

    pont = sub.add_parser("pont", help="pont card game")
    pont_sub = pont.add_subparsers(dest="pont_command", required=True)

    p = pont_sub.add_parser("serve", help="run the session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--data", help="session log directory (or TWOBID_DATA_DIR)")
    p.add_argument("--bot-samples", type=int, default=16)
    p.set_defaults(func=cmd_pont_serve)

    p = pont_sub.add_parser("play", help="play at the terminal against bots")
    p.add_argument("--players", type=int, default=2, choices=(2, 3, 4))
    p.add_argument("--seats", help="comma list of human seats (default 0)")
    p.add_argument("--partnerships", action="store_true")
    p.add_argument("--variant", choices=("full", "basic", "poker"), default="full")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--games", type=int, default=1)
    p.add_argument("--data", help="persist the session log here")
    p.add_argument("--bot-samples", type=int, default=16)
    p.set_defaults(func=cmd_pont_play)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TwobidError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: FileNotFound: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
