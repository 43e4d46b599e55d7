"""twobid: discretized momentum trading toolkit and the pont card game.

The 2-bid (bid integer, category, depth) is the shared currency: the
trading side turns price moves into ranked 2-bids, trades their
increases against termination curves and optimizes the parameters; the
pont card game plays the same bidding idea with cards and chips.
"""

from .backtest import Metrics, QuoteSeries, TradeRecord, avrg_return, ingest_csv, render_report, run
from .charts import ChartSeries, estimate_exponent, fake_chart, hourly_grid, match_category_exponent
from .errors import (
    DomainError,
    IllegalActionError,
    InsufficientDataError,
    ParseError,
    QuoteOrderError,
    SearchBudgetExceeded,
    TwobidError,
)
from .impact import (
    CharacteristicRoots,
    ImpactParams,
    char_roots,
    logistic_solution,
    modified_profit_path,
    price_path,
    profit_path,
    profit_path_asymptote,
    profit_path_pair,
    tree_growth,
    two_event_price,
)
from .optimize import OptResult, ParamSpace, optimize, weights
from .signals import EngineConfig, PositionBook, Signal, SignalEngine, TerminationCurve, apply_signals
from .special import bessel_j, hyp2f1
from .tables import Category, TwoBid, bid_backward, g, rank, render_table

__version__ = "0.1.0"
