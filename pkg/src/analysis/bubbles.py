"""
Bubble Detection Against Fundamental Value.

A bubble is flagged on a window of W consecutive ticks when both
signatures hold:
    1. Universality of gains: every completed pairwise trade in the
       window posts a buyer gain >= gain_floor (and there is at least one)
    2. Deviation: total settled price >= fold * total fundamental value of
       the traded objects, fundamental values taken at the window start

Fundamental value is the population's kernel-implied consensus value,
mean over agents of A_x * base_value.

Constraints:
    - Pure functions over immutable inputs
    - No logging

Usage:
    from src.analysis.bubbles import detect_bubble, fundamental_value
"""

from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.kernel.geometry import classify
from src.markets.records import KIND_COMPLETE, MARKET_MINIMAL
from src.valuation.gates import Evaluator, Valued
from src.validation.checks import check_required_columns

DEFAULT_WINDOW = 5
DEFAULT_GAIN_FLOOR = 0.0
DEFAULT_BUBBLE_FOLD = 1.5


# =============================================================================
# DOMAIN TYPES
# =============================================================================

@dataclass(frozen=True)
class BubbleReport:
    """Outcome of a bubble scan."""
    flagged: bool
    onset_tick: Optional[int] = None
    window: int = DEFAULT_WINDOW
    participants: Tuple[int, ...] = ()
    n_trades: int = 0
    mean_price: float = 0.0
    mean_fundamental: float = 0.0

    def to_dict(self) -> Dict[str, object]:
        return {
            "flagged": self.flagged,
            "onset_tick": self.onset_tick,
            "window": self.window,
            "participants": list(self.participants),
            "n_trades": self.n_trades,
            "mean_price": self.mean_price,
            "mean_fundamental": self.mean_fundamental,
        }


# =============================================================================
# FUNDAMENTAL VALUE
# =============================================================================

def fundamental_value(item: Valued, population: Sequence[Evaluator]) -> float:
    """
    Mean over agents of A_x(item) * base_value.

    Raises:
        ValueError: If the population is empty.
    """
    if not population:
        raise ValueError("fundamental value needs a non-empty population")
    scores = [classify(agent.kernel, item.stimulus) for agent in population]
    return float(np.mean(scores)) * item.base_value


def _fundamental_at(fundamentals: pd.DataFrame, obj: str, tick: int) -> Optional[float]:
    rows = fundamentals[(fundamentals["object"] == obj) & (fundamentals["tick"] <= tick)]
    if rows.empty:
        return None
    return float(rows.sort_values("tick").iloc[-1]["fundamental_value"])


# =============================================================================
# PUBLIC API
# =============================================================================

def detect_bubble(
    records: pd.DataFrame,
    fundamentals: pd.DataFrame,
    window: int = DEFAULT_WINDOW,
    gain_floor: float = DEFAULT_GAIN_FLOOR,
    fold: float = DEFAULT_BUBBLE_FOLD,
) -> BubbleReport:
    """
    Scan a trace for the earliest bubble window.

    Candidate windows start at each tick holding a completed pairwise
    trade and span `window` ticks. Windows with an object lacking a
    fundamental value at or before the window start are skipped.

    Args:
        records: Trace records (tick, market, kind, object, price, buyer,
            seller, gain_buyer_pct), ordered by tick.
        fundamentals: Snapshot table (tick, object, fundamental_value).
        window: Window length W in ticks.
        gain_floor: Minimum buyer gain (percent) of every trade.
        fold: Required ratio of total price to total fundamental value.

    Returns:
        BubbleReport for the earliest flagged window, or an unflagged report.
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    check_required_columns(
        records, ["tick", "market", "kind", "object", "price", "buyer", "seller", "gain_buyer_pct"]
    )
    check_required_columns(fundamentals, ["tick", "object", "fundamental_value"])

    trades = records[
        (records["market"] == MARKET_MINIMAL) & (records["kind"] == KIND_COMPLETE)
    ]
    if trades.empty or fundamentals.empty:
        return BubbleReport(flagged=False, window=window)

    for start in sorted(trades["tick"].unique()):
        start = int(start)
        in_window = trades[(trades["tick"] >= start) & (trades["tick"] < start + window)]
        if (in_window["gain_buyer_pct"] < gain_floor).any():
            continue

        baseline = [_fundamental_at(fundamentals, obj, start) for obj in in_window["object"]]
        if any(value is None for value in baseline):
            continue

        total_price = float(in_window["price"].sum())
        total_fundamental = float(sum(baseline))
        if total_price > 0 and total_price >= fold * total_fundamental:
            participants = sorted(set(in_window["buyer"]) | set(in_window["seller"]))
            return BubbleReport(
                flagged=True,
                onset_tick=start,
                window=window,
                participants=tuple(int(p) for p in participants),
                n_trades=len(in_window),
                mean_price=total_price / len(in_window),
                mean_fundamental=total_fundamental / len(in_window),
            )

    return BubbleReport(flagged=False, window=window)
