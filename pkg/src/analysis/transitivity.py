"""
Transitivity Violations.

Builds the strict-preference digraph (winner -> loser) and returns its
directed 3-cycles. Preferences are derived from settled prices: in each
tick the object that settled higher is preferred, and the majority over
ticks decides each pair.

Usage:
    from src.analysis.transitivity import detect_transitivity_violations
"""

from itertools import combinations
from typing import Dict, Iterable, List, Tuple

import networkx as nx
import pandas as pd

from src.markets.records import KIND_COMPLETE
from src.validation.checks import check_required_columns

Preference = Tuple[str, str, str]
Cycle = Tuple[str, str, str]


def _canonical(cycle: Tuple[str, str, str]) -> Cycle:
    """Rotate so the smallest item comes first (direction kept)."""
    i = cycle.index(min(cycle))
    return cycle[i:] + cycle[:i]


def preference_graph(pairwise_prefs: Iterable[Preference]) -> nx.DiGraph:
    graph = nx.DiGraph()
    for a, b, preferred in pairwise_prefs:
        if preferred not in (a, b):
            raise ValueError(f"preferred item {preferred!r} is not one of ({a!r}, {b!r})")
        if a == b:
            continue
        loser = b if preferred == a else a
        graph.add_edge(preferred, loser)
    return graph


def detect_transitivity_violations(pairwise_prefs: Iterable[Preference]) -> List[Cycle]:
    """
    Every directed 3-cycle of the preference digraph.

    Each cycle is reported once, as (x, y, z) meaning x > y > z > x, with
    the smallest item first. Fewer than 3 items yield no cycles.
    """
    graph = preference_graph(pairwise_prefs)
    cycles = set()
    for u, v in graph.edges:
        for w in graph.successors(v):
            if w != u and graph.has_edge(w, u):
                cycles.add(_canonical((u, v, w)))
    return sorted(cycles)


def preferences_from_trace(records: pd.DataFrame) -> List[Preference]:
    """
    Pairwise preferences from settled prices.

    Per tick, objects are compared by mean settled price; each pair's
    majority over ticks becomes one preference. Ties give no preference.
    """
    check_required_columns(records, ["tick", "object", "kind", "price"])

    settled = records[records["kind"] == KIND_COMPLETE]
    if settled.empty:
        return []

    per_tick = settled.groupby(["tick", "object"])["price"].mean().reset_index()
    votes: Dict[Tuple[str, str], int] = {}
    for _, tick_prices in per_tick.groupby("tick"):
        prices = dict(zip(tick_prices["object"], tick_prices["price"]))
        for a, b in combinations(sorted(prices), 2):
            if prices[a] != prices[b]:
                votes[(a, b)] = votes.get((a, b), 0) + (1 if prices[a] > prices[b] else -1)

    return [
        (a, b, a if score > 0 else b)
        for (a, b), score in sorted(votes.items())
        if score != 0
    ]
