"""
Value Fluctuation of Linked Propositions.

Compares the value of a full ensemble with the values of its subsets:

    max_ratio = max(full / sum(singletons), sum(singletons) / full)

A report is flagged when max_ratio reaches the fold threshold or when
any transitivity cycle was found among the ensemble's items.

Usage:
    from src.analysis.fluctuation import detect_fluctuation, fluctuation_reports
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Sequence, Tuple

import pandas as pd

from src.markets.records import KIND_COMPLETE, MARKET_MINIMAL

DEFAULT_FOLD_THRESHOLD = 2.0

Subset = Tuple[str, ...]


@dataclass(frozen=True)
class FluctuationReport:
    ensemble_id: str
    full_set_value: float
    subset_values: Dict[Subset, float]
    max_ratio: float
    transitivity_cycles: Tuple[Tuple[str, str, str], ...] = field(default_factory=tuple)
    flagged: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ensemble_id": self.ensemble_id,
            "full_set_value": self.full_set_value,
            "subset_values": {"-".join(k): v for k, v in sorted(self.subset_values.items())},
            "max_ratio": self.max_ratio,
            "transitivity_cycles": [list(c) for c in self.transitivity_cycles],
            "flagged": self.flagged,
        }


def detect_fluctuation(
    full_value: float,
    subset_values: Mapping[Subset, float],
    fold_threshold: float = DEFAULT_FOLD_THRESHOLD,
    ensemble_id: str = "",
    cycles: Sequence[Tuple[str, str, str]] = (),
) -> FluctuationReport:
    """
    Raises:
        ValueError: On an empty subset map, no singleton subsets, or
            non-positive values.
    """
    if not subset_values:
        raise ValueError("subset_values must not be empty")
    if full_value <= 0 or any(v <= 0 for v in subset_values.values()):
        raise ValueError("fluctuation values must be positive")
    singleton_sum = sum(v for k, v in subset_values.items() if len(k) == 1)
    if singleton_sum == 0:
        raise ValueError("subset_values must include singleton subsets")

    max_ratio = max(full_value / singleton_sum, singleton_sum / full_value)
    return FluctuationReport(
        ensemble_id=ensemble_id,
        full_set_value=float(full_value),
        subset_values={tuple(k): float(v) for k, v in subset_values.items()},
        max_ratio=float(max_ratio),
        transitivity_cycles=tuple(tuple(c) for c in cycles),
        flagged=max_ratio >= fold_threshold or len(cycles) > 0,
    )


def fluctuation_reports(
    records: pd.DataFrame,
    rounds: pd.DataFrame,
    catalog: Sequence[Mapping[str, Any]],
    ensembles: Sequence[Mapping[str, Any]],
    cycles: Sequence[Tuple[str, str, str]] = (),
    fold_threshold: float = DEFAULT_FOLD_THRESHOLD,
) -> List[FluctuationReport]:
    """
    One report per configured ensemble that completed at least one round.

    The full-set value is the ensemble's last offer price. A singleton is
    valued at its mean settled pairwise price, or its base value when it
    never traded at a positive price. Other configured ensembles whose members form a proper
    subset contribute their last offer price. Cycles are attached when
    they only involve the ensemble's subsets.
    """
    base_values = {item["id"]: float(item["base_value"]) for item in catalog}
    settled = records[
        (records["market"] == MARKET_MINIMAL) & (records["kind"] == KIND_COMPLETE)
    ]
    mean_prices = settled.groupby("object")["price"].mean().to_dict()

    last_offer: Dict[str, float] = {}
    for row in rounds.sort_values(["tick", "round"], kind="mergesort").itertuples(index=False):
        last_offer[str(row.ensemble_id)] = float(row.offer_price)

    reports = []
    for spec in ensembles:
        ensemble_id = spec["id"]
        members = tuple(spec["members"])
        full_value = last_offer.get(ensemble_id)
        if full_value is None or full_value <= 0:
            continue

        subset_values: Dict[Subset, float] = {}
        for m in members:
            price = float(mean_prices.get(m, 0.0))
            subset_values[(m,)] = price if price > 0 else base_values[m]
        for other in ensembles:
            other_members = tuple(other["members"])
            if other["id"] != ensemble_id and set(other_members) < set(members):
                value = last_offer.get(other["id"])
                if value is not None and value > 0:
                    subset_values[other_members] = value

        names = set(members) | {other["id"] for other in ensembles if set(other["members"]) <= set(members)}
        own_cycles = [c for c in cycles if set(c) <= names]
        reports.append(
            detect_fluctuation(full_value, subset_values, fold_threshold, ensemble_id, own_cycles)
        )
    return reports
