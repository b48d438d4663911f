"""
Valuation Regime Classifier.

Places valuations in a plane with value on the x-axis (settled price or
accepted range center) and meaning on the y-axis (A_x), then labels the
cloud:

    emh_like          variance dominated by the value axis
    strong_polysemy   meaning-dominated, fewer outliers along x than y
    weak_polysemy     meaning-dominated otherwise

Each axis is centered on its median and both axes are divided by one
pooled scale. The variance ratio is unchanged by a common rescaling and
by per-axis translation; rescaling one axis alone by a multiplies the
ratio by a**2. Scoring each axis by its own sd would pin the ratio at 1
for every cloud, so the axes share a unit. Outliers lie beyond
outlier_k * IQR from the median, counted per axis, and those counts are
unchanged by any per-axis affine map.

Usage:
    from src.analysis.regimes import classify_regime, ValuationPoint
"""

from dataclasses import dataclass
from typing import Final, List, Mapping, Sequence, Tuple

import numpy as np
import pandas as pd

from src.markets.records import KIND_COMPLETE
from src.validation.checks import check_required_columns

EMH_LIKE: Final[str] = "emh_like"
WEAK_POLYSEMY: Final[str] = "weak_polysemy"
STRONG_POLYSEMY: Final[str] = "strong_polysemy"
REGIME_LABELS: Final[Tuple[str, ...]] = (EMH_LIKE, WEAK_POLYSEMY, STRONG_POLYSEMY)

MIN_POINTS: Final[int] = 10
DEFAULT_VARIANCE_RATIO: Final[float] = 2.0
DEFAULT_OUTLIER_K: Final[float] = 1.5


@dataclass(frozen=True)
class ValuationPoint:
    value_coord: float
    meaning_coord: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.value_coord) and np.isfinite(self.meaning_coord)):
            raise ValueError(f"valuation point must be finite, got {self}")


@dataclass(frozen=True)
class RegimeSummary:
    label: str
    variance_ratio: float
    outliers_value: int
    outliers_meaning: int
    n_points: int


# =============================================================================
# INTERNAL HELPERS
# =============================================================================

def _outlier_count(values: np.ndarray, k: float) -> int:
    q1, median, q3 = np.percentile(values, [25, 50, 75])
    return int((np.abs(values - median) > k * (q3 - q1)).sum())


def _standardize(x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    x = x - np.median(x)
    y = y - np.median(y)
    pooled = np.sqrt((x.var() + y.var()) / 2.0)
    if pooled > 0:
        x, y = x / pooled, y / pooled
    return x, y


# =============================================================================
# PUBLIC API
# =============================================================================

def summarize_regime(
    points: Sequence[ValuationPoint],
    variance_ratio: float = DEFAULT_VARIANCE_RATIO,
    outlier_k: float = DEFAULT_OUTLIER_K,
) -> RegimeSummary:
    """
    Label a valuation cloud and return the statistics behind the label.

    Two constant axes give a ratio of 1.0; a constant meaning axis with a
    varying value axis gives an infinite ratio.

    Raises:
        ValueError: With fewer than 10 points.
    """
    if len(points) < MIN_POINTS:
        raise ValueError(f"regime classification needs >= {MIN_POINTS} points, got {len(points)}")
    if variance_ratio <= 0 or outlier_k <= 0:
        raise ValueError("variance_ratio and outlier_k must be positive")

    raw_x = np.asarray([p.value_coord for p in points], dtype=float)
    raw_y = np.asarray([p.meaning_coord for p in points], dtype=float)
    x, y = _standardize(raw_x, raw_y)

    var_x, var_y = float(x.var()), float(y.var())
    if var_y > 0:
        ratio = var_x / var_y
    else:
        ratio = float("inf") if var_x > 0 else 1.0

    out_x = _outlier_count(raw_x, outlier_k)
    out_y = _outlier_count(raw_y, outlier_k)

    if ratio >= variance_ratio:
        label = EMH_LIKE
    elif out_x < out_y:
        label = STRONG_POLYSEMY
    else:
        label = WEAK_POLYSEMY

    return RegimeSummary(label, ratio, out_x, out_y, len(points))


def classify_regime(
    points: Sequence[ValuationPoint],
    variance_ratio: float = DEFAULT_VARIANCE_RATIO,
    outlier_k: float = DEFAULT_OUTLIER_K,
) -> str:
    """Regime label of a valuation cloud (see summarize_regime)."""
    return summarize_regime(points, variance_ratio, outlier_k).label


def valuation_points_from_trace(
    records: pd.DataFrame, base_values: Mapping[str, float]
) -> List[ValuationPoint]:
    """
    One point per completed record: (price, buyer perceived / base value).

    The buyer's perceived value is recovered as price * (1 + gain/100);
    the meaning coordinate is clipped to [0, 1]. Objects without a base
    value are skipped.
    """
    check_required_columns(records, ["object", "kind", "price", "gain_buyer_pct"])

    settled = records[records["kind"] == KIND_COMPLETE]
    points = []
    for row in settled.itertuples(index=False):
        base = base_values.get(str(row.object))
        if not base:
            continue
        perceived = float(row.price) * (1.0 + float(row.gain_buyer_pct) / 100.0)
        points.append(
            ValuationPoint(
                value_coord=float(row.price),
                meaning_coord=float(np.clip(perceived / base, 0.0, 1.0)),
            )
        )
    return points
