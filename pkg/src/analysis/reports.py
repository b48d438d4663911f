"""
Detector Reports.

Runs the selected detectors over a loaded trace and renders the results
as key=value text and as JSON lines (one document per report).

Report documents:
    {"report": <name>, "flagged": <bool>, "result": <object or null>}

`result` is null when the trace holds nothing the detector can assess.
The "validation" and "prices" reports never flag.

Usage:
    from src.analysis.reports import run_detectors, write_reports
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Tuple, Union

import pandas as pd

from src.analysis.bubbles import DEFAULT_BUBBLE_FOLD, DEFAULT_GAIN_FLOOR, DEFAULT_WINDOW, detect_bubble
from src.analysis.fluctuation import DEFAULT_FOLD_THRESHOLD, fluctuation_reports
from src.analysis.regimes import (
    DEFAULT_OUTLIER_K,
    DEFAULT_VARIANCE_RATIO,
    MIN_POINTS,
    summarize_regime,
    valuation_points_from_trace,
)
from src.analysis.transitivity import detect_transitivity_violations, preferences_from_trace
from src.markets.records import KIND_COMPLETE, MARKET_MINIMAL
from src.tracing.schema import Trace
from src.utils.constants import REPORTS_JSON_FILE, REPORTS_TEXT_FILE
from src.utils.helpers import coefficient_of_variation
from src.validation.data_quality import validate_trace_records

DETECTORS: Tuple[str, ...] = ("fluctuation", "transitivity", "bubble", "regime")

_ANALYSIS_DEFAULTS: Dict[str, Any] = {
    "fold_threshold": DEFAULT_FOLD_THRESHOLD,
    "variance_ratio": DEFAULT_VARIANCE_RATIO,
    "outlier_k": DEFAULT_OUTLIER_K,
    "bubble_window": DEFAULT_WINDOW,
    "gain_floor": DEFAULT_GAIN_FLOOR,
    "bubble_fold": DEFAULT_BUBBLE_FOLD,
}


# =============================================================================
# SUMMARY STATISTICS
# =============================================================================

def settled_price_cv(records: pd.DataFrame, object_id: str) -> float:
    """Coefficient of variation of completed pairwise prices for one object."""
    settled = records[
        (records["market"] == MARKET_MINIMAL)
        & (records["kind"] == KIND_COMPLETE)
        & (records["object"] == object_id)
    ]
    return coefficient_of_variation(settled["price"].tolist())


def price_summary(records: pd.DataFrame) -> Dict[str, Dict[str, float]]:
    settled = records[(records["market"] == MARKET_MINIMAL) & (records["kind"] == KIND_COMPLETE)]
    summary = {}
    for obj in sorted(settled["object"].unique()):
        prices = settled.loc[settled["object"] == obj, "price"]
        summary[str(obj)] = {
            "n_trades": int(len(prices)),
            "mean_price": float(prices.mean()),
            "cv": settled_price_cv(records, obj),
        }
    return summary


# =============================================================================
# INTERNAL HELPERS
# =============================================================================

def _analysis_params(trace: Trace) -> Dict[str, Any]:
    params = dict(_ANALYSIS_DEFAULTS)
    params.update(trace.header.config.get("analysis", {}) or {})
    return params


def base_values_from_config(config: Mapping[str, Any]) -> Dict[str, float]:
    values = {item["id"]: float(item["base_value"]) for item in config.get("catalog", [])}
    for spec in config.get("ensembles", []) or []:
        values[spec["id"]] = sum(values[m] for m in spec["members"])
    return values


def _report(name: str, flagged: bool, result: Any) -> Dict[str, Any]:
    return {"report": name, "flagged": bool(flagged), "result": result}


# =============================================================================
# PUBLIC API
# =============================================================================

def run_detectors(trace: Trace, detectors: Sequence[str] = DETECTORS) -> List[Dict[str, Any]]:
    """
    Run the selected detectors over a trace.

    Raises:
        ValueError: On an unknown detector name or an invalid trace.
    """
    unknown = [d for d in detectors if d not in DETECTORS]
    if unknown:
        raise ValueError(f"unknown detector(s): {unknown}. Known: {list(DETECTORS)}")

    config = trace.header.config
    params = _analysis_params(trace)
    records = trace.records

    reports = [
        _report("validation", False, validate_trace_records(records)),
        _report("prices", False, price_summary(records) or None),
    ]

    prefs = preferences_from_trace(records)
    items = {a for a, _, _ in prefs} | {b for _, b, _ in prefs}
    cycles = detect_transitivity_violations(prefs)

    for name in DETECTORS:
        if name not in detectors:
            continue

        if name == "transitivity":
            result = None
            if len(items) >= 3:
                result = {"n_preferences": len(prefs), "cycles": [list(c) for c in cycles]}
            reports.append(_report(name, bool(cycles), result))

        elif name == "fluctuation":
            found = fluctuation_reports(
                records,
                trace.rounds,
                config.get("catalog", []),
                config.get("ensembles", []) or [],
                cycles=cycles,
                fold_threshold=params["fold_threshold"],
            )
            reports.append(
                _report(name, any(r.flagged for r in found), [r.to_dict() for r in found] or None)
            )

        elif name == "bubble":
            bubble = detect_bubble(
                records,
                trace.snapshot("fundamentals"),
                window=params["bubble_window"],
                gain_floor=params["gain_floor"],
                fold=params["bubble_fold"],
            )
            has_trades = bool(
                ((records["market"] == MARKET_MINIMAL) & (records["kind"] == KIND_COMPLETE)).any()
            )
            reports.append(_report(name, bubble.flagged, bubble.to_dict() if has_trades else None))

        elif name == "regime":
            points = valuation_points_from_trace(records, base_values_from_config(config))
            result = None
            if len(points) >= MIN_POINTS:
                summary = summarize_regime(points, params["variance_ratio"], params["outlier_k"])
                result = {
                    "label": summary.label,
                    "variance_ratio": summary.variance_ratio,
                    "outliers_value": summary.outliers_value,
                    "outliers_meaning": summary.outliers_meaning,
                    "n_points": summary.n_points,
                }
            reports.append(_report(name, False, result))

    return reports


def any_flagged(reports: Iterable[Mapping[str, Any]]) -> bool:
    return any(r["flagged"] for r in reports)


def _json_safe(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_json_safe(v) for v in value]
    return value


def _flatten(prefix: str, value: Any) -> List[Tuple[str, str]]:
    if isinstance(value, dict) and value:
        pairs: List[Tuple[str, str]] = []
        for key, inner in value.items():
            pairs.extend(_flatten(f"{prefix}.{key}", inner))
        return pairs
    return [(prefix, json.dumps(_json_safe(value), sort_keys=True))]


def render_text(reports: Iterable[Mapping[str, Any]]) -> str:
    """key=value lines, one block per report."""
    lines = []
    for report in reports:
        name = report["report"]
        lines.append(f"{name}.flagged={json.dumps(report['flagged'])}")
        lines.extend(f"{k}={v}" for k, v in _flatten(f"{name}.result", report["result"]))
    return "\n".join(lines) + "\n"


def render_jsonl(reports: Iterable[Mapping[str, Any]]) -> str:
    return "".join(json.dumps(_json_safe(dict(r)), sort_keys=True) + "\n" for r in reports)


def write_reports(reports: Sequence[Mapping[str, Any]], out_dir: Union[str, Path]) -> Tuple[Path, Path]:
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    text_path = directory / REPORTS_TEXT_FILE
    json_path = directory / REPORTS_JSON_FILE
    text_path.write_text(render_text(reports), encoding="utf-8")
    json_path.write_text(render_jsonl(reports), encoding="utf-8")
    return text_path, json_path
