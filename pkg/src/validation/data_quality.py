"""
Trace Data Quality Validation.

Validates a loaded trace's record table before it reaches the detectors.

Purpose:
    - Validate column presence and vocabularies
    - Ensure accounting fields are well-formed
    - Provide a validation summary for the report bundle

Constraints:
    - No cleaning or transformation
    - No file I/O
    - Validation only - raises on hard failures

Usage:
    from src.validation.data_quality import validate_trace_records

    summary = validate_trace_records(trace.records)
"""

from typing import Any, Dict

import pandas as pd

from src.markets.records import (
    KIND_BID,
    KIND_COMPLETE,
    MARKET_COMPOSITIONAL,
    MARKET_MINIMAL,
    REASON_IMITATION,
    REASON_INSUFFICIENT_FUNDS,
)
from src.tracing.schema import TRACE_COLUMNS
from src.validation.checks import (
    check_allowed_values,
    check_no_nulls,
    check_non_decreasing,
    check_non_negative_values,
    check_required_columns,
)
from src.valuation.gates import GATE_REASONS


# =============================================================================
# VALIDATION CONSTANTS
# =============================================================================

_NO_BLANK_COLUMNS = ["market", "object", "kind", "reason"]
"""Columns that must never be blank."""

_NON_NEGATIVE_COLUMNS = ["tick", "price", "minted"]
"""Columns that must never be negative."""

_VOCABULARIES = {
    "market": (MARKET_MINIMAL, MARKET_COMPOSITIONAL),
    "kind": (KIND_BID, KIND_COMPLETE),
    "reason": GATE_REASONS + (REASON_INSUFFICIENT_FUNDS, REASON_IMITATION),
}


# =============================================================================
# PUBLIC API
# =============================================================================

def validate_trace_records(records: pd.DataFrame) -> Dict[str, Any]:
    """
    Validate a trace record table.

    Performs the following validations:
        1. Required columns exist
        2. Categorical columns are non-blank and within their vocabularies
        3. Ticks, prices and mint amounts are non-negative
        4. Ticks are non-decreasing
        5. Imitation records belong to the minimal market

    Returns:
        dict: row_count, complete_count, bid_count, minted_total,
        validations_passed.

    Raises:
        ValueError: If any validation check fails.
    """
    validations_passed = []

    check_required_columns(records, TRACE_COLUMNS)
    validations_passed.append("required_columns")

    check_no_nulls(records, _NO_BLANK_COLUMNS)
    for column, allowed in _VOCABULARIES.items():
        check_allowed_values(records, column, allowed)
    validations_passed.append("vocabularies")

    check_non_negative_values(records, _NON_NEGATIVE_COLUMNS)
    validations_passed.append("non_negative")

    check_non_decreasing(records, "tick")
    validations_passed.append("tick_order")

    imitated = records[records["imitation"]]
    if (imitated["market"] != MARKET_MINIMAL).any():
        raise ValueError("imitation records must belong to the minimal market")
    validations_passed.append("imitation_records")

    return {
        "row_count": len(records),
        "complete_count": int((records["kind"] == KIND_COMPLETE).sum()),
        "bid_count": int((records["kind"] == KIND_BID).sum()),
        "minted_total": float(records["minted"].sum()),
        "validations_passed": validations_passed,
    }
