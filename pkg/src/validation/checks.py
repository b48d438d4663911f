"""
Low-Level Table Validation Helpers.

Reusable DataFrame checks for trace and snapshot tables.

Purpose:
    - Validate column presence
    - Check for null or blank values
    - Verify non-negative numeric values
    - Verify categorical vocabularies
    - Verify ordering of the tick column

Constraints:
    - No file I/O
    - No DataFrame mutations
    - No logging or printing

Usage:
    from src.validation.checks import (
        check_required_columns,
        check_no_nulls,
        check_non_negative_values,
        check_allowed_values,
        check_non_decreasing,
    )
"""

from typing import Iterable, List

import pandas as pd


def _check_exists(df: pd.DataFrame, column: str) -> None:
    if column not in df.columns:
        raise ValueError(
            f"Column '{column}' does not exist in DataFrame. "
            f"Available columns: {sorted(df.columns.tolist())}"
        )


def check_required_columns(df: pd.DataFrame, required_columns: List[str]) -> None:
    """
    Verify that all required columns are present in the DataFrame.

    Raises:
        ValueError: If one or more required columns are missing.
    """
    existing_columns = set(df.columns)
    missing_columns = set(required_columns) - existing_columns

    if missing_columns:
        raise ValueError(
            f"Missing required columns: {sorted(missing_columns)}. "
            f"Found columns: {sorted(existing_columns)}"
        )


def check_no_nulls(df: pd.DataFrame, columns: List[str]) -> None:
    """
    Verify that columns contain no nulls and no blank strings.

    Raises:
        ValueError: If any specified column contains a missing value.
    """
    for column in columns:
        _check_exists(df, column)

        values = df[column]
        missing = values.isna() | (values.astype(str).str.strip() == "")
        if missing.any():
            raise ValueError(
                f"Column '{column}' contains {int(missing.sum())} missing value(s). "
                f"Expected zero."
            )


def check_non_negative_values(df: pd.DataFrame, columns: List[str]) -> None:
    """
    Verify that numeric columns contain only values >= 0.

    Raises:
        ValueError: If any specified column contains a negative value.
    """
    for column in columns:
        _check_exists(df, column)

        negative_count = int((df[column] < 0).sum())
        if negative_count > 0:
            raise ValueError(
                f"Column '{column}' contains {negative_count} negative value(s)."
            )


def check_allowed_values(df: pd.DataFrame, column: str, allowed: Iterable[str]) -> None:
    """
    Verify that a categorical column only holds known values.

    Raises:
        ValueError: On any value outside the vocabulary.
    """
    _check_exists(df, column)

    unknown = set(df[column].unique()) - set(allowed)
    if unknown:
        raise ValueError(
            f"Column '{column}' holds unknown value(s): {sorted(map(str, unknown))}"
        )


def check_non_decreasing(df: pd.DataFrame, column: str) -> None:
    """
    Verify that a column never decreases from one row to the next.

    Raises:
        ValueError: At the first decrease.
    """
    _check_exists(df, column)

    steps = df[column].diff().dropna()
    if (steps < 0).any():
        row = int(steps[steps < 0].index[0])
        raise ValueError(
            f"Column '{column}' decreases at row {row}; expected non-decreasing order."
        )
