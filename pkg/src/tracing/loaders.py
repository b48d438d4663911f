"""
Trace Loaders.

Reads trace files and run bundles back into DataFrames. Floats are parsed
with round-trip precision and no NA coercion, so write -> read -> write
reproduces the original bytes.

Purpose:
    - Parse and verify the trace header (format, config hash)
    - Load records with fixed dtypes
    - Load sibling bundle files (rounds, snapshots) when present

Usage:
    from src.tracing.loaders import load_trace
"""

import json
from io import StringIO
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

import pandas as pd

from src.tracing.schema import (
    ROUND_COLUMNS,
    ROUND_DTYPES,
    TRACE_COLUMNS,
    TRACE_DTYPES,
    Trace,
    TraceHeader,
    blank_columns,
    config_layout,
    empty_frame,
    imitation_from_text,
    layout_from_columns,
    snapshot_dtypes,
)
from src.utils.constants import (
    EDGES_FILE,
    FUNDAMENTALS_FILE,
    GENOMES_FILE,
    HEADER_PREFIX,
    KERNELS_FILE,
    POSITIONS_FILE,
    ROUNDS_FILE,
    TRACE_FORMAT,
)
from src.utils.helpers import canonical_json, sha256_hex
from src.validation.checks import check_required_columns
from src.validation.data_quality import validate_trace_records

SNAPSHOT_FILES: Dict[str, str] = {
    "genomes": GENOMES_FILE,
    "kernels": KERNELS_FILE,
    "edges": EDGES_FILE,
    "positions": POSITIONS_FILE,
    "fundamentals": FUNDAMENTALS_FILE,
}

REQUIRED_HEADER_KEYS = ("format", "spec_version", "seed", "config_hash", "config")


class TraceFormatError(ValueError):
    """A trace file is unreadable as a trace (bad header, columns or values)."""


# =============================================================================
# INTERNAL HELPERS
# =============================================================================

def _split_header(text: str) -> Tuple[Dict[str, str], str]:
    fields: Dict[str, str] = {}
    lines = text.split("\n")
    index = 0
    while index < len(lines) and lines[index].startswith(HEADER_PREFIX):
        key, sep, value = lines[index][len(HEADER_PREFIX):].partition(": ")
        if not sep:
            raise TraceFormatError(f"malformed header line: {lines[index]!r}")
        fields[key] = value
        index += 1
    return fields, "\n".join(lines[index:])


def _parse_header(fields: Dict[str, str]) -> TraceHeader:
    missing = [key for key in REQUIRED_HEADER_KEYS if key not in fields]
    if missing:
        raise TraceFormatError(f"trace header is missing {missing}")
    if fields["format"] != TRACE_FORMAT:
        raise TraceFormatError(f"not a trace file: format is {fields['format']!r}")

    try:
        config = json.loads(fields["config"])
        seed = int(fields["seed"])
    except ValueError as exc:
        raise TraceFormatError(f"unreadable trace header: {exc}") from exc
    if sha256_hex(canonical_json(config)) != fields["config_hash"]:
        raise TraceFormatError("embedded config does not match config_hash")

    return TraceHeader(
        seed=seed,
        config_hash=fields["config_hash"],
        config=config,
        spec_version=fields["spec_version"],
        origin=fields.get("origin"),
    )


def _read_text(path: Path) -> str:
    try:
        with open(path, "r", encoding="utf-8", newline="") as f:
            return f.read()
    except UnicodeDecodeError as exc:
        raise TraceFormatError(f"{path.name} is not valid UTF-8: {exc.reason}") from exc


def _read_csv(
    text: str,
    columns: List[str],
    dtypes: Dict[str, str],
    blanks: Sequence[str] = (),
) -> pd.DataFrame:
    if not text.strip():
        return empty_frame(columns, dtypes)
    try:
        df = pd.read_csv(
            StringIO(text),
            dtype=dtypes,
            keep_default_na=False,
            na_values={column: [""] for column in blanks},
            float_precision="round_trip",
        )
        check_required_columns(df, columns)
    except ValueError as exc:
        raise TraceFormatError(str(exc)) from exc
    return df[columns]


def _read_snapshot(name: str, text: str, default_columns: List[str]) -> pd.DataFrame:
    header_row = text.split("\n", 1)[0].strip()
    try:
        columns = layout_from_columns(name, header_row.split(",")) if header_row else default_columns
    except ValueError as exc:
        raise TraceFormatError(str(exc)) from exc
    return _read_csv(text, columns, snapshot_dtypes(name, columns), blank_columns(name, columns))


# =============================================================================
# PUBLIC API
# =============================================================================

def parse_trace_text(text: str) -> Tuple[TraceHeader, pd.DataFrame]:
    """
    Parse trace file content.

    Returns:
        (header, records) with imitation converted to bool.

    Raises:
        TraceFormatError: On a bad header, missing columns, values outside
            their vocabularies, negative amounts or decreasing ticks.
    """
    fields, body = _split_header(text)
    header = _parse_header(fields)
    records = _read_csv(body, TRACE_COLUMNS, TRACE_DTYPES)
    try:
        records["imitation"] = imitation_from_text(records["imitation"].astype(str))
        validate_trace_records(records)
    except ValueError as exc:
        raise TraceFormatError(str(exc)) from exc
    return header, records.reset_index(drop=True)


def load_trace(path: Union[str, Path]) -> Trace:
    """
    Load a trace file plus any sibling bundle files.

    Raises:
        FileNotFoundError: If the trace file does not exist.
        TraceFormatError: If the trace is corrupt.
    """
    trace_path = Path(path)
    if not trace_path.exists():
        raise FileNotFoundError(f"Trace file not found: {trace_path}")

    header, records = parse_trace_text(_read_text(trace_path))

    rounds = empty_frame(ROUND_COLUMNS, ROUND_DTYPES)
    rounds_path = trace_path.parent / ROUNDS_FILE
    if rounds_path.exists():
        rounds = _read_csv(_read_text(rounds_path), ROUND_COLUMNS, ROUND_DTYPES)

    try:
        layout = config_layout(header.config)
    except ValueError as exc:
        raise TraceFormatError(str(exc)) from exc
    snapshots: Dict[str, pd.DataFrame] = {}
    for name, file_name in SNAPSHOT_FILES.items():
        snapshot_path = trace_path.parent / file_name
        if snapshot_path.exists():
            snapshots[name] = _read_snapshot(name, _read_text(snapshot_path), layout[name])

    return Trace(header=header, records=records, rounds=rounds, snapshots=snapshots)
