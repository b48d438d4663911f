"""
Trace and Snapshot Writers.

Renders traces and snapshot tables to CSV text with a fixed column order
and "\n" line endings, so identical runs produce identical bytes.

Usage:
    from src.tracing.writers import render_trace_text, write_trace, write_table
"""

from pathlib import Path
from typing import List, Sequence, Union

import pandas as pd

from src.tracing.schema import TRACE_COLUMNS, TraceHeader, imitation_to_text
from src.utils.constants import HEADER_PREFIX
from src.utils.helpers import canonical_json

PathLike = Union[str, Path]


def render_header(header: TraceHeader) -> str:
    lines: List[str] = [
        f"format: {header.format}",
        f"spec_version: {header.spec_version}",
        f"seed: {header.seed}",
        f"config_hash: {header.config_hash}",
        f"config: {canonical_json(header.config)}",
    ]
    if header.origin is not None:
        lines.append(f"origin: {header.origin}")
    return "".join(f"{HEADER_PREFIX}{line}\n" for line in lines)


def render_table(df: pd.DataFrame, columns: Sequence[str]) -> str:
    return df[list(columns)].to_csv(index=False, lineterminator="\n")


def render_trace_text(header: TraceHeader, records: pd.DataFrame) -> str:
    """Full trace file content: header lines, then the record CSV."""
    body = records[TRACE_COLUMNS].copy()
    body["imitation"] = imitation_to_text(body["imitation"])
    return render_header(header) + render_table(body, TRACE_COLUMNS)


def _write_text(path: PathLike, text: str) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    return out


def write_trace(path: PathLike, header: TraceHeader, records: pd.DataFrame) -> Path:
    return _write_text(path, render_trace_text(header, records))


def write_table(path: PathLike, df: pd.DataFrame, columns: Sequence[str]) -> Path:
    return _write_text(path, render_table(df, columns))
