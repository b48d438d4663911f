"""
Analysis Figures.

Plotly figures for the value/meaning plane, settled price series and
network snapshots. Used by `analyze --plots` and the trace viewer.
"""

from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import pandas as pd
import plotly.graph_objects as go

from src.analysis.regimes import ValuationPoint
from src.markets.records import KIND_COMPLETE

ARC_COLORS = {"black": "#2c3e50", "red": "#e74c3c"}


# =============================================================================
# CHART HELPERS
# =============================================================================

def valuation_plane_figure(points: Sequence[ValuationPoint], label: Optional[str] = None) -> go.Figure:
    """Scatter of valuations: value on x, meaning on y."""
    fig = go.Figure(data=[
        go.Scatter(
            x=[p.value_coord for p in points],
            y=[p.meaning_coord for p in points],
            mode="markers",
            marker=dict(size=6, color="#3498db", opacity=0.6),
        )
    ])
    fig.update_layout(
        title=f"Value vs meaning ({label})" if label else "Value vs meaning",
        xaxis_title="Settled price (value space)",
        yaxis_title="A_x (meaning space)",
        height=450,
    )
    return fig


def price_series_figure(records: pd.DataFrame) -> go.Figure:
    """Mean settled price per tick, one line per object."""
    settled = records[records["kind"] == KIND_COMPLETE]
    per_tick = settled.groupby(["object", "tick"])["price"].mean().reset_index()

    fig = go.Figure()
    for obj, rows in per_tick.groupby("object"):
        fig.add_trace(
            go.Scatter(x=rows["tick"].tolist(), y=rows["price"].tolist(), mode="lines+markers", name=str(obj))
        )
    fig.update_layout(xaxis_title="Tick", yaxis_title="Settled price", height=400)
    return fig


def network_figure(edges: pd.DataFrame, positions: pd.DataFrame, tick: int) -> go.Figure:
    """Agents at their field positions with the tick's black and red arcs."""
    nodes = positions[positions["tick"] == tick]
    coords = {int(r.id): (float(r.x), float(r.y)) for r in nodes.itertuples(index=False)}

    fig = go.Figure()
    tick_edges = edges[edges["tick"] == tick]
    for kind, rows in tick_edges.groupby("kind"):
        xs: List[Optional[float]] = []
        ys: List[Optional[float]] = []
        for r in rows.itertuples(index=False):
            if int(r.id_a) in coords and int(r.id_b) in coords:
                (xa, ya), (xb, yb) = coords[int(r.id_a)], coords[int(r.id_b)]
                xs += [xa, xb, None]
                ys += [ya, yb, None]
        fig.add_trace(
            go.Scatter(
                x=xs, y=ys, mode="lines", name=f"{kind} arcs",
                line=dict(width=1, color=ARC_COLORS.get(str(kind), "#95a5a6")),
            )
        )

    fig.add_trace(
        go.Scatter(
            x=nodes["x"].tolist(),
            y=nodes["y"].tolist(),
            mode="markers+text",
            text=[str(i) for i in nodes["id"]],
            textposition="top center",
            marker=dict(size=10, color="#3498db"),
            name="agents",
        )
    )
    fig.update_layout(title=f"Network at tick {tick}", height=500)
    return fig


def write_figures(figures: Dict[str, go.Figure], out_dir: Union[str, Path]) -> List[Path]:
    """Write each figure as a standalone HTML file."""
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, fig in sorted(figures.items()):
        path = directory / f"{name}.html"
        fig.write_html(str(path), include_plotlyjs="cdn")
        paths.append(path)
    return paths
