"""
Overview Page - Run Summary.

Read-only page showing the run header, headline counts and the
fundamental-value series per object.
No simulation logic. No data mutation.
"""

import pandas as pd
import plotly.graph_objects as go
import streamlit as st

from src.tracing.schema import Trace


def _fundamentals_figure(fundamentals: pd.DataFrame) -> go.Figure:
    fig = go.Figure()
    for obj, rows in fundamentals.groupby("object", sort=True):
        fig.add_trace(go.Scatter(x=rows["tick"], y=rows["fundamental_value"], mode="lines+markers", name=str(obj)))
    fig.update_layout(xaxis_title="tick", yaxis_title="fundamental value", height=400)
    return fig


# =============================================================================
# PUBLIC API
# =============================================================================

def render_overview(trace: Trace) -> None:
    """Render run overview page."""

    st.header("🏠 Run Overview")
    st.markdown("---")

    header = trace.header
    records = trace.records
    config = header.config

    # -------------------------------------------------------------------------
    # KPI METRICS
    # -------------------------------------------------------------------------
    col1, col2, col3, col4 = st.columns(4)
    col1.metric("Agents", f"{config['population']['size']:,}")
    col2.metric("Ticks", f"{config['run']['ticks']:,}")
    col3.metric("Records", f"{len(records):,}")
    col4.metric("Completed", f"{int((records['kind'] == 'complete').sum()):,}")

    st.caption(
        f"seed {header.seed} · config {header.config_hash[:12]}"
        + (f" · {header.origin}" if header.origin else "")
    )
    st.markdown("---")

    # -------------------------------------------------------------------------
    # FUNDAMENTALS
    # -------------------------------------------------------------------------
    st.subheader("📈 Fundamental Value")
    fundamentals = trace.snapshot("fundamentals")
    if fundamentals.empty:
        st.info("No fundamentals snapshot in this bundle.")
    else:
        st.plotly_chart(_fundamentals_figure(fundamentals), use_container_width=True)

    with st.expander("Embedded configuration"):
        st.json(config)
