"""
Network Page - Arcs and Positions.

Read-only page drawing the black/red arc graph on the 2-D field at a
chosen snapshot tick, with the kernel table for that tick.
"""

import streamlit as st

from src.analysis.figures import network_figure
from src.tracing.schema import Trace


def render_network(trace: Trace) -> None:
    st.header("🕸️ Network")
    st.markdown("---")

    positions = trace.snapshot("positions")
    if positions.empty:
        st.warning("No position snapshots in this bundle.")
        return

    ticks = sorted(positions["tick"].unique().tolist())
    tick = st.select_slider("Snapshot tick", options=ticks, value=ticks[-1])

    st.plotly_chart(network_figure(trace.snapshot("edges"), positions, int(tick)), use_container_width=True)

    edges = trace.snapshot("edges")
    at_tick = edges[edges["tick"] == tick]
    col1, col2 = st.columns(2)
    col1.metric("Black arcs", f"{int((at_tick['kind'] == 'black').sum()):,}")
    col2.metric("Red arcs", f"{int((at_tick['kind'] == 'red').sum()):,}")

    kernels = trace.snapshot("kernels")
    if not kernels.empty:
        st.subheader("Kernels")
        st.dataframe(kernels[kernels["tick"] == tick], use_container_width=True, hide_index=True)
