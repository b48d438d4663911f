"""
Trades Page - Transaction Records.

Read-only page listing trace records with market/kind/object filters,
the settled price series and compositional round history.
No simulation logic. No data mutation. Filtering only.
"""

import streamlit as st

from src.analysis.figures import price_series_figure
from src.tracing.schema import Trace


def render_trades(trace: Trace) -> None:
    """Render transaction records page."""

    st.header("💱 Trades")
    st.markdown("---")

    records = trace.records
    if records.empty:
        st.warning("This trace holds no records.")
        return

    # -------------------------------------------------------------------------
    # FILTERS
    # -------------------------------------------------------------------------
    col1, col2, col3 = st.columns(3)
    market = col1.selectbox("Market", ["All"] + sorted(records["market"].unique().tolist()))
    kind = col2.selectbox("Kind", ["All"] + sorted(records["kind"].unique().tolist()))
    obj = col3.selectbox("Object", ["All"] + sorted(records["object"].unique().tolist()))

    filtered = records
    if market != "All":
        filtered = filtered[filtered["market"] == market]
    if kind != "All":
        filtered = filtered[filtered["kind"] == kind]
    if obj != "All":
        filtered = filtered[filtered["object"] == obj]

    st.caption(f"Showing {len(filtered):,} of {len(records):,} records")
    st.dataframe(filtered, use_container_width=True, hide_index=True)
    st.markdown("---")

    st.subheader("📈 Settled Pairwise Prices")
    st.plotly_chart(price_series_figure(records), use_container_width=True)

    if not trace.rounds.empty:
        st.subheader("🔨 Compositional Rounds")
        st.dataframe(trace.rounds, use_container_width=True, hide_index=True)
