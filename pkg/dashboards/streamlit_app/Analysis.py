"""
Analysis Page - Detector Reports.

Read-only page running the detectors over the loaded trace in memory
and plotting the value/meaning plane. Nothing is written to disk.
"""

import streamlit as st

from src.analysis.figures import valuation_plane_figure
from src.analysis.regimes import valuation_points_from_trace
from src.analysis.reports import DETECTORS, base_values_from_config, run_detectors
from src.tracing.schema import Trace


# =============================================================================
# PUBLIC API
# =============================================================================

def render_analysis(trace: Trace) -> None:
    """Render detector report page."""

    st.header("🔍 Analysis")
    st.markdown("---")

    selected = st.multiselect("Detectors", list(DETECTORS), default=list(DETECTORS))
    if not selected:
        st.info("Select at least one detector.")
        return

    try:
        reports = run_detectors(trace, selected)
    except ValueError as e:
        st.error("Detectors failed on this trace")
        st.exception(e)
        return

    for report in reports:
        badge = "🚩" if report["flagged"] else "✅"
        with st.expander(f"{badge} {report['report']}", expanded=report["flagged"]):
            if report["result"] is None:
                st.caption("Nothing to assess in this trace.")
            else:
                st.json(report["result"])

    # -------------------------------------------------------------------------
    # VALUE / MEANING PLANE
    # -------------------------------------------------------------------------
    st.subheader("🧭 Value and Meaning")
    points = valuation_points_from_trace(trace.records, base_values_from_config(trace.header.config))
    if not points:
        st.info("No settled trades to place on the plane.")
    else:
        st.plotly_chart(valuation_plane_figure(points), use_container_width=True)
