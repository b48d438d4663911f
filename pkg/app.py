"""
Cultural Market Trace Viewer - Streamlit App.

Application entry point. Responsible ONLY for:
- Loading a run bundle
- Managing session state
- Routing to page modules
"""

from pathlib import Path

import streamlit as st

from src.tracing.loaders import TraceFormatError, load_trace
from src.tracing.schema import Trace
from src.utils.constants import TRACE_FILE

from dashboards.streamlit_app.Overview import render_overview
from dashboards.streamlit_app.Trades import render_trades
from dashboards.streamlit_app.Network import render_network
from dashboards.streamlit_app.Analysis import render_analysis


# =============================================================================
# PAGE CONFIG
# =============================================================================

st.set_page_config(
    page_title="Cultural Market Trace Viewer",
    page_icon="🧬",
    layout="wide",
    initial_sidebar_state="expanded",
)


# =============================================================================
# DATA LOADING
# =============================================================================

@st.cache_data(show_spinner="Loading run bundle...")
def load_bundle(bundle_dir: str) -> Trace:
    return load_trace(Path(bundle_dir) / TRACE_FILE)


# =============================================================================
# SIDEBAR
# =============================================================================

with st.sidebar:
    st.title("🧬 Cultural Market")

    bundle_dir = st.text_input("Run bundle directory", value="outputs/run")

    page = st.radio(
        "Navigate",
        options=["Overview", "Trades", "Network", "Analysis"],
    )

    load = st.button("Load Bundle", type="primary")

    if st.button("Clear Cache"):
        st.cache_data.clear()
        st.session_state.pop("trace", None)
        st.rerun()


# =============================================================================
# LOAD DATA
# =============================================================================

if load or "trace" not in st.session_state:
    try:
        st.session_state["trace"] = load_bundle(bundle_dir)
        st.success(f"Bundle loaded: {len(st.session_state['trace'].records):,} records")
    except (FileNotFoundError, TraceFormatError) as e:
        st.error("Could not load the run bundle")
        st.exception(e)
        st.stop()


trace = st.session_state["trace"]


# =============================================================================
# ROUTING
# =============================================================================

if page == "Overview":
    render_overview(trace)
elif page == "Trades":
    render_trades(trace)
elif page == "Network":
    render_network(trace)
elif page == "Analysis":
    render_analysis(trace)
