# Streamlit app pages - Overview, Trades, Network, Analysis
