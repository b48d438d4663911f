# Dashboards package - read-only viewer over run bundles
