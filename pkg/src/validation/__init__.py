# Validation module - Trace quality checks
