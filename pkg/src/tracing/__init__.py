# Tracing module - Trace schema, byte-stable writers and loaders
