# Utils module - Logging, constants and small helpers
