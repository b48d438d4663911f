# Config module - YAML simulation configuration, strict validation and defaults
