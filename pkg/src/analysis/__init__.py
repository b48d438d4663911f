# Analysis module - Fluctuation, transitivity, bubble and regime detectors over traces
