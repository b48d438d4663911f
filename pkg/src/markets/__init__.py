# Markets module - Minimal (pairwise) and compositional (one-to-all) exchange
