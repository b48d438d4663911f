# Genome module - Three-segment genotype, construction and mutation
