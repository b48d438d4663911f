# Services module - Simulation engine, scripted scenarios and orchestration
