# Network module - Agents, observation, imitation, arcs and mobility
