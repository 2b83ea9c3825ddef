"""Design-space exploration: exhaustive enumeration, simulated annealing and Pareto fronts."""
