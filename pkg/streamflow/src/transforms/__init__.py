"""Design-space moves: folding, partitioning with reconfiguration, weights reloading."""
