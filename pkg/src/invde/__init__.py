"""Simulation-optimization of multi-product starting stocks under stochastic demand."""

__version__ = "0.1.0"
