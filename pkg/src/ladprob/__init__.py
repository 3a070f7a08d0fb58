"""Exact a-priori probabilities for two-group Boolean classification instances."""

__version__ = "0.1.0"
