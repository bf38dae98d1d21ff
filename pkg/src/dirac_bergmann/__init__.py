"""Dirac-Bergmann constraint analysis for first-order field theories with internal indices."""
__version__ = "0.1.0"
