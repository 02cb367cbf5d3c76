"""Monodromy, cycle-space and regulator computations for hyperelliptic cycle constructions."""

__version__ = "0.1.0"
