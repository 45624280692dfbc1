"""Combinatorics of stable A-graphs and finite-field experiments on lines
on low-degree hypersurfaces."""

__version__ = "0.1.0"
