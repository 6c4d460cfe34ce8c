"""Exact nonequilibrium steady states of boundary-driven integrable chains."""

__version__ = "0.1.0"
