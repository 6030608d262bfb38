"""Exact computer algebra for the ER(2) Bockstein spectral sequence."""

__version__ = "0.1.0"
