"""Exact computations for the Artin-Schreier family of abelian surfaces."""

__version__ = "0.1.0"
