"""Numerical claim checking for the Wilson-Giuga interpolation family H_k."""

__version__ = "0.1.0"
