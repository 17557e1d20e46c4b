"""Trigonometric series with vanishing coefficients and bounded partial sums on a thin set."""

__version__ = "0.1.0"
