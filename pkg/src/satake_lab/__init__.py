"""Satake parameters, Sato-Tate sampling, Kloosterman sums and L-function numerics."""

__version__ = "0.1.0"
