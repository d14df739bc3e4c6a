"""Exact computations around images of Lie polynomials on matrix algebras."""

__version__ = "0.1.0"
