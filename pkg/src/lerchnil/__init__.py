"""Lerch zeta and Lerch L-functions on the Heisenberg nilmanifold."""

__version__ = "0.1.0"
