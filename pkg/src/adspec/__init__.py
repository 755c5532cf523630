"""Exact-diagonalization study of the quantum adiabatic algorithm on single-solution 3-SAT."""

__version__ = "0.1.0"
