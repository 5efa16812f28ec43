"""Numerical toolkit for weighted Monge-Ampere energies of radial psh functions."""

__version__ = "0.1.0"
