"""Numerical laboratory for reparametrization-invariant classical and quantum systems."""

__version__ = "0.1.0"
