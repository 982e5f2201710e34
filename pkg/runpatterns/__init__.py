"""Exact distributions of (k1,k2)-run patterns in Bernoulli trials."""

__version__ = "1.0.0"
