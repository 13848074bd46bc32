"""Exact computations on hypermetric cones and polytopes."""

__version__ = "0.1.0"
