"""Deformations of reducible metabelian SL(3,C) representations of knot groups."""

__version__ = "0.1.0"
