"""Exact combinatorics of partially flat angled ideal triangulations."""

__version__ = "0.1.0"
