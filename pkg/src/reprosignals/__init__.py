"""Structural and linguistic signals of reproducibility in scholarly articles."""

__version__ = "0.1.0"
