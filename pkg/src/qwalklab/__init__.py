"""Coined discrete-time quantum walk simulation lab."""

__version__ = "0.1.0"
