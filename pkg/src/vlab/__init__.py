"""Valuation laboratory: exact experiments with valued field towers."""

__version__ = "0.1.0"
