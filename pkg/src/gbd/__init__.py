"""Generalised Bunce-Deddens diagrams and their invariants."""

__version__ = "0.1.0"
