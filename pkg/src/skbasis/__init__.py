"""Valuatively independent bases for the Fermat cubic degeneration and the
cost function they realise."""

__version__ = "0.1.0"
