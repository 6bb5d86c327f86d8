"""Deontic reasoning on top of a small answer-set solver."""

__version__ = "0.1.0"
