"""Quantum logic from boundary-condition set semantics, and a wormhole billiard
with more than one consistent history."""

__version__ = "0.1.0"
