"""Exact arithmetic and module-theoretic invariants for skew PBW extensions."""

__version__ = "0.1.0"
