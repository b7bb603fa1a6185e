"""Proof kernel and toolchain for the multi-type Dynamic Calculus for EAK."""

__version__ = "0.1.0"
