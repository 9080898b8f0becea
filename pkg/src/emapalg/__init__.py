"""Exact-arithmetic toolkit for equivariant map algebras, evaluation
representations, local Weyl modules, and their homological characterization,
at finite truncation over cyclotomic fields."""

__version__ = "0.1.0"
