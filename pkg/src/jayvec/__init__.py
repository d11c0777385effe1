"""Bivector / jay-vector algebra, conjugate semi-diameters and plane-wave PDE solutions."""

__version__ = "0.1.0"
