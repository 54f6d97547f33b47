"""Toolkit for the arithmetic of twisted GL(3) spectral reciprocity:
exact character sums, local Z-factors, special-function kernels,
spectral transforms, and desk-scale moment experiments."""

__version__ = "0.1.0"
