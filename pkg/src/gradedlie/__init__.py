"""Exact-arithmetic workbench for finite-dimensional graded Lie algebras."""

from gradedlie._echelon import KERNEL_NAME

__version__ = "0.1.0"
__all__ = ["KERNEL_NAME", "__version__"]
