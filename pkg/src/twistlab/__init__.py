"""Numerical laboratory for twisted sums, group actions and complex interpolation."""

from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
