"""Exact computations with finite dg categories, dg modules and kernels."""

from .linalg import F2, QQ, Field

__version__ = "0.1.0"

__all__ = ["Field", "QQ", "F2", "__version__"]
