"""Exact enumeration, q-series and quadratic-algebra computations for hard-particle
ladder models."""

from .qtseries import LaurentQT, Window
from .report import Check, Report

__version__ = "0.1.0"

__all__ = ["LaurentQT", "Window", "Check", "Report", "__version__"]
