"""Exact computation with Eulerian and chromatic quasisymmetric functions."""

from __future__ import annotations

from .polyring import BiPoly, SeriesZ
from .results import CheckResult
from .symqsym import QSymFunc, SymFunc

__version__ = "0.1.0"

__all__ = ["BiPoly", "SeriesZ", "CheckResult", "QSymFunc", "SymFunc", "__version__"]
