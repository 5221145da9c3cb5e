"""Jets (third-order forward differentiation) and adaptive quadrature."""

from .jet import Jet, chain, cos, exp, inverse, jabs, log, sin, sqrt, tan
from .quadrature import (
    DEFAULT_BUDGET,
    DEFAULT_TOL,
    QuadratureResult,
    integrate_1d,
    integrate_2d,
)

__all__ = [
    "Jet", "chain", "inverse", "sin", "cos", "tan", "exp", "log", "sqrt", "jabs",
    "QuadratureResult", "integrate_1d", "integrate_2d", "DEFAULT_TOL", "DEFAULT_BUDGET",
]
