"""
eulerlab: numerics for Euler-type degenerate elliptic operators

    L(f) = y^2 (f_xx + f_yy) + y (b1 f_x + b2 f_y) + c f

on half-plane rectangles ``y >= 0``: special functions, operator and grid
types, coordinate transforms, barrier functions, a closed-form catalog, a
finite-difference solver with a degenerate-edge closure, the impulse
kernel, and a theorem-verification harness.
"""

from .operator import Coefficients, GridFunction, HalfPlaneRect
from .solver import BoundarySpec, SolveReport, solve
from .verify import VerificationReport

__version__ = "0.1.0"

__all__ = ["Coefficients", "GridFunction", "HalfPlaneRect", "BoundarySpec", "SolveReport",
           "solve", "VerificationReport", "__version__"]
