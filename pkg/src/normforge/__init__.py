"""Exact and certified computation with polytope gauge norms.

Provides rational polytope unit balls with exact gauge evaluation, basis
spaces with monotonicity checks, a canonical catalog of monotone rational
norms, an ell_2-sum embedding pipeline, two quadratic renormings, norms on
finite trees, and 2-interpolation, plus a CLI verification harness.
"""

from .rational import Rat, CertInterval, ExactSqrt, parse_rat, rat_str
from .geometry import PolytopeBall, NotANormError
from .spaces import BasisSpace, PolytopeNorm, EuclideanNorm

__version__ = "0.1.0"

__all__ = [
    "Rat",
    "CertInterval",
    "ExactSqrt",
    "parse_rat",
    "rat_str",
    "PolytopeBall",
    "NotANormError",
    "BasisSpace",
    "PolytopeNorm",
    "EuclideanNorm",
]
