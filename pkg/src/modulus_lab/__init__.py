"""Weighted moduli of smoothness and best weighted polynomial approximation
for k-monotone functions, with empirical rate verification."""

from .chebyshev import ChebyshevPoly
from .core import (FunctionDescriptor, JacobiWeight, NormOrder,
                   QuadratureConfig, weighted_norm)
from .extremals import catalog_get, catalog_names, chebyshev_partition
from .moduli import ModulusRequest, ModulusResult, dt_modulus
from .approx import ApproxResult, best_approx
from .rates import RateFit, UpsilonSpec, fit_rate, mpoly_rate, upsilon

__version__ = "0.1.0"

__all__ = [
    "ApproxResult", "ChebyshevPoly", "FunctionDescriptor", "JacobiWeight",
    "ModulusRequest", "ModulusResult", "NormOrder", "QuadratureConfig",
    "RateFit", "UpsilonSpec", "best_approx", "catalog_get", "catalog_names",
    "chebyshev_partition", "dt_modulus", "fit_rate", "mpoly_rate", "upsilon",
    "weighted_norm",
]
