"""Polynomials in Chebyshev-coefficient form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .core import FunctionDescriptor

_TRIM = 1e-14


@dataclass(frozen=True)
class ChebyshevPoly:
    """Sum c_j T_j(x); evaluated by Clenshaw's backward recurrence."""

    coeffs: Tuple[float, ...]
    degree_bound: int

    def __post_init__(self):
        if len(self.coeffs) > self.degree_bound + 1:
            raise ValueError("more coefficients than degree bound allows")

    @staticmethod
    def from_coeffs(coeffs, degree_bound=None) -> "ChebyshevPoly":
        c = np.atleast_1d(np.asarray(coeffs, dtype=float))
        if degree_bound is None:
            degree_bound = len(c) - 1
        return ChebyshevPoly(tuple(c.tolist()), int(degree_bound))

    @staticmethod
    def from_power(power_coeffs, degree_bound=None) -> "ChebyshevPoly":
        """Convert monomial coefficients (ascending) to Chebyshev basis."""
        c = np.polynomial.chebyshev.poly2cheb(
            np.atleast_1d(np.asarray(power_coeffs, dtype=float)))
        return ChebyshevPoly.from_coeffs(c, degree_bound)

    @staticmethod
    def zero(degree_bound: int = 0) -> "ChebyshevPoly":
        return ChebyshevPoly((0.0,), degree_bound)

    def __call__(self, x):
        return np.polynomial.chebyshev.chebval(x, np.asarray(self.coeffs))

    def trimmed(self) -> "ChebyshevPoly":
        """Drop trailing coefficients below 1e-14; degree bound unchanged."""
        c = np.asarray(self.coeffs)
        nz = np.nonzero(np.abs(c) > _TRIM)[0]
        last = nz[-1] if nz.size else 0
        return ChebyshevPoly(tuple(c[: last + 1].tolist()), self.degree_bound)

    def is_zero(self, tol: float = _TRIM) -> bool:
        return bool(np.all(np.abs(self.coeffs) <= tol))

    def descriptor(self, name: str = "") -> FunctionDescriptor:
        return FunctionDescriptor(rule=self.__call__, name=name or "poly")


def cheb_vandermonde(x: np.ndarray, n: int) -> np.ndarray:
    """Matrix [T_0(x) ... T_n(x)]."""
    return np.polynomial.chebyshev.chebvander(x, n)
