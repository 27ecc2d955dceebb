"""Change of variable psi, its derivative, and the boundary kernel used by
the upper-bound machinery.

psi(lam, .) inverts x -> x + lam*phi(x); the kernel g_y has a closed form,
so no series expansion is needed anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import phi
from .differences import binomial_signs
from .errors import DegenerateError

_RADICAND_FLOOR = 1e-14


def psi(lam, y):
    """(y - lam*sqrt(1 - y^2 + lam^2)) / (1 + lam^2)."""
    lam = np.asarray(lam, dtype=float)
    y = np.asarray(y, dtype=float)
    rad = 1.0 - y * y + lam * lam
    return (y - lam * np.sqrt(rad)) / (1.0 + lam * lam)


def psi_derivative(lam, y):
    """Closed-form d psi / d y."""
    lam_a = np.asarray(lam, dtype=float)
    y_a = np.asarray(y, dtype=float)
    rad = 1.0 - y_a * y_a + lam_a * lam_a
    if np.any(rad <= _RADICAND_FLOOR):
        raise DegenerateError("vanishing radicand in psi_derivative")
    root = np.sqrt(rad)
    out = (lam_a * y_a + root) / ((1.0 + lam_a * lam_a) * root)
    return float(out) if out.ndim == 0 else out


def forward_image(lam, x):
    """x + lam*phi(x), the map psi(lam, .) inverts."""
    x = np.asarray(x, dtype=float)
    return x + np.asarray(lam, dtype=float) * phi(x)


def g_kernel(beta, theta, y, t):
    """theta^(2b) (1+t^2)^(-b-1) (1 - t*y/sqrt(1+t^2))^(-2b-1)."""
    t = np.asarray(t, dtype=float)
    one_pt = 1.0 + t * t
    base = 1.0 - t * y / np.sqrt(one_pt)
    out = theta ** (2.0 * beta) * one_pt ** (-beta - 1.0) * base ** (-2.0 * beta - 1.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class KernelPoint:
    y: float
    beta: float
    k: int
    h: float
    theta: float = None  # type: ignore[assignment]

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("step must be positive")
        if not -1.0 < self.y < 1.0:
            raise ValueError("y must lie in (-1, 1)")
        th = float(np.sqrt(1.0 - self.y * self.y))
        if self.theta is None:
            object.__setattr__(self, "theta", th)
        elif abs(self.theta - th) > 1e-15 * max(1.0, th):
            raise ValueError("theta disagrees with sqrt(1 - y^2)")


def a_kernel(point: KernelPoint) -> float:
    """Symmetric k-th difference of t -> g_y(t) at t=0 with step h/theta."""
    k, h, th = point.k, point.h, point.theta
    if th <= 0.0:
        raise DegenerateError("theta vanished; y too close to an endpoint")
    step = h / th
    nodes = step * (np.arange(k + 1) - k / 2.0)
    vals = g_kernel(point.beta, th, point.y, nodes)
    return float(np.dot(np.atleast_1d(vals), binomial_signs(k)))


def a_kernel_bound_ratio(point: KernelPoint) -> float:
    """|A_k(y,h)| / (h^k theta^(2*beta - k)), the quantity whose boundedness
    the upper-bound argument needs."""
    scale = point.h ** point.k * point.theta ** (2.0 * point.beta - point.k)
    return abs(a_kernel(point)) / scale
