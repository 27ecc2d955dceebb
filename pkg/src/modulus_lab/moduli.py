"""Main-part and boundary moduli of smoothness and their sum.

Each modulus is a supremum over the step h of a weighted L_q norm of a k-th
difference.  The h-supremum uses a uniform grid plus golden-section polishing
near the discrete argmax; the x-integrals go through core.weighted_norm with
quadrature breakpoints mapped through the inverse of x -> x + lambda*phi(x),
so that jumps of f stay aligned with panel boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .core import (DEFAULT_QUAD, FunctionDescriptor, JacobiWeight, NormOrder,
                   QuadratureConfig, weighted_norm)
from .differences import DifferenceSpec, difference, symmetric_difference_phi
from .kernels import psi

_ZERO_FLOOR = 1e-13
_GOLDEN_ITERS = 20
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ModulusRequest:
    k: int
    delta: float
    weight: JacobiWeight
    q: NormOrder
    h_samples: int = 64
    quad: QuadratureConfig = DEFAULT_QUAD

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("order k must be >= 1")
        if not 0.0 < self.delta <= 1.0 / (2 * self.k):
            raise ValueError(f"delta must lie in (0, 1/(2k)], got {self.delta}")
        if self.h_samples < 8:
            raise ValueError("h_samples must be >= 8")
        object.__setattr__(self, "q", NormOrder.of(self.q))


@dataclass(frozen=True)
class ModulusResult:
    main: float
    forward: float
    backward: float
    total: float
    argmax_h: Tuple[float, float, float]

    def __post_init__(self):
        assert abs(self.total - (self.main + self.forward + self.backward)) <= 1e-15 \
            * max(1.0, self.total)


def phi_difference_descriptor(f: FunctionDescriptor, k: int,
                              h: float) -> FunctionDescriptor:
    """Descriptor for x -> symmetric k-th difference with step h*phi(x)."""
    bps = set()
    for b in f.breakpoints:
        for i in range(k + 1):
            lam = (i - k / 2.0) * h
            bps.add(float(psi(lam, b)))
    # where the stencil starts/stops exiting [-1, 1]
    for lam in (k * h / 2.0, -k * h / 2.0):
        if lam != 0.0:
            bps.add(float(psi(lam, 1.0)))
            bps.add(float(psi(lam, -1.0)))
    return FunctionDescriptor(
        rule=lambda x, _f=f, _k=k, _h=h: symmetric_difference_phi(_f, _k, _h, x),
        endpoint_exponents=f.endpoint_exponents,
        breakpoints=tuple(sorted(b for b in bps if -1.0 < b < 1.0)),
        name=f"diff[{k},{h:g}*phi]({f.name})",
    )


def shifted_difference_descriptor(f: FunctionDescriptor, k: int, h: float,
                                  direction: str) -> FunctionDescriptor:
    """Descriptor for the one-sided (constant-step) k-th difference."""
    spec = DifferenceSpec(order=k, step=h, direction=direction)
    sign = 1.0 if direction == "forward" else -1.0
    bps = {float(b - sign * i * h) for b in f.breakpoints for i in range(k + 1)}
    return FunctionDescriptor(
        rule=lambda x, _f=f, _s=spec: difference(_f, _s, x),
        endpoint_exponents=f.endpoint_exponents,
        breakpoints=tuple(sorted(b for b in bps if -1.0 < b < 1.0)),
        name=f"{direction}_diff[{k},{h:g}]({f.name})",
    )


def _norm_at_h(f, req: ModulusRequest, h: float, variant: str) -> float:
    k = req.k
    if variant == "main":
        strip = (-1.0 + 2.0 * k * k * h * h, 1.0 - 2.0 * k * k * h * h)
        if not strip[0] < strip[1]:
            return 0.0
        g = phi_difference_descriptor(f, k, h)
    else:
        width = 2.0 * k * k * req.delta ** 2
        if variant == "forward":
            strip = (-1.0, -1.0 + width)
        else:
            strip = (1.0 - width, 1.0)
        g = shifted_difference_descriptor(f, k, h, variant)
    return weighted_norm(g, req.weight, req.q, strip, req.quad)


def _sup_over_h(f, req: ModulusRequest, h_max: float, variant: str):
    """Grid search over (0, h_max] followed by golden-section polishing."""
    grid = h_max * np.arange(1, req.h_samples + 1) / req.h_samples
    vals = np.array([_norm_at_h(f, req, h, variant) for h in grid])
    j = int(np.argmax(vals))
    best_h, best_v = float(grid[j]), float(vals[j])
    lo = float(grid[j - 1]) if j > 0 else grid[0] / 2.0
    hi = float(grid[j + 1]) if j + 1 < grid.size else float(grid[j])
    if hi > lo:
        a, b = lo, hi
        c = b - _INVPHI * (b - a)
        d = a + _INVPHI * (b - a)
        fc = _norm_at_h(f, req, c, variant)
        fd = _norm_at_h(f, req, d, variant)
        for _ in range(_GOLDEN_ITERS):
            if fc > fd:
                b, d, fd = d, c, fc
                c = b - _INVPHI * (b - a)
                fc = _norm_at_h(f, req, c, variant)
            else:
                a, c, fc = c, d, fd
                d = a + _INVPHI * (b - a)
                fd = _norm_at_h(f, req, d, variant)
        for h, v in ((c, fc), (d, fd)):
            if v > best_v:
                best_h, best_v = float(h), float(v)
    if best_v < _ZERO_FLOOR:
        return 0.0, best_h
    return best_v, best_h


def main_part_modulus(f: FunctionDescriptor, req: ModulusRequest):
    """Sup over 0 < h <= delta of the weighted norm of the phi-step difference
    on the shrinking strip [-1 + 2k^2 h^2, 1 - 2k^2 h^2]."""
    return _sup_over_h(f, req, req.delta, "main")


def boundary_modulus(f: FunctionDescriptor, req: ModulusRequest, direction: str):
    """Sup over 0 < h <= 2 k^2 delta^2 of the one-sided difference norm on the
    boundary strip of that same width; direction 'forward' works at -1,
    'backward' at +1."""
    if direction not in ("forward", "backward"):
        raise ValueError(f"unknown direction {direction!r}")
    h_max = 2.0 * req.k ** 2 * req.delta ** 2
    return _sup_over_h(f, req, h_max, direction)


def dt_modulus(f: FunctionDescriptor, req: ModulusRequest) -> ModulusResult:
    """Full modulus: main part plus the two boundary parts."""
    main, h_main = main_part_modulus(f, req)
    fwd, h_fwd = boundary_modulus(f, req, "forward")
    bwd, h_bwd = boundary_modulus(f, req, "backward")
    return ModulusResult(main=main, forward=fwd, backward=bwd,
                         total=main + fwd + bwd,
                         argmax_h=(h_main, h_fwd, h_bwd))
