"""Jacobi weights, function descriptors, graded meshes and weighted L_q norms.

Everything downstream (moduli, best approximation, rate sweeps) funnels its
integrals and sup-norms through :func:`weighted_norm`, so this module owns the
singularity handling: evaluations are confined to the clip band
``|x| <= 1 - clip_epsilon`` and meshes are geometrically graded toward the
endpoints of ``[-1, 1]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .errors import IntegrabilityError, SingularityError

CLIP_DEFAULT = 1e-12

#: sides closer than this to +-1 get a geometrically graded sub-mesh
_GRADE_NEAR = 0.25


@dataclass(frozen=True)
class JacobiWeight:
    """The weight w(x) = (1+x)^alpha * (1-x)^beta on [-1, 1]."""

    alpha: float
    beta: float

    def __call__(self, x):
        return weight_eval(self, x)

    def swapped(self) -> "JacobiWeight":
        """Weight with the endpoint exponents exchanged (x -> -x symmetry)."""
        return JacobiWeight(self.beta, self.alpha)

    def times_phi(self, r: float) -> "JacobiWeight":
        """Multiply by phi^r = (1-x^2)^(r/2)."""
        return JacobiWeight(self.alpha + r / 2.0, self.beta + r / 2.0)


PHI = JacobiWeight(0.5, 0.5)


def phi(x):
    """phi(x) = sqrt(1 - x^2), elementwise."""
    x = np.asarray(x, dtype=float)
    return np.sqrt(np.clip(1.0 - x * x, 0.0, None))


def weight_eval(w: JacobiWeight, x):
    """Evaluate a Jacobi weight, with exact endpoint conventions.

    At x = -1 or x = +1 the factor with a negative exponent gives +inf, a zero
    exponent gives 1, and a positive exponent gives 0.
    """
    x_arr = np.asarray(x, dtype=float)
    scalar = x_arr.ndim == 0
    xv = np.atleast_1d(x_arr)
    with np.errstate(divide="ignore", over="ignore"):
        left = _power_factor(1.0 + xv, w.alpha)
        right = _power_factor(1.0 - xv, w.beta)
        vals = left * right
    # 0 * inf at an endpoint where one exponent is positive and the other
    # negative: the product is genuinely 0 or inf depending on which endpoint.
    vals = np.where(np.isnan(vals) & (np.abs(xv) == 1.0), 0.0, vals)
    return float(vals[0]) if scalar else vals


def _power_factor(base, expo):
    if expo == 0.0:
        return np.ones_like(base)
    with np.errstate(divide="ignore"):
        return np.where(base > 0.0, base ** expo, np.where(expo > 0.0, 0.0, np.inf))


@dataclass(frozen=True)
class NormOrder:
    """An L_q order, 1 <= q <= inf (inf exactly representable)."""

    q: float

    def __post_init__(self):
        if not (self.q >= 1.0):
            raise ValueError(f"norm order must satisfy q >= 1, got {self.q}")

    @property
    def is_inf(self) -> bool:
        return math.isinf(self.q)

    @staticmethod
    def of(value) -> "NormOrder":
        if isinstance(value, NormOrder):
            return value
        if isinstance(value, str):
            value = math.inf if value.strip().lower() in ("inf", "infinity") else float(value)
        return NormOrder(float(value))


@dataclass(frozen=True)
class QuadratureConfig:
    """Composite Gauss-Legendre quadrature on a geometrically graded mesh."""

    panels_per_side: int = 48
    nodes_per_panel: int = 8
    grading_exponent: float = 2.0
    clip_epsilon: float = CLIP_DEFAULT
    sup_samples: int = 512

    def __post_init__(self):
        if self.panels_per_side < 1 or self.nodes_per_panel < 1:
            raise ValueError("panel and node counts must be >= 1")
        if not (0.0 < self.clip_epsilon <= 1e-6):
            raise ValueError("clip_epsilon must be in (0, 1e-6]")
        if self.grading_exponent < 1.0:
            raise ValueError("grading_exponent must be >= 1")

    def refined(self, factor: int = 2) -> "QuadratureConfig":
        """Same mesh law with `factor` times as many panels (and sup samples)."""
        return replace(self, panels_per_side=self.panels_per_side * factor,
                       sup_samples=self.sup_samples * factor)


DEFAULT_QUAD = QuadratureConfig()


@dataclass(frozen=True)
class FunctionDescriptor:
    """A function on (-1, 1) together with the metadata the toolkit needs.

    `rule` must accept a float ndarray and return values of the same shape; it
    is only ever called at points inside the clip band.  `endpoint_exponents`
    = (e_minus, e_plus) bound the growth |f| = O((1+x)^e_minus) near -1 and
    O((1-x)^e_plus) near +1 and drive the integrability checks.  `breakpoints`
    lists interior jump/kink locations so quadrature meshes can align with
    them.  `derivatives[r-1]`, when present, is an exact rule for f^(r).
    """

    rule: Callable[[np.ndarray], np.ndarray]
    endpoint_exponents: Tuple[float, float] = (0.0, 0.0)
    derivatives: Tuple[Callable[[np.ndarray], np.ndarray], ...] = ()
    monotone_order: Optional[int] = None
    monotone_source: Optional[str] = None
    support: Optional[Tuple[float, float]] = None
    breakpoints: Tuple[float, ...] = ()
    name: str = ""

    def __call__(self, x):
        x_arr = np.asarray(x, dtype=float)
        scalar = x_arr.ndim == 0
        xv = np.atleast_1d(x_arr)
        with np.errstate(all="ignore"):
            vals = np.asarray(self.rule(xv), dtype=float)
        vals = np.broadcast_to(vals, xv.shape).copy()
        if self.support is not None:
            lo, hi = self.support
            vals[(xv < lo) | (xv > hi)] = 0.0
        return float(vals[0]) if scalar else vals

    def derivative(self, r: int) -> "FunctionDescriptor":
        """Descriptor for f^(r), available only when exact rules were declared."""
        if r == 0:
            return self
        if len(self.derivatives) < r:
            from .errors import DerivativeUnavailableError
            raise DerivativeUnavailableError(
                f"{self.name or 'function'} has no exact derivative of order {r}")
        return FunctionDescriptor(
            rule=self.derivatives[r - 1],
            endpoint_exponents=self.endpoint_exponents,
            derivatives=self.derivatives[r:],
            monotone_order=(self.monotone_order - r
                            if self.monotone_order is not None and self.monotone_order > r
                            else None),
            support=self.support,
            breakpoints=self.breakpoints,
            name=f"{self.name}^({r})" if self.name else "",
        )


def constant(c: float, name: str = "") -> FunctionDescriptor:
    return FunctionDescriptor(rule=lambda x: np.full_like(x, float(c)),
                              name=name or f"const({c})")


def from_callable(fn, name: str = "", **kwargs) -> FunctionDescriptor:
    """Wrap a vectorized callable as a descriptor."""
    return FunctionDescriptor(rule=lambda x: np.asarray(fn(x), dtype=float),
                              name=name, **kwargs)


def scale(f: FunctionDescriptor, c: float) -> FunctionDescriptor:
    return FunctionDescriptor(
        rule=lambda x, _f=f: c * _f(x),
        endpoint_exponents=f.endpoint_exponents,
        derivatives=tuple((lambda x, _d=d: c * np.asarray(_d(x), dtype=float))
                          for d in f.derivatives),
        monotone_order=f.monotone_order if c >= 0 else None,
        support=f.support,
        breakpoints=f.breakpoints,
        name=f"{c}*{f.name}" if f.name else "",
    )


def add(f: FunctionDescriptor, g: FunctionDescriptor) -> FunctionDescriptor:
    ee = (min(f.endpoint_exponents[0], g.endpoint_exponents[0]),
          min(f.endpoint_exponents[1], g.endpoint_exponents[1]))
    return FunctionDescriptor(
        rule=lambda x, _f=f, _g=g: _f(x) + _g(x),
        endpoint_exponents=ee,
        breakpoints=tuple(sorted(set(f.breakpoints) | set(g.breakpoints))),
        name=f"{f.name}+{g.name}",
    )


def reflect(f: FunctionDescriptor, sign: float = 1.0) -> FunctionDescriptor:
    """Descriptor for sign * f(-x)."""
    supp = None
    if f.support is not None:
        lo, hi = f.support
        supp = (-hi, -lo)
    return FunctionDescriptor(
        rule=lambda x, _f=f: sign * _f(-np.asarray(x, dtype=float)),
        endpoint_exponents=(f.endpoint_exponents[1], f.endpoint_exponents[0]),
        monotone_order=f.monotone_order,
        support=supp,
        breakpoints=tuple(sorted(-b for b in f.breakpoints)),
        name=f"reflect({f.name})",
    )


# ---------------------------------------------------------------------------
# meshes


def graded_mesh(interval: Tuple[float, float],
                endpoint_exponents: Tuple[float, float] = (0.0, 0.0),
                quad: QuadratureConfig = DEFAULT_QUAD) -> np.ndarray:
    """Panel boundaries for composite quadrature on `interval`.

    Sides whose endpoint sits near -1 or +1 get geometrically clustered
    boundaries (innermost at distance clip_epsilon when the endpoint is the
    pole itself); an interval away from both poles is meshed uniformly with
    `panels_per_side` panels.
    """
    a, b = float(interval[0]), float(interval[1])
    if not a < b:
        raise ValueError(f"empty interval {interval}")
    eps = quad.clip_epsilon
    a = max(a, -1.0 + eps)
    b = min(b, 1.0 - eps)
    if not a < b:
        return np.array([a, a])
    m = quad.panels_per_side
    g = quad.grading_exponent
    grade_left = (1.0 + a) < _GRADE_NEAR
    grade_right = (1.0 - b) < _GRADE_NEAR
    if not grade_left and not grade_right:
        return np.linspace(a, b, m + 1)
    mid = 0.5 * (a + b)
    left = (_graded_side(a, mid, pole=-1.0, panels=m, g=g) if grade_left
            else np.linspace(a, mid, m + 1))
    right = (_graded_side(mid, b, pole=1.0, panels=m, g=g) if grade_right
             else np.linspace(mid, b, m + 1))
    return np.concatenate([left[:-1], right])


def _graded_side(lo: float, hi: float, pole: float, panels: int, g: float) -> np.ndarray:
    """Boundaries on [lo, hi] clustering geometrically toward `pole`."""
    if pole > 0:
        d_far, d_near = 1.0 - lo, 1.0 - hi
    else:
        d_far, d_near = 1.0 + hi, 1.0 + lo
    j = np.arange(panels + 1, dtype=float) / panels
    frac = 1.0 - (1.0 - j) ** g
    dists = d_far * (d_near / d_far) ** frac
    pts = pole - dists if pole > 0 else pole + dists
    return np.sort(pts)


def refine_with_breakpoints(boundaries: np.ndarray,
                            breakpoints: Sequence[float]) -> np.ndarray:
    """Insert interior breakpoints into a boundary list (deduplicated)."""
    if len(breakpoints) == 0:
        return boundaries
    a, b = boundaries[0], boundaries[-1]
    extra = np.asarray([p for p in breakpoints if a < p < b], dtype=float)
    if extra.size == 0:
        return boundaries
    merged = np.unique(np.concatenate([boundaries, extra]))
    # drop boundaries that coincide to rounding
    keep = np.concatenate([[True], np.diff(merged) > 1e-15])
    return merged[keep]


_GL_CACHE: dict = {}


def _gauss_legendre(n: int):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def quadrature_points(boundaries: np.ndarray, nodes_per_panel: int):
    """All Gauss-Legendre nodes and weights for a panel decomposition."""
    xg, wg = _gauss_legendre(nodes_per_panel)
    lo = boundaries[:-1][:, None]
    hi = boundaries[1:][:, None]
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (hi + lo) + half * xg[None, :]).ravel()
    weights = (half * wg[None, :]).ravel()
    return nodes, weights


# ---------------------------------------------------------------------------
# norms


def weighted_norm(f: FunctionDescriptor,
                  w: JacobiWeight,
                  q,
                  interval: Tuple[float, float] = (-1.0, 1.0),
                  quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    """|| w f ||_{L_q(interval)} by graded composite quadrature.

    For q = inf the norm is the max of |w f| over the quadrature nodes plus a
    denser set of graded samples.  Raises IntegrabilityError when q < inf and
    the endpoint exponents of w*f make the integral divergent, and
    SingularityError when f returns a non-finite value inside the clip band.
    """
    q = NormOrder.of(q)
    a, b = float(interval[0]), float(interval[1])
    eps = quad.clip_epsilon
    a_c, b_c = max(a, -1.0 + eps), min(b, 1.0 - eps)
    if not a_c < b_c:
        return 0.0
    if not q.is_inf:
        _check_integrability(f, w, q.q, a, b)
    boundaries = graded_mesh((a_c, b_c), f.endpoint_exponents, quad)
    boundaries = refine_with_breakpoints(boundaries, f.breakpoints)
    nodes, weights = quadrature_points(boundaries, quad.nodes_per_panel)
    fv = f(nodes)
    if not np.all(np.isfinite(fv)):
        bad = nodes[~np.isfinite(fv)][0]
        raise SingularityError(f"non-finite value of {f.name or 'f'} at x={bad}")
    wv = weight_eval(w, nodes)
    prod = np.abs(wv * fv)
    if q.is_inf:
        extra = _sup_samples(a_c, b_c, f, quad)
        fe = f(extra)
        if not np.all(np.isfinite(fe)):
            bad = extra[~np.isfinite(fe)][0]
            raise SingularityError(f"non-finite value of {f.name or 'f'} at x={bad}")
        cand = np.concatenate([prod, np.abs(weight_eval(w, extra) * fe)])
        return float(np.max(cand))
    total = float(np.sum(weights * prod ** q.q))
    return total ** (1.0 / q.q)


def _check_integrability(f, w, q, a, b):
    eps = 16 * CLIP_DEFAULT
    if a <= -1.0 + eps:
        expo = w.alpha + f.endpoint_exponents[0]
        if q * expo <= -1.0:
            raise IntegrabilityError(
                f"w*f ~ (1+x)^{expo} near -1 is not L_{q}: need q*exponent > -1")
    if b >= 1.0 - eps:
        expo = w.beta + f.endpoint_exponents[1]
        if q * expo <= -1.0:
            raise IntegrabilityError(
                f"w*f ~ (1-x)^{expo} near +1 is not L_{q}: need q*exponent > -1")


def _sup_samples(a: float, b: float, f: FunctionDescriptor,
                 quad: QuadratureConfig) -> np.ndarray:
    n = quad.sup_samples
    parts = [np.linspace(a, b, n // 2)]
    # extra log-spaced points toward whichever poles the interval approaches
    if (1.0 + a) < _GRADE_NEAR:
        d = np.geomspace(1.0 + a, min(_GRADE_NEAR, 1.0 + b), n // 4)
        parts.append(-1.0 + d)
    if (1.0 - b) < _GRADE_NEAR:
        d = np.geomspace(1.0 - b, min(_GRADE_NEAR, 1.0 - a), n // 4)
        parts.append(1.0 - d)
    for bp in f.breakpoints:
        if a < bp < b:
            parts.append(np.clip(np.array([bp - 1e-11, bp, bp + 1e-11]), a, b))
    pts = np.unique(np.concatenate(parts))
    return pts[(pts >= a) & (pts <= b)]
