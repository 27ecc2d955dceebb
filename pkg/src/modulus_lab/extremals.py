"""Catalog of extremal functions driving the lower-bound experiments, plus
Chebyshev-partition utilities."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from .core import FunctionDescriptor, NormOrder, phi
from .errors import ParamRangeError, UnknownEntryError


@dataclass(frozen=True)
class RateClaim:
    """Human-readable record of the rate an entry is designed to witness."""

    exponent_rule: str        # formula in k, q, p, e.g. "2/q - 2/p"
    log_power_rule: str = "0"
    anchor: str = ""          # which lower-bound construction this realizes


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: Dict[str, float]
    descriptor: FunctionDescriptor
    claimed_rate: RateClaim


def _as_int(params, key):
    v = params[key]
    if v != int(v):
        raise ParamRangeError(f"{key} must be an integer, got {v}")
    return int(v)


def _inv_p(p) -> float:
    p = NormOrder.of(p).q
    return 0.0 if math.isinf(p) else 1.0 / p


# ---------------------------------------------------------------------------
# individual constructions


def _oscillating_step(k: int, delta: float) -> FunctionDescriptor:
    """Value (-1)^i on J_i = [k*delta*i, k*delta*(i+1/2)], zero between."""
    if not 0.0 < delta <= 1.0 / (2 * k):
        raise ParamRangeError("need 0 < delta <= 1/(2k)")
    step = k * delta
    i_max = int(math.floor(1.0 / (2 * k * delta)))

    def rule(x, _s=step, _imax=i_max):
        x = np.asarray(x, dtype=float)
        u = x / _s
        i = np.floor(u + 1e-12).astype(int)
        frac = u - i
        on = (x >= 0.0) & (i <= _imax) & (frac <= 0.5 + 1e-12)
        return np.where(on, (-1.0) ** i, 0.0)

    bps = []
    for i in range(i_max + 1):
        bps.extend([step * i, step * (i + 0.5)])
    return FunctionDescriptor(rule=rule, support=(0.0, step * (i_max + 0.5)),
                              breakpoints=tuple(b for b in bps if b < 1.0),
                              name=f"oscillating_step(k={k},delta={delta:g})")


def _heaviside() -> FunctionDescriptor:
    return FunctionDescriptor(rule=lambda x: (np.asarray(x) >= 0.0).astype(float),
                              support=(0.0, 1.0), monotone_order=1,
                              monotone_source="analytic", breakpoints=(0.0,),
                              name="heaviside")


def _truncated_power_at(xi: float, k: int, scale: float = 1.0,
                        name: str = "") -> FunctionDescriptor:
    """scale * (x - xi)_+^(k-1) with exact derivatives up to order k-1."""
    if not -1.0 < xi < 1.0:
        raise ParamRangeError(f"knot {xi} outside (-1, 1)")

    def make_rule(power, c):
        if power == 0:
            return lambda x: np.where(np.asarray(x) >= xi, float(c), 0.0)
        return lambda x: c * np.clip(np.asarray(x, dtype=float) - xi, 0.0, None) ** power

    derivs = []
    for r in range(1, k):
        c = scale * math.factorial(k - 1) / math.factorial(k - 1 - r)
        derivs.append(make_rule(k - 1 - r, c))
    return FunctionDescriptor(rule=make_rule(k - 1, scale),
                              derivatives=tuple(derivs),
                              monotone_order=k, monotone_source="analytic",
                              breakpoints=(xi,), name=name)


def _truncated_power(k: int, eps: float, beta: float, p: float) -> FunctionDescriptor:
    if not 0.0 < eps < 1.0:
        raise ParamRangeError("need 0 < eps < 1")
    lam = eps ** (-k - beta - _inv_p(p) + 1.0)
    return _truncated_power_at(1.0 - eps, k, scale=lam,
                               name=f"truncated_power(k={k},eps={eps:g})")


def _inverse_power(beta: float) -> FunctionDescriptor:
    if beta <= 0.0:
        raise ParamRangeError("need beta > 0")

    def make_rule(extra):
        c = 1.0
        for j in range(extra):
            c *= beta + j
        return lambda x: c * (1.0 - np.asarray(x, dtype=float)) ** (-beta - extra)

    return FunctionDescriptor(rule=make_rule(0),
                              derivatives=(make_rule(1), make_rule(2)),
                              endpoint_exponents=(0.0, -beta),
                              monotone_order=2, monotone_source="analytic",
                              name=f"inverse_power(beta={beta:g})")


def _zeta_spline(m: int, lam: float, beta: float, p: float) -> FunctionDescriptor:
    """Nondecreasing step function on the Chebyshev partition with n = 2^m
    knots; levels shrink block by dyadic block and vanish on [-1, 0]."""
    if m < 2:
        raise ParamRangeError("need m >= 2")
    if lam <= 1.0:
        raise ParamRangeError("need lam > 1")
    if beta <= -_inv_p(p) and not math.isinf(p):
        raise ParamRangeError("need beta > -1/p for nonincreasing levels")
    n = 2 ** m
    knots = np.cos(np.arange(n + 1) * np.pi / n)   # decreasing, t_0 = 1
    levels = np.zeros(n + 1)                        # levels[i] = value on (t_i, t_{i-1}]
    for i in range(1, 2 ** (m - 1)):
        blk = int(math.floor(math.log2(i)))
        zeta = 1.0 / ((blk + 2) * math.log(blk + 2) ** lam)
        levels[i] = 2.0 ** (2 * beta * (m - blk) + 2 * (m - blk) * _inv_p(p)) \
            * zeta ** _inv_p(p)
    asc = knots[::-1].copy()          # ascending for searchsorted
    asc_levels = levels[::-1].copy()  # asc_levels[j] = levels[n - j]

    def rule(x, _asc=asc, _lv=asc_levels, _n=n):
        x = np.asarray(x, dtype=float)
        # x in (t_i, t_{i-1}] (i.e. (asc[j-1], asc[j]] with i = n - j + 1)
        # gets the level of interval i; intervals are left-open.
        pos = np.clip(np.searchsorted(_asc, x, side="left"), 1, _n)
        return _lv[pos - 1]

    bps = tuple(sorted(float(knots[2 ** kk - 1]) for kk in range(1, m)))
    return FunctionDescriptor(rule=rule,
                              monotone_order=1, monotone_source="constructed",
                              breakpoints=bps,
                              name=f"zeta_spline(m={m},lam={lam:g})")


def _moving_truncated_power(k: int, n: int) -> FunctionDescriptor:
    xi = 1.0 - 2.0 * k * k / (n * n)
    if xi <= -1.0:
        raise ParamRangeError(f"n={n} too small for k={k}: knot leaves (-1,1)")
    return _truncated_power_at(xi, k, name=f"moving_truncated_power(k={k},n={n})")


# ---------------------------------------------------------------------------
# catalog surface


_RATES = {
    "oscillating_step": RateClaim("0", anchor="modulus bounded below by a "
                                  "constant for unit sup-norm oscillation"),
    "heaviside": RateClaim("1/q", anchor="single jump at the origin, k=1"),
    "truncated_power": RateClaim("2/q - 2/p",
                                 anchor="normalized boundary spike at 1-eps"),
    "inverse_power": RateClaim("2", "1",
                               anchor="endpoint singularity activating the "
                               "logarithmic factor at (k,q,p)=(2,1,inf)"),
    "zeta_spline": RateClaim("1/q", "1/(2q) minus iterated-log correction",
                             anchor="dyadic-block step function for p = 2q"),
    "truncated_power_origin": RateClaim("-(k-1+1/q) in n",
                                        anchor="fixed interior spike driving "
                                        "best-approximation rates"),
    "moving_truncated_power": RateClaim("-(2/q-2/p) in n",
                                        anchor="spike at distance ~ n^-2 from "
                                        "the endpoint"),
}


def catalog_names() -> Tuple[str, ...]:
    return tuple(sorted(_RATES))


def catalog_get(name: str, **params) -> CatalogEntry:
    """Build a catalog entry by name; raises for unknown names or bad params."""
    try:
        if name == "oscillating_step":
            desc = _oscillating_step(_as_int(params, "k"), params["delta"])
        elif name == "heaviside":
            desc = _heaviside()
        elif name == "truncated_power":
            desc = _truncated_power(_as_int(params, "k"), params["eps"],
                                    params.get("beta", 0.0),
                                    params.get("p", math.inf))
        elif name == "inverse_power":
            desc = _inverse_power(params["beta"])
        elif name == "zeta_spline":
            desc = _zeta_spline(_as_int(params, "m"), params.get("lam", 1.5),
                                params.get("beta", 0.0), params.get("p", 2.0))
        elif name == "truncated_power_origin":
            desc = _truncated_power_at(0.0, _as_int(params, "k"),
                                       name=f"truncated_power_origin(k={params['k']:g})")
        elif name == "moving_truncated_power":
            desc = _moving_truncated_power(_as_int(params, "k"), _as_int(params, "n"))
        else:
            raise UnknownEntryError(f"no catalog entry named {name!r}")
    except KeyError as exc:
        raise ParamRangeError(f"{name} is missing parameter {exc}") from None
    return CatalogEntry(name=name, params=dict(params), descriptor=desc,
                        claimed_rate=_RATES[name])


# ---------------------------------------------------------------------------
# Chebyshev partition


@dataclass(frozen=True)
class ChebyshevPartition:
    """Knots t_i = cos(i*pi/n); interval I_i = [t_i, t_{i-1}], i = 1..n."""

    n: int
    knots: np.ndarray

    @staticmethod
    def build(n: int) -> "ChebyshevPartition":
        if n < 2:
            raise ValueError("need n >= 2")
        knots = np.cos(np.arange(n + 1) * np.pi / n)
        part = ChebyshevPartition(n, knots)
        part._validate()
        return part

    def interval(self, i: int) -> Tuple[float, float]:
        if not 1 <= i <= self.n:
            raise IndexError(f"interval index {i} outside 1..{self.n}")
        return float(self.knots[i]), float(self.knots[i - 1])

    def length(self, i: int) -> float:
        lo, hi = self.interval(i)
        return hi - lo

    def _validate(self):
        lengths = -np.diff(self.knots)
        # neighboring lengths comparable within a factor of 3
        ratio = lengths[1:] / lengths[:-1]
        if np.any(ratio > 3.0 + 1e-12) or np.any(ratio < 1.0 / 3.0 - 1e-12):
            raise AssertionError("adjacent interval lengths not 3-comparable")
        # interior lengths comparable to phi(x)/n at interval endpoints
        for i in range(2, self.n):
            lo, hi = self.knots[i], self.knots[i - 1]
            for x in (lo, 0.5 * (lo + hi), hi):
                ln = hi - lo
                if not (2.0 * phi(x) / self.n - 1e-12 <= ln
                        <= 5.0 * phi(x) / self.n + 1e-12):
                    raise AssertionError(
                        f"interval {i} length {ln} vs phi(x)/n at x={x}")


def chebyshev_partition(n: int) -> ChebyshevPartition:
    return ChebyshevPartition.build(n)


def d_interval(partition: ChebyshevPartition, i: int, h: float) -> Tuple[float, float]:
    """The interval swept around knot t_i by the step-h symmetric difference."""
    if not 1 <= i <= partition.n - 1:
        raise IndexError(f"knot index {i} outside 1..{partition.n - 1}")
    if not h > 0:
        raise ValueError("h must be positive")
    t = partition.knots[i]
    root = math.sqrt(1.0 - t * t + h * h / 4.0)
    denom = 1.0 + h * h / 4.0
    return ((t - (h / 2.0) * root) / denom, (t + (h / 2.0) * root) / denom)


def rho(n: int, x):
    """phi(x)/n + 1/n^2, the standard local mesh scale."""
    return phi(x) / n + 1.0 / (n * n)
