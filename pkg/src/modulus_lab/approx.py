"""Best weighted polynomial approximation in L_q and a Remez-type ratio.

Solver per norm order: q = 2 weighted least squares, q = infinity a weighted
exchange iteration with an LP fallback, q = 1 an L1 linear program, other q
iteratively reweighted least squares.  The error reported is always the
continuous weighted norm of the residual, recomputed by quadrature, never the
discrete objective the solver minimized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from .chebyshev import ChebyshevPoly, cheb_vandermonde
from .core import (DEFAULT_QUAD, FunctionDescriptor, JacobiWeight, NormOrder,
                   QuadratureConfig, weight_eval, weighted_norm)
from .errors import DivisionError, SolverStallError
from .simplex import l1_fit, minimax_fit

_IRLS_MAX = 50
_IRLS_RTOL = 1e-9
_EXCHANGE_MAX = 60
_EXCHANGE_STALL = 1e-14


@dataclass(frozen=True)
class ApproxResult:
    poly: ChebyshevPoly
    error: float
    solver: str
    iterations: int
    residual_stats: Dict[str, float]


def _fit_grid(f: FunctionDescriptor, n: int, quad: QuadratureConfig,
              grid_size: int = 0):
    """Endpoint-clustered grid (points and integration weights) for the
    discrete solvers.

    Chebyshev-angle midpoints with the matching arc-length weights: the same
    1/phi density a graded mesh provides, but the Chebyshev Vandermonde on
    these nodes stays well conditioned, which the simplex bases need.  Jump
    locations of f are inserted (with zero integration weight) so minimax
    references can sit on them.
    """
    m = grid_size or max(20 * (n + 1), 512)
    theta = (np.arange(m) + 0.5) * np.pi / m
    nodes = np.cos(theta)[::-1].copy()
    wts = (np.pi / m) * np.sqrt(1.0 - nodes * nodes)
    extras = []
    for b in f.breakpoints:
        for x in (b - 1e-9, b, b + 1e-9):
            if -1.0 < x < 1.0:
                extras.append(x)
    if extras:
        nodes = np.concatenate([nodes, extras])
        wts = np.concatenate([wts, np.zeros(len(extras))])
        order = np.argsort(nodes)
        nodes, wts = nodes[order], wts[order]
        keep = np.concatenate([[True], np.diff(nodes) > 1e-14])
        nodes, wts = nodes[keep], wts[keep]
    return nodes, wts


def _residual_descriptor(f: FunctionDescriptor, poly: ChebyshevPoly,
                         crossings=()) -> FunctionDescriptor:
    """Descriptor for f - poly.  `crossings` are estimated zeros of the
    residual; registering them as breakpoints aligns the quadrature mesh with
    the kinks of |f - poly|, without which the norm converges erratically for
    high-degree oscillating residuals."""
    brk = tuple(sorted(set(f.breakpoints) | set(crossings)))
    return FunctionDescriptor(rule=lambda x, _f=f, _p=poly: _f(x) - _p(x),
                              endpoint_exponents=(min(f.endpoint_exponents[0], 0.0),
                                                  min(f.endpoint_exponents[1], 0.0)),
                              breakpoints=brk,
                              name=f"resid({f.name})")


def _grid_crossings(nodes: np.ndarray, resid: np.ndarray) -> np.ndarray:
    """Zeros of the residual estimated by linear interpolation on the grid."""
    s = np.sign(resid)
    flip = np.nonzero(s[1:] * s[:-1] < 0)[0]
    x0, x1 = nodes[flip], nodes[flip + 1]
    r0, r1 = resid[flip], resid[flip + 1]
    return x0 - r0 * (x1 - x0) / (r1 - r0)


def best_approx(f: FunctionDescriptor, n: int, w: JacobiWeight, q,
                grid_size: int = 0,
                quad: QuadratureConfig = DEFAULT_QUAD) -> ApproxResult:
    """Best degree-n weighted L_q approximation of f (discretized problem)."""
    if n < 0:
        raise ValueError("degree bound must be >= 0")
    q = NormOrder.of(q)
    nodes, qwts = _fit_grid(f, n, quad, grid_size)
    fv = f(nodes)
    wv = weight_eval(w, nodes)
    V = cheb_vandermonde(nodes, n)
    if q.is_inf:
        coeffs, solver, iters, stats = _minimax(nodes, fv, wv, V, n)
    elif q.q == 2.0:
        coeffs = _weighted_lstsq(V, fv, qwts * wv * wv)
        solver, iters, stats = "least_squares", 1, {}
    elif q.q == 1.0:
        coeffs = l1_fit(V, fv, qwts * wv)
        solver, iters, stats = "linear_program", 1, {}
    else:
        coeffs, iters = _irls(V, fv, qwts, wv, q.q)
        solver, stats = "irls", {}
    poly = ChebyshevPoly.from_coeffs(coeffs, degree_bound=n).trimmed()
    rv = fv - poly(nodes)
    resid = _residual_descriptor(f, poly, _grid_crossings(nodes, rv))
    err = weighted_norm(resid, w, q, (-1.0, 1.0), quad)
    wr = wv * rv
    stats = dict(stats)
    stats.setdefault("grid_max", float(np.max(np.abs(wr))))
    stats["grid_points"] = float(nodes.size)
    stats["alternations"] = float(sign_changes_array(wr))
    return ApproxResult(poly=poly, error=err, solver=solver,
                        iterations=iters, residual_stats=stats)


def _weighted_lstsq(V: np.ndarray, fv: np.ndarray, sq_weights: np.ndarray):
    s = np.sqrt(sq_weights)
    sol, *_ = np.linalg.lstsq(V * s[:, None], fv * s, rcond=None)
    return sol


def _irls(V, fv, qwts, wv, q):
    """Iteratively reweighted least squares for 1 < q < inf.

    The reweighted step is damped for q > 2 (undamped IRLS only contracts up
    to q ~ 3); the damping factor 1/(q-1) keeps the iteration monotone.
    """
    coeffs = _weighted_lstsq(V, fv, qwts * wv * wv)
    step = 1.0 if q <= 2.0 else 1.0 / (q - 1.0)
    obj_prev = np.inf
    for it in range(1, _IRLS_MAX + 1):
        r = np.abs(fv - V @ coeffs)
        obj = float(np.sum(qwts * (wv * r) ** q)) ** (1.0 / q)
        if abs(obj - obj_prev) <= _IRLS_RTOL * max(obj, 1e-300):
            return coeffs, it
        obj_prev = obj
        lam = qwts * wv ** q * np.maximum(r, 1e-12) ** (q - 2.0)
        coeffs = coeffs + step * (_weighted_lstsq(V, fv, lam) - coeffs)
    raise SolverStallError(f"IRLS did not converge in {_IRLS_MAX} iterations")


def _minimax(nodes, fv, wv, V, n):
    """Weighted exchange iteration; falls back to a grid LP on stalls."""
    try:
        coeffs, iters, err = _exchange(nodes, fv, wv, n)
        return coeffs, "exchange", iters, {"reference_error": err}
    except SolverStallError:
        coeffs = minimax_fit(V, fv, wv)
        return coeffs, "linear_program", 1, {}


def _exchange(nodes, fv, wv, n):
    # initial reference: Chebyshev extrema of order n+1 snapped to the grid
    targets = np.cos(np.arange(n + 2) * np.pi / (n + 1))[::-1]
    ref = np.unique(np.searchsorted(nodes, targets).clip(0, nodes.size - 1))
    if ref.size < n + 2:
        extra = [i for i in range(nodes.size) if i not in set(ref)]
        ref = np.sort(np.concatenate([ref, extra[: n + 2 - ref.size]]))
    prev_err = -1.0
    for it in range(1, _EXCHANGE_MAX + 1):
        x_ref = nodes[ref]
        signs = (-1.0) ** np.arange(ref.size)
        A = np.hstack([cheb_vandermonde(x_ref, n), (signs / wv[ref])[:, None]])
        try:
            sol = np.linalg.solve(A, fv[ref])
        except np.linalg.LinAlgError:
            raise SolverStallError("singular exchange system")
        coeffs, err = sol[:-1], abs(sol[-1])
        wr = wv * (fv - np.polynomial.chebyshev.chebval(nodes, coeffs))
        new_ref = _select_reference(wr, n + 2)
        if new_ref is None:
            raise SolverStallError("could not build an alternating reference")
        if abs(err - prev_err) < _EXCHANGE_STALL or np.array_equal(new_ref, ref):
            return coeffs, it, err
        prev_err = err
        ref = new_ref
    raise SolverStallError("exchange iteration cycled without converging")


def _select_reference(wr, size):
    """Pick `size` alternating local extrema of the weighted residual,
    keeping the global maximum."""
    sign = np.sign(wr)
    sign[sign == 0.0] = 1.0
    runs = np.nonzero(np.diff(sign))[0] + 1
    starts = np.concatenate([[0], runs])
    ends = np.concatenate([runs, [wr.size]])
    picks = np.array([s + np.argmax(np.abs(wr[s:e])) for s, e in zip(starts, ends)])
    if picks.size < size:
        return None
    # drop the weakest extrema while preserving alternation and the max
    vals = np.abs(wr[picks])
    keep = list(range(picks.size))
    while len(keep) > size:
        j_max = int(np.argmax(vals[keep]))
        # removing an interior point breaks alternation, so drop an endpoint
        first, last = keep[0], keep[-1]
        if len(keep) - size >= 2 and vals[first] + vals[last] <= 2 * min(
                vals[keep[1]], vals[keep[-2]]):
            keep = keep[1:-1]
        elif vals[first] <= vals[last] and j_max != 0:
            keep = keep[1:]
        else:
            keep = keep[:-1]
    return picks[np.array(keep)]


def sign_changes_array(values: np.ndarray, zero_tol: float = 1e-12) -> int:
    v = np.asarray(values, dtype=float)
    v = v[np.abs(v) >= zero_tol]
    if v.size < 2:
        return 0
    s = np.sign(v)
    return int(np.sum(s[1:] != s[:-1]))


def sign_changes(f, grid) -> int:
    """Strict sign alternations of f along an ordered grid; near-zero values
    (|v| < 1e-12) are skipped."""
    grid = np.asarray(grid, dtype=float)
    if grid.size < 2:
        raise ValueError("grid needs at least 2 points")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    return sign_changes_array(f(grid))


@dataclass(frozen=True)
class RemezReport:
    ratio: float
    capacity: float


def remez_ratio(p: ChebyshevPoly, exc: Tuple[float, float], w: JacobiWeight,
                q, quad: QuadratureConfig = DEFAULT_QUAD) -> RemezReport:
    """Norm inflation when the set `exc` is removed from [-1, 1].

    Returns ||p w||_q / ||p w||_{q, complement} together with the capacity
    integral of `exc` against (1-x^2)^(-1/2).
    """
    q = NormOrder.of(q)
    desc = p.descriptor("remez_candidate")
    full = weighted_norm(desc, w, q, (-1.0, 1.0), quad)
    lo, hi = float(exc[0]), float(exc[1])
    if hi <= lo:   # empty exclusion set
        return RemezReport(1.0, 0.0)
    lo_c, hi_c = max(lo, -1.0), min(hi, 1.0)
    parts = []
    if lo_c > -1.0:
        parts.append(weighted_norm(desc, w, q, (-1.0, lo_c), quad))
    if hi_c < 1.0:
        parts.append(weighted_norm(desc, w, q, (hi_c, 1.0), quad))
    if q.is_inf:
        comp = max(parts) if parts else 0.0
    else:
        comp = float(np.sum(np.asarray(parts) ** q.q)) ** (1.0 / q.q) if parts else 0.0
    if comp < 1e-300:
        raise DivisionError("complement norm underflowed")
    capacity = math.asin(hi_c) - math.asin(lo_c)
    return RemezReport(full / comp, capacity)
