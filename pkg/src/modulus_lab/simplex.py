"""Dense two-phase simplex for the small LPs behind L1 and minimax fits.

Standard form min c.x subject to A x = b, x >= 0.  Pivoting uses Dantzig
pricing for speed and falls back to Bland's smallest-index rule (which cannot
cycle) once the objective stalls.  Chebyshev-Vandermonde columns on graded
grids are badly conditioned, so the tableau is refactorized from the original
matrix every few dozen pivots instead of being updated indefinitely.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import SolverStallError

_TOL = 1e-9
_PIVOT_TOL = 1e-11
_STALL_WINDOW = 40
_REFACTOR_EVERY = 60


@dataclass
class SimplexResult:
    x: np.ndarray
    objective: float
    status: str            # optimal | unbounded | infeasible
    iterations: int


def _pivot(T: np.ndarray, rhs: np.ndarray, row: int, col: int):
    piv = T[row, col]
    T[row] /= piv
    rhs[row] /= piv
    factors = T[:, col].copy()
    factors[row] = 0.0
    T -= np.outer(factors, T[row])
    rhs -= factors * rhs[row]


def _refactor(A0: np.ndarray, b0: np.ndarray, basis: List[int]):
    B = A0[:, basis]
    try:
        T = np.linalg.solve(B, A0)
        rhs = np.linalg.solve(B, b0)
    except np.linalg.LinAlgError:
        raise SolverStallError("simplex basis became singular")
    # clip the roundoff negativity a fresh factorization can introduce
    small = np.abs(rhs) < 1e-11
    rhs[small] = np.abs(rhs[small])
    return T, rhs


def _iterate(A0: np.ndarray, b0: np.ndarray, c: np.ndarray,
             basis: List[int], max_iter: int,
             complement: Optional[np.ndarray] = None):
    """Run simplex pivots; returns (status, rhs, iterations).

    `complement[j]`, when given, names a column that is the negation of
    column j (sign-split variable pairs).  In exact arithmetic such a column
    never prices in while its partner is basic; blocking it explicitly stops
    roundoff from pivoting a dependent column into the basis.
    """
    T, rhs = _refactor(A0, b0, basis)
    in_basis = np.zeros(A0.shape[1], dtype=bool)
    in_basis[basis] = True
    bland = False
    stalled = 0
    obj_prev = np.inf
    since_refactor = 0
    for it in range(max_iter):
        if since_refactor >= _REFACTOR_EVERY:
            T, rhs = _refactor(A0, b0, basis)
            since_refactor = 0
        y = c[basis] @ T
        reduced = c - y
        eligible = (reduced < -_TOL) & ~in_basis
        if complement is not None:
            partnered = complement >= 0
            eligible[partnered] &= ~in_basis[complement[partnered]]
        candidates = np.nonzero(eligible)[0]
        if candidates.size == 0:
            return "optimal", rhs, it
        obj = float(c[basis] @ rhs)
        if obj < obj_prev - 1e-12 * max(1.0, abs(obj_prev)):
            stalled = 0
        else:
            stalled += 1
            if stalled >= _STALL_WINDOW:
                bland = True
        obj_prev = obj
        if bland:
            enter = int(candidates[0])
        else:
            enter = int(candidates[np.argmin(reduced[candidates])])
        col = T[:, enter]
        rows = np.nonzero(col > _PIVOT_TOL)[0]
        if rows.size == 0:
            return "unbounded", rhs, it
        ratios = rhs[rows] / col[rows]
        best = np.min(ratios)
        tied = rows[ratios <= best + 1e-12]
        if bland:
            leave = int(tied[np.argmin(np.asarray(basis)[tied])])
        else:   # largest pivot element among ties, for stability
            leave = int(tied[np.argmax(col[tied])])
        _pivot(T, rhs, leave, enter)
        in_basis[basis[leave]] = False
        in_basis[enter] = True
        basis[leave] = enter
        since_refactor += 1
    raise SolverStallError(f"simplex exceeded {max_iter} iterations "
                           f"({A0.shape[0]} rows, {A0.shape[1]} columns)")


def sign_split_complement(total: int, pairs: Sequence[Tuple[int, int]]) -> np.ndarray:
    """Complement map for _iterate: pairs of mutually negated columns."""
    comp = np.full(total, -1, dtype=int)
    for a, b in pairs:
        comp[a], comp[b] = b, a
    return comp


def simplex_solve(c: np.ndarray, A: np.ndarray, b: np.ndarray,
                  basis: Optional[Sequence[int]] = None,
                  complement: Optional[np.ndarray] = None,
                  max_iter: int = 20000) -> SimplexResult:
    """Solve min c.x, A x = b, x >= 0.

    A caller-supplied `basis` must be feasible (nonsingular with nonnegative
    basic solution) after rows with negative b are negated; otherwise a
    phase-1 run with artificial variables finds one.
    """
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    neg = b < 0.0
    A[neg] *= -1.0
    b[neg] *= -1.0
    # deterministic lexicographic-style perturbation: zero rows of b make
    # every ratio tie at 0 and the iteration stalls in degenerate pivots
    scale = max(1.0, float(np.max(b))) if m else 1.0
    b = b + 1e-10 * scale * (np.arange(m) + 1.0) / m
    total_iters = 0
    if basis is not None:
        basis = list(basis)
    else:
        # phase 1: artificials with unit cost
        A1 = np.hstack([A, np.eye(m)])
        basis = list(range(n, n + m))
        c1 = np.concatenate([np.zeros(n), np.ones(m)])
        status, rhs, it = _iterate(A1, b, c1, basis, max_iter)
        total_iters += it
        if status != "optimal" or float(c1[basis] @ rhs) > 1e-7:
            return SimplexResult(np.zeros(n), np.inf, "infeasible", total_iters)
        if any(col >= n for col in basis):
            # leftover artificials sit in degenerate rows; replace them by any
            # original column with a nonzero tableau entry
            T, rhs = _refactor(A1, b, basis)
            for r, col in enumerate(list(basis)):
                if col >= n:
                    pivots = np.nonzero(np.abs(T[r, :n]) > _PIVOT_TOL)[0]
                    if pivots.size:
                        _pivot(T, rhs, r, int(pivots[0]))
                        basis[r] = int(pivots[0])
        if any(col >= n for col in basis):
            return SimplexResult(np.zeros(n), np.inf, "infeasible", total_iters)
    status, rhs, it = _iterate(A, b, c, basis, max_iter, complement)
    total_iters += it
    x = np.zeros(n)
    if status == "optimal":
        x[np.asarray(basis)] = np.maximum(rhs, 0.0)
    return SimplexResult(x, float(c @ x) if status == "optimal" else np.inf,
                         status, total_iters)


def _bounded_simplex(A: np.ndarray, b: np.ndarray, c: np.ndarray,
                     upper: np.ndarray, basis: np.ndarray, z: np.ndarray,
                     status: np.ndarray, max_iter: int) -> None:
    """Primal simplex for min c.z, A z = b, 0 <= z <= upper, in place.

    `basis` holds the nrows basic column indices, `z` the full variable vector
    and `status` the nonbasic bound flags (0 lower, 1 upper).  The basis matrix
    is small (one row per fit coefficient), so it is refactored from scratch
    every iteration: two dense solves per step, no accumulated update error.
    Dantzig pricing with a Bland fallback after a stall window guards against
    cycling on degenerate vertices.
    """
    nrows, ncols = A.shape
    in_basis = np.zeros(ncols, dtype=bool)
    in_basis[basis] = True
    bland = False
    stalled = 0
    obj_prev = np.inf
    for _ in range(max_iter):
        B = A[:, basis]
        try:
            y = np.linalg.solve(B.T, c[basis])
        except np.linalg.LinAlgError:
            raise SolverStallError("bounded simplex basis became singular")
        d = c - y @ A
        enterable = ~in_basis & (((status == 0) & (d < -_TOL))
                                 | ((status == 1) & (d > _TOL)))
        candidates = np.nonzero(enterable)[0]
        if candidates.size == 0:
            return
        obj = float(c @ z)
        if obj < obj_prev - 1e-12 * max(1.0, abs(obj_prev)):
            stalled = 0
        else:
            stalled += 1
            if stalled >= _STALL_WINDOW:
                bland = True
        obj_prev = obj
        if bland:
            enter = int(candidates[0])
        else:
            enter = int(candidates[np.argmax(np.abs(d[candidates]))])
        sigma = 1.0 if status[enter] == 0 else -1.0
        t = sigma * np.linalg.solve(B, A[:, enter])
        # step limits: basic var hits 0, basic var hits its upper bound,
        # or the entering var flips to its own opposite bound
        pos = np.nonzero(t > _PIVOT_TOL)[0]
        neg = np.nonzero(t < -_PIVOT_TOL)[0]
        rows = np.concatenate([pos, neg])
        to_bound = np.concatenate([np.zeros(pos.size, dtype=np.int8),
                                   np.ones(neg.size, dtype=np.int8)])
        ratios = np.concatenate([
            np.maximum(z[basis[pos]], 0.0) / t[pos],
            np.maximum(upper[basis[neg]] - z[basis[neg]], 0.0) / (-t[neg])])
        theta = upper[enter]
        leave = -1
        leave_to = 0
        if rows.size:
            best = float(np.min(ratios))
            if best < theta - 1e-15:
                near = np.nonzero(ratios <= best + 1e-12)[0]
                if bland:
                    i = int(near[np.argmin(basis[rows[near]])])
                else:
                    i = int(near[np.argmax(np.abs(t[rows[near]]))])
                theta = max(float(ratios[i]), 0.0)
                leave, leave_to = int(rows[i]), int(to_bound[i])
        if not np.isfinite(theta):
            raise SolverStallError("bounded simplex step is unbounded")
        theta = max(theta, 0.0)
        z[basis] -= theta * t
        np.clip(z[basis], 0.0, None, out=z[basis])
        if leave < 0:
            # bound flip: entering variable crosses to its other bound
            z[enter] = upper[enter] - z[enter] if status[enter] == 1 else theta
            status[enter] = 1 - status[enter]
            continue
        z[enter] = theta if sigma > 0 else upper[enter] - theta
        out = int(basis[leave])
        z[out] = upper[out] if leave_to == 1 else 0.0
        status[out] = leave_to
        in_basis[out] = False
        in_basis[enter] = True
        basis[leave] = enter
    raise SolverStallError(f"bounded simplex exceeded {max_iter} iterations")


def l1_fit(design: np.ndarray, values: np.ndarray,
           weights: np.ndarray, max_iter: int = 20000) -> np.ndarray:
    """Coefficients minimizing sum_i weights_i |values_i - design_i . a|.

    Works on the dual: max f.y subject to V^T y = 0 and |y_i| <= w_i, which
    after the shift z = y + w is a bounded-variable program with one row per
    coefficient instead of one per grid point.  Phase 1 uses signed artificial
    columns; the fitted coefficients are recovered by interpolating the rows
    whose dual variable is strictly inside its bounds (zero residual there by
    complementary slackness), and the duality gap is checked before returning.
    """
    V = np.asarray(design, dtype=float)
    wts = np.asarray(weights, dtype=float)
    wts = wts / np.max(wts)
    f = np.asarray(values, dtype=float)
    live = wts > 0.0   # zero-weight rows force y_i = 0 and drop out
    V, wts, f = V[live], wts[live], f[live]
    m, ncoef = V.shape
    # graded bound perturbation: keeps degenerate vertices (many dual
    # variables exactly at a bound) from tying in the ratio test
    wts = wts * (1.0 + 1e-9 * (np.arange(m) + 1.0) / m)
    A = np.hstack([V.T, np.zeros((ncoef, ncoef))])
    b = V.T @ wts
    for r in range(ncoef):
        A[r, m + r] = 1.0 if b[r] >= 0.0 else -1.0
    upper = np.concatenate([2.0 * wts, np.full(ncoef, np.inf)])
    z = np.zeros(m + ncoef)
    z[m:] = np.abs(b)
    status = np.zeros(m + ncoef, dtype=np.int8)
    basis = np.arange(m, m + ncoef)
    c1 = np.concatenate([np.zeros(m), np.ones(ncoef)])
    _bounded_simplex(A, b, c1, upper, basis, z, status, max_iter)
    if float(np.sum(z[m:])) > 1e-7:
        raise SolverStallError("L1 dual phase 1 did not reach feasibility")
    # phase 2: artificials pinned at zero, maximize f.y = f.(z - w)
    upper[m:] = 0.0
    z[m:] = 0.0
    c2 = np.concatenate([-f, np.zeros(ncoef)])
    _bounded_simplex(A, b, c2, upper, basis, z, status, max_iter)
    y = z[:m] - wts
    interior = np.abs(y) < wts * (1.0 - 1e-9)
    if np.count_nonzero(interior) < ncoef:
        interior |= np.isin(np.arange(m + ncoef), basis)[:m]
    coeffs, *_ = np.linalg.lstsq(V[interior], f[interior], rcond=None)
    primal = float(np.sum(wts * np.abs(f - V @ coeffs)))
    dual = float(f @ y)
    if primal - dual > 1e-6 * max(1.0, primal):
        raise SolverStallError(
            f"L1 duality gap {primal - dual:.3e} exceeds tolerance")
    return coeffs


def minimax_fit(design: np.ndarray, values: np.ndarray,
                weights: np.ndarray) -> np.ndarray:
    """Coefficients minimizing max_i weights_i |values_i - design_i . a|.

    Formulated with one epsilon variable and slack columns.  Pivoting epsilon
    into the most violated row makes the slack basis feasible immediately, so
    no phase-1 pass is needed even though the raw right-hand side changes
    sign.  Used as the fallback when the exchange iteration stalls.
    """
    m, ncoef = design.shape
    wts = np.asarray(weights, dtype=float)
    wd = design * wts[:, None]
    wv = np.asarray(values, dtype=float) * wts
    rows = 2 * m
    e_col = 2 * ncoef
    A = np.hstack([np.vstack([np.hstack([-wd, wd]), np.hstack([wd, -wd])]),
                   -np.ones((rows, 1)), np.eye(rows)])
    b = np.concatenate([-wv, wv])
    c = np.concatenate([np.zeros(2 * ncoef), [1.0], np.zeros(rows)])
    basis = list(range(e_col + 1, e_col + 1 + rows))
    worst = int(np.argmin(b))
    if b[worst] < 0.0:
        basis[worst] = e_col
    comp = sign_split_complement(A.shape[1],
                                 [(j, ncoef + j) for j in range(ncoef)])
    res = simplex_solve(c, A, b, basis=basis, complement=comp)
    if res.status != "optimal":
        raise SolverStallError(f"minimax fit LP ended with status {res.status}")
    return res.x[:ncoef] - res.x[ncoef:2 * ncoef]
