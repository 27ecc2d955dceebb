"""Sharp-rate formulas, log-log slope fitting, sweep runners, and the
two-sided (Jackson / inverse / derivative-transfer / embedding) checks."""

from __future__ import annotations

import hashlib
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple, Union

import numpy as np

from .core import (DEFAULT_QUAD, FunctionDescriptor, JacobiWeight, NormOrder,
                   QuadratureConfig, scale, weighted_norm)
from .differences import certify_k_monotone
from .errors import DegenerateFitError, SpecError
from .extremals import CatalogEntry
from .moduli import ModulusRequest, dt_modulus, main_part_modulus
from .approx import best_approx

WORKERS_ENV = "MODULUS_LAB_WORKERS"


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "")
    if raw.strip():
        return max(1, int(raw))
    return os.cpu_count() or 1


def _map_ordered(fn, items):
    """Map preserving order; fans out to threads when allowed."""
    items = list(items)
    n = min(worker_count(), len(items))
    if n <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# rate formulas


@dataclass(frozen=True)
class UpsilonSpec:
    k: int
    q: float
    p: float
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "q", NormOrder.of(self.q).q)
        object.__setattr__(self, "p", NormOrder.of(self.p).q)
        if self.k < 1:
            raise SpecError("k must be >= 1")
        if not (1.0 <= self.q < self.p):
            raise SpecError(f"need 1 <= q < p, got q={self.q}, p={self.p}")


def _inv(v: float) -> float:
    return 0.0 if math.isinf(v) else 1.0 / v


def upsilon(spec: UpsilonSpec, delta: float) -> float:
    """The sharp rate of the modulus over the k-monotone unit ball."""
    if not 0.0 < delta < 0.25:
        raise SpecError(f"delta must lie in (0, 1/4), got {delta}")
    k, q, p = spec.k, spec.q, spec.p
    iq, ip = _inv(q), _inv(p)
    special = k == 2 and q == 1.0 and math.isinf(p)
    if k >= 2 and not special:
        return delta ** (2.0 * iq - 2.0 * ip)
    if special:
        if spec.alpha == 0.0 and spec.beta == 0.0:
            return delta ** 2
        return delta ** 2 * abs(math.log(delta))
    # k == 1
    if p < 2.0 * q:
        return delta ** (2.0 * iq - 2.0 * ip)
    if p == 2.0 * q:
        return delta ** iq * abs(math.log(delta)) ** (iq / 2.0)
    return delta ** iq


RateValue = Union[float, Tuple[float, float]]


def mpoly_rate(k: int, q: float, p: float, alpha: float, beta: float,
               n: int) -> RateValue:
    """Best-approximation rate over the k-monotone unit ball; the two cases
    with an unresolved log factor return a (lower, upper) bracket."""
    if n < 1:
        raise SpecError("n must be >= 1")
    q, p = NormOrder.of(q).q, NormOrder.of(p).q
    if not (1.0 <= q < p):
        raise SpecError(f"need 1 <= q < p, got q={q}, p={p}")
    if alpha < 0.0 or beta < 0.0:
        raise SpecError("need alpha, beta >= 0")
    iq, ip = _inv(q), _inv(p)
    special = k == 2 and q == 1.0 and math.isinf(p)
    if k >= 2 and not special:
        return float(n) ** (-2.0 * iq + 2.0 * ip)
    if special:
        base = float(n) ** -2.0
        if alpha == 0.0 and beta == 0.0:
            return base
        return (base, base * math.log(n + 1.0))
    # k == 1
    if p == 2.0 * q:
        base = float(n) ** -iq
        return (base, base * math.log(n + 1.0) ** (iq / 2.0))
    return float(n) ** (-min(2.0 * iq - 2.0 * ip, iq))


# ---------------------------------------------------------------------------
# sweeps and fitting


@dataclass(frozen=True)
class SweepResult:
    abscissae: Tuple[float, ...]
    values: Tuple[float, ...]
    provenance: Tuple[str, str, str]   # module, operation, request hash

    def __post_init__(self):
        xs = np.asarray(self.abscissae)
        if xs.size and not (np.all(np.diff(xs) > 0) or np.all(np.diff(xs) < 0)):
            raise ValueError("abscissae must be strictly monotone")
        if any(v < 0 for v in self.values):
            raise ValueError("sweep values must be nonnegative")


def request_hash(payload: str) -> str:
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class RateFit:
    exponent: float
    log_power: float
    constant: float
    r_squared: float
    residual_max: float
    model: str


def fit_rate(sweep: SweepResult, model: str = "pure_power") -> RateFit:
    """Least squares of ln(value) on {1, ln x} or {1, ln x, ln|ln x|}."""
    if model not in ("pure_power", "power_log"):
        raise ValueError(f"unknown model {model!r}")
    xs = np.asarray(sweep.abscissae, dtype=float)
    vs = np.asarray(sweep.values, dtype=float)
    if xs.size < 5:
        raise DegenerateFitError("rate fit needs at least 5 points")
    if np.any(vs <= 0.0):
        raise DegenerateFitError("rate fit needs strictly positive values")
    lx = np.log(xs)
    cols = [np.ones_like(lx), lx]
    if model == "power_log":
        llx = np.log(np.abs(lx))
        if np.any(~np.isfinite(llx)):
            raise DegenerateFitError("abscissa too close to 1 for a log-log fit")
        cols.append(llx)
    X = np.column_stack(cols)
    y = np.log(vs)
    sol, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < X.shape[1]:
        raise DegenerateFitError("rank-deficient design matrix in rate fit")
    resid = y - X @ sol
    ss_res = float(np.sum(resid ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return RateFit(exponent=float(sol[1]),
                   log_power=float(sol[2]) if model == "power_log" else 0.0,
                   constant=float(math.exp(sol[0])),
                   r_squared=max(0.0, min(1.0, r2)),
                   residual_max=float(np.max(np.abs(resid))),
                   model=model)


def fit_rate_auto(sweep: SweepResult) -> RateFit:
    """Fit both models; keep the log term only when it earns its keep
    (residual_max reduced by at least 25%)."""
    plain = fit_rate(sweep, "pure_power")
    try:
        logged = fit_rate(sweep, "power_log")
    except DegenerateFitError:
        return plain
    if logged.residual_max <= 0.75 * plain.residual_max:
        return logged
    return plain


def family_sup_sweep(family: Callable[[float], CatalogEntry],
                     k: int, w: JacobiWeight, q, p,
                     deltas: Sequence[float],
                     certify: bool = True,
                     quad: QuadratureConfig = DEFAULT_QUAD,
                     h_samples: int = 64,
                     main_only: bool = False) -> SweepResult:
    """For each delta: build the delta-indexed extremal, scale it to unit
    weighted p-norm, and record its modulus at that delta."""
    p = NormOrder.of(p)
    deltas = sorted(deltas)

    def one(delta: float) -> float:
        entry = family(delta)
        desc = entry.descriptor
        if certify and desc.monotone_order is not None \
                and desc.monotone_source != "analytic":
            verdict = certify_k_monotone(desc, desc.monotone_order, trials=50)
            if not verdict:
                raise AssertionError(
                    f"{desc.name}: k-monotone certificate refuted at "
                    f"{verdict.witness}")
        nf = weighted_norm(desc, w, p, (-1.0, 1.0), quad)
        if nf <= 0.0:
            return 0.0
        req = ModulusRequest(k=k, delta=delta, weight=w, q=NormOrder.of(q),
                             h_samples=h_samples, quad=quad)
        g = scale(desc, 1.0 / nf)
        if main_only:
            return main_part_modulus(g, req)[0]
        return dt_modulus(g, req).total

    values = _map_ordered(one, deltas)
    tag = request_hash(f"family_sup k={k} w=({w.alpha},{w.beta}) q={q} p={p.q} "
                       f"deltas={list(deltas)}")
    return SweepResult(tuple(deltas), tuple(values),
                       ("rates", "family_sup_sweep", tag))


# ---------------------------------------------------------------------------
# two-sided checks


@dataclass(frozen=True)
class CheckSummary:
    name: str
    abscissae: Tuple[float, ...]
    ratios: Tuple[float, ...]
    max_over_median: float
    trend_slope: float
    passed: bool

    @staticmethod
    def from_ratios(name, abscissae, ratios,
                    ratio_cap: float = 20.0,
                    slope_band: float = 0.3) -> "CheckSummary":
        rv = np.asarray(ratios, dtype=float)
        if rv.size == 0:
            return CheckSummary(name, tuple(abscissae), (), 0.0, 0.0, True)
        mom = float(np.max(rv) / np.median(rv))
        if rv.size >= 3 and np.all(rv > 0):
            lx = np.log(np.asarray(abscissae, dtype=float))
            slope = float(np.polyfit(lx, np.log(rv), 1)[0])
        else:
            slope = 0.0
        passed = mom <= ratio_cap and abs(slope) <= slope_band
        return CheckSummary(name, tuple(abscissae), tuple(rv.tolist()),
                            mom, slope, passed)


def _modulus_total(f, k, delta, w, q, quad, h_samples=64) -> float:
    req = ModulusRequest(k=k, delta=delta, weight=w, q=NormOrder.of(q),
                         h_samples=h_samples, quad=quad)
    return dt_modulus(f, req).total


def jackson_check(f: FunctionDescriptor, k: int, w: JacobiWeight, q,
                  n_list: Sequence[int],
                  quad: QuadratureConfig = DEFAULT_QUAD,
                  h_samples: int = 64) -> CheckSummary:
    """Ratios E_n(f) / modulus(f, 1/n); bounded ratios witness the direct
    estimate.  Polynomial inputs of low degree give an empty (vacuous) check."""
    ns = [n for n in sorted(n_list) if n >= 2 * k]
    abscissae, ratios = [], []
    for n in ns:
        omega = _modulus_total(f, k, 1.0 / n, w, q, quad, h_samples)
        if omega <= 1e-12:
            continue
        err = best_approx(f, n, w, q, quad=quad).error
        abscissae.append(float(n))
        ratios.append(err / omega)
    return CheckSummary.from_ratios("jackson", abscissae, ratios)


def inverse_check(f: FunctionDescriptor, k: int, w: JacobiWeight, q,
                  deltas: Sequence[float],
                  quad: QuadratureConfig = DEFAULT_QUAD,
                  h_samples: int = 64) -> CheckSummary:
    """Ratios modulus(f, delta) / (delta^k sum_{i < 1/delta} (i+1)^{k-1} E_i)."""
    deltas = sorted(deltas)
    i_max = int(math.ceil(1.0 / min(deltas))) - 1
    errors = [best_approx(f, i, w, q, quad=quad).error for i in range(i_max + 1)]
    abscissae, ratios = [], []
    for delta in deltas:
        if delta > 1.0 / (2 * k):
            continue
        count = int(math.ceil(1.0 / delta))      # indices 0 <= i < 1/delta
        bound = delta ** k * sum((i + 1) ** (k - 1) * errors[i]
                                 for i in range(count))
        omega = _modulus_total(f, k, delta, w, q, quad, h_samples)
        if omega <= 1e-12 and bound <= 1e-12:
            continue
        abscissae.append(delta)
        ratios.append(omega / bound if bound > 0 else math.inf)
    return CheckSummary.from_ratios("inverse", abscissae, ratios)


def derivative_transfer_check(f: FunctionDescriptor, k: int, r: int,
                              w: JacobiWeight, q, deltas: Sequence[float],
                              quad: QuadratureConfig = DEFAULT_QUAD,
                              h_samples: int = 64) -> CheckSummary:
    """Ratios modulus_k(f, delta) / (delta^r modulus_{k-r}(f^(r), delta))
    with the derivative measured against w * phi^r."""
    if not 0 < r < k:
        raise ValueError("need 0 < r < k")
    fr = f.derivative(r)
    w_phi = w.times_phi(r)
    abscissae, ratios = [], []
    for delta in sorted(deltas):
        if delta > 1.0 / (2 * k):
            continue
        top = _modulus_total(f, k, delta, w, q, quad, h_samples)
        bot = delta ** r * _modulus_total(fr, k - r, delta, w_phi, q, quad,
                                          h_samples)
        if top <= 1e-12 and bot <= 1e-12:
            continue
        abscissae.append(delta)
        ratios.append(top / bot if bot > 0 else math.inf)
    return CheckSummary.from_ratios("derivative_transfer", abscissae, ratios)


@dataclass(frozen=True)
class EmbeddingReport:
    ratio: float
    vacuous: bool


def embedding_check(f: FunctionDescriptor, r: int, alpha: float, beta: float,
                    gamma: float, p,
                    quad: QuadratureConfig = DEFAULT_QUAD) -> EmbeddingReport:
    """Ratio ||w_{a-g, b-g} f^(r)||_p / ||w_{a,b} f^(r+1)||_p after shifting
    f^(r) to vanish at 0."""
    if gamma >= 1.0:
        raise ValueError("need gamma < 1")
    p = NormOrder.of(p)
    fr = f.derivative(r)
    fr1 = f.derivative(r + 1)
    offset = fr(0.0)
    shifted = FunctionDescriptor(
        rule=lambda x, _f=fr, _c=offset: _f(x) - _c,
        endpoint_exponents=(min(fr.endpoint_exponents[0], 0.0),
                            min(fr.endpoint_exponents[1], 0.0)),
        breakpoints=fr.breakpoints, name=f"shifted({fr.name})")
    num = weighted_norm(shifted, JacobiWeight(alpha - gamma, beta - gamma),
                        p, (-1.0, 1.0), quad)
    den = weighted_norm(fr1, JacobiWeight(alpha, beta), p, (-1.0, 1.0), quad)
    if num <= 1e-12 and den <= 1e-12:
        return EmbeddingReport(0.0, True)
    if den <= 0.0:
        return EmbeddingReport(math.inf, False)
    return EmbeddingReport(num / den, False)
