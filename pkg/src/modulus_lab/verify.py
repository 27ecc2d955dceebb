"""Runtime verification suites behind `verify --suite ...`.

Each suite re-checks the invariants its module promises, at fixed seed, and
returns structured results.  Failure messages name the invariant and the
anchor it instantiates so a red run can be traced without rerunning by hand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List

import numpy as np

from .approx import best_approx
from .chebyshev import ChebyshevPoly, cheb_vandermonde
from .core import (DEFAULT_QUAD, JacobiWeight, NormOrder,
                   from_callable, phi, scale, weight_eval, weighted_norm)
from .differences import (certify_k_monotone, difference, DifferenceSpec,
                          divided_difference, mplus_split, taylor_truncation)
from .errors import ModulusLabError
from .extremals import catalog_get, chebyshev_partition, d_interval, rho
from .kernels import (KernelPoint, a_kernel, a_kernel_bound_ratio,
                      forward_image, psi, psi_derivative)
from .moduli import ModulusRequest, boundary_modulus, dt_modulus
from .rates import (UpsilonSpec, family_sup_sweep, fit_rate,
                    mpoly_rate, upsilon)

DEFAULT_SEED = 42


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str


def _collect(suite: str, checks) -> List[CheckResult]:
    """Run (name, thunk) pairs; a thunk returns (passed, detail) or raises."""
    out = []
    for name, thunk in checks:
        try:
            passed, detail = thunk()
        except ModulusLabError as exc:
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        out.append(CheckResult(suite, name, bool(passed), detail))
    return out


def _within(value: float, target: float, tol: float) -> bool:
    return abs(value - target) <= tol


# ---------------------------------------------------------------------------
# core


def suite_core(seed: int = DEFAULT_SEED) -> List[CheckResult]:
    rng = np.random.default_rng(seed)

    def reciprocal_weights():
        worst = 0.0
        xs = rng.uniform(-0.999, 0.999, 200)
        for (a, b) in ((0.3, 0.7), (1.2, 0.0), (0.5, 0.5)):
            prod = (weight_eval(JacobiWeight(a, b), xs)
                    * weight_eval(JacobiWeight(-a, -b), xs))
            worst = max(worst, float(np.max(np.abs(prod - 1.0))))
        return worst <= 1e-14, f"max |w*w_inv - 1| = {worst:.2e}"

    def norm_monotone():
        f = from_callable(lambda x: x * x, name="x^2")
        g = from_callable(lambda x: np.ones_like(np.asarray(x, float)), name="one")
        ok, detail = True, []
        for q in (1, 2, "inf"):
            nf = weighted_norm(f, JacobiWeight(0.3, 0.3), NormOrder.of(q),
                               (-1.0, 1.0), DEFAULT_QUAD)
            ng = weighted_norm(g, JacobiWeight(0.3, 0.3), NormOrder.of(q),
                               (-1.0, 1.0), DEFAULT_QUAD)
            ok &= nf <= ng + 1e-12
            detail.append(f"q={q}: {nf:.4f} <= {ng:.4f}")
        return ok, "; ".join(detail)

    def sup_norm_vs_dense_max():
        poly = ChebyshevPoly.from_coeffs([0.2, -1.0, 0.3, 0.0, 0.7])
        est = weighted_norm(poly.descriptor(), JacobiWeight(0.0, 0.0),
                            NormOrder.of("inf"), (-1.0, 1.0), DEFAULT_QUAD)
        dense = float(np.max(np.abs(poly(np.linspace(-1, 1, 200001)))))
        rel = abs(est - dense) / dense
        return rel <= 1e-10, f"sup-norm vs dense-grid max: rel diff {rel:.2e}"

    def norm_reflection():
        f = catalog_get("heaviside").descriptor
        fr = from_callable(lambda x, _f=f: _f(-np.asarray(x, float)),
                           name="reflected")
        ok, detail = True, []
        for q in (1, 2):
            left = weighted_norm(f, JacobiWeight(0.5, 1.0), NormOrder.of(q),
                                 (-1.0, 1.0), DEFAULT_QUAD)
            right = weighted_norm(fr, JacobiWeight(1.0, 0.5), NormOrder.of(q),
                                  (-1.0, 1.0), DEFAULT_QUAD)
            rel = abs(left - right) / left
            ok &= rel <= 1e-6
            detail.append(f"q={q}: rel {rel:.2e}")
        return ok, "norm symmetry under x -> -x with swapped exponents; " \
            + "; ".join(detail)

    def singular_self_convergence():
        f = from_callable(lambda x: (1.0 - np.asarray(x, float) ** 2) ** -0.4,
                          endpoint_exponents=(-0.4, -0.4), name="singular")
        w = JacobiWeight(0.0, 0.0)
        base = weighted_norm(f, w, NormOrder.of(1), (-1.0, 1.0),
                             DEFAULT_QUAD.refined(1))
        fine = weighted_norm(f, w, NormOrder.of(1), (-1.0, 1.0),
                             DEFAULT_QUAD.refined(2))
        rel = abs(base - fine) / fine
        return rel <= 0.005, f"refined-mesh self-convergence: rel {rel:.2e}"

    return _collect("core", [
        ("weight_reciprocal_product", reciprocal_weights),
        ("norm_monotone_in_integrand", norm_monotone),
        ("sup_norm_matches_dense_max", sup_norm_vs_dense_max),
        ("norm_reflection_symmetry", norm_reflection),
        ("singular_norm_self_convergence", singular_self_convergence),
    ])


# ---------------------------------------------------------------------------
# differences


def suite_differences(seed: int = DEFAULT_SEED) -> List[CheckResult]:
    rng = np.random.default_rng(seed)

    def annihilates_low_degree():
        worst = 0.0
        xs = np.linspace(-0.9, 0.9, 200)
        for k in (1, 2, 3, 4):
            coeffs = rng.standard_normal(k)   # degree k-1
            poly = ChebyshevPoly.from_coeffs(coeffs)
            d = difference(poly.descriptor(), DifferenceSpec(order=k, step=0.01),
                           xs)
            worst = max(worst, float(np.max(np.abs(d))))
        return worst <= 1e-11, \
            f"k-th difference of degree k-1 polynomials: max {worst:.2e}"

    def mean_value_bracket():
        f = from_callable(lambda x: np.exp(np.asarray(x, float)), name="exp")
        ok, worst = True, 0.0
        for k in (1, 2, 3):
            h = 0.05
            for x in np.linspace(-0.7, 0.7, 25):
                d = float(difference(f, DifferenceSpec(order=k, step=h), x))
                lo = math.exp(x - k * h / 2)
                hi = math.exp(x + k * h / 2)
                val = d / h ** k
                ok &= lo - 1e-6 <= val <= hi + 1e-6
                worst = max(worst, max(lo - val, val - hi))
        return ok, f"difference quotient vs derivative range: excess {worst:.2e}"

    def permutation_invariance():
        nodes = np.array([-0.8, -0.3, 0.1, 0.45, 0.9])
        f = from_callable(lambda x: np.sin(2.0 * np.asarray(x, float)),
                          name="sin2x")
        ref = divided_difference(nodes, f)
        worst = 0.0
        for _ in range(100):
            perm = rng.permutation(nodes)
            worst = max(worst, abs(divided_difference(perm, f) - ref)
                        / max(abs(ref), 1e-300))
        return worst <= 1e-12, f"divided difference shuffle: rel {worst:.2e}"

    def split_members():
        exp_rule = lambda x: np.exp(np.asarray(x, float))
        f = from_callable(exp_rule, derivatives=(exp_rule, exp_rule),
                          name="exp")
        ok, detail = True, []
        for k in (2, 3):
            f1, f2 = mplus_split(f, k)
            for part in (f1, f2):
                v = certify_k_monotone(part, k, trials=100, seed=seed)
                left = float(np.max(np.abs(part(np.linspace(-1.0, 0.0, 101)))))
                ok &= bool(v) and left <= 1e-10
                detail.append(f"k={k} {part.name}: certified={bool(v)} "
                              f"left-tail max {left:.1e}")
        return ok, "; ".join(detail)

    def truncation_norm_bound():
        cases = [
            (catalog_get("truncated_power", k=2, eps=0.25, beta=0.0,
                         p=2).descriptor, 2, 2, JacobiWeight(0.0, 0.0)),
            (catalog_get("truncated_power_origin", k=3).descriptor, 3, "inf",
             JacobiWeight(0.0, 0.0)),
            (catalog_get("inverse_power", beta=0.5).descriptor, 2, 2,
             JacobiWeight(0.0, 0.5)),
            (catalog_get("inverse_power", beta=0.5).descriptor, 2, 1,
             JacobiWeight(0.0, 0.5)),
        ]
        ratios = []
        for f, k, p, w in cases:
            t = taylor_truncation(f, k)
            if t.is_zero():
                ratios.append(0.0)
                continue
            num = weighted_norm(t.descriptor(), w, NormOrder.of(p),
                                (-1.0, 1.0), DEFAULT_QUAD)
            den = weighted_norm(f, w, NormOrder.of(p), (-1.0, 1.0), DEFAULT_QUAD)
            ratios.append(num / den)
        top = max(ratios)
        nonzero = sum(1 for r in ratios if r > 0)
        return top <= 20.0 and nonzero >= 2, \
            f"Taylor-part norm over function norm: max ratio {top:.3f} " \
            f"({nonzero} nonvacuous cases)"

    return _collect("differences", [
        ("difference_annihilates_low_degree", annihilates_low_degree),
        ("difference_mean_value_bracket", mean_value_bracket),
        ("divided_difference_permutation", permutation_invariance),
        ("split_parts_are_k_monotone", split_members),
        ("taylor_truncation_norm_bound", truncation_norm_bound),
    ])


# ---------------------------------------------------------------------------
# moduli


def suite_moduli(seed: int = DEFAULT_SEED) -> List[CheckResult]:
    w00 = JacobiWeight(0.0, 0.0)

    def monotone_in_delta():
        ok, detail = True, []
        for name, kw, k in (("heaviside", {}, 1),
                            ("truncated_power_origin", {"k": 2}, 2)):
            f = catalog_get(name, **kw).descriptor
            vals = [dt_modulus(f, ModulusRequest(k=k, delta=d, weight=w00,
                                                 q=NormOrder.of(1))).total
                    for d in (2.0 ** -j for j in range(8, 2, -1))]
            good = all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
            ok &= good
            detail.append(f"{name}: nondecreasing={good}")
        return ok, "; ".join(detail)

    def homogeneous():
        f = catalog_get("truncated_power_origin", k=2).descriptor
        req = ModulusRequest(k=2, delta=0.1, weight=w00, q=NormOrder.of(2))
        base = dt_modulus(f, req).total
        scaled = dt_modulus(scale(f, 3.7), req).total
        rel = abs(scaled - 3.7 * base) / (3.7 * base)
        return rel <= 1e-12, f"modulus homogeneity: rel {rel:.2e}"

    def reflection():
        f = catalog_get("heaviside").descriptor
        fr = from_callable(lambda x, _f=f: -_f(-np.asarray(x, float)),
                           breakpoints=(0.0,), name="reflected")
        a = dt_modulus(f, ModulusRequest(k=1, delta=0.1,
                                         weight=JacobiWeight(0.5, 1.0),
                                         q=NormOrder.of(1))).total
        b = dt_modulus(fr, ModulusRequest(k=1, delta=0.1,
                                          weight=JacobiWeight(1.0, 0.5),
                                          q=NormOrder.of(1))).total
        rel = abs(a - b) / a
        return rel <= 0.02, f"modulus reflection with swapped weight: rel {rel:.2%}"

    def subadditive():
        f = catalog_get("heaviside").descriptor
        g = catalog_get("truncated_power_origin", k=2).descriptor
        s = from_callable(lambda x, _f=f, _g=g: _f(x) + _g(x),
                          breakpoints=(0.0,), name="sum")
        req = ModulusRequest(k=1, delta=0.05, weight=w00, q=NormOrder.of(1))
        lhs = dt_modulus(s, req).total
        rhs = dt_modulus(f, req).total + dt_modulus(g, req).total
        return lhs <= rhs + 1e-10, f"subadditivity: {lhs:.6f} <= {rhs:.6f}"

    def bounded_by_norm():
        ok, detail = True, []
        for name, kw, k in (("heaviside", {}, 1),
                            ("truncated_power_origin", {"k": 2}, 2),
                            ("zeta_spline", {"m": 4, "lam": 1.5, "p": 2}, 1)):
            f = catalog_get(name, **kw).descriptor
            for q in (1, 2):
                total = dt_modulus(f, ModulusRequest(
                    k=k, delta=1.0 / (4 * k), weight=w00,
                    q=NormOrder.of(q))).total
                nrm = weighted_norm(f, w00, NormOrder.of(q), (-1.0, 1.0),
                                    DEFAULT_QUAD)
                ratio = total / nrm if nrm > 0 else 0.0
                ok &= ratio <= 2.0 ** k + 1.0
                detail.append(f"{name} q={q}: {ratio:.3f}")
        return ok, "modulus over norm (cap 2^k+1): " + "; ".join(detail)

    def boundary_vs_strip_norm():
        ok, detail = True, []
        f = catalog_get("truncated_power", k=2, eps=0.125, beta=0.0,
                        p=2).descriptor
        for delta in (0.1, 0.05):
            req = ModulusRequest(k=2, delta=delta, weight=w00,
                                 q=NormOrder.of(1))
            back = boundary_modulus(f, req, "backward")[0]
            strip = weighted_norm(f, w00, NormOrder.of(1),
                                  (1.0 - 8 * delta * delta, 1.0), DEFAULT_QUAD)
            ratio = back / strip if strip > 0 else 0.0
            ok &= ratio <= 2.0 ** 2 + 1.0
            detail.append(f"delta={delta}: {ratio:.3f}")
        return ok, "backward part over boundary-strip norm: " + "; ".join(detail)

    return _collect("moduli", [
        ("modulus_monotone_in_delta", monotone_in_delta),
        ("modulus_homogeneous", homogeneous),
        ("modulus_reflection_symmetry", reflection),
        ("modulus_subadditive", subadditive),
        ("modulus_bounded_by_norm", bounded_by_norm),
        ("boundary_part_bounded_by_strip_norm", boundary_vs_strip_norm),
    ])


# ---------------------------------------------------------------------------
# kernels


def suite_kernels(seed: int = DEFAULT_SEED) -> List[CheckResult]:

    def roundtrip():
        eta = 0.08
        xs = np.linspace(-1.0 + eta, 1.0 - eta, 100)
        lams = np.linspace(-math.sqrt(2 * eta), math.sqrt(2 * eta), 20)
        worst = 0.0
        for lam in lams:
            y = forward_image(lam, xs)
            worst = max(worst, float(np.max(np.abs(psi(lam, y) - xs))))
        return worst <= 1e-10, f"psi inverts x -> x + lam*phi(x): max {worst:.2e}"

    def phi_linear_bound():
        ok, detail = True, []
        for eta in (0.01, 0.1):
            xs = np.linspace(-1.0 + eta, 1.0 - eta, 2001)
            lhs = phi(xs)
            rhs = math.sqrt(2.0 / eta) * (1.0 - np.abs(xs))
            good = bool(np.all(lhs <= rhs + 1e-12))
            ok &= good
            detail.append(f"eta={eta}: {good}")
        return ok, "phi bounded by linear distance to the endpoints; " \
            + "; ".join(detail)

    def shifted_distance_bracket():
        eta = 0.08
        xs = np.linspace(-1.0 + eta, 1.0 - eta, 500)
        ok = True
        for lam in np.linspace(-math.sqrt(eta) / 2, math.sqrt(eta) / 2, 9):
            moved = 1.0 - (xs + lam * phi(xs))
            ok &= bool(np.all(moved >= (1.0 - xs) / 4 - 1e-12))
            ok &= bool(np.all(moved <= 2.0 * (1.0 - xs) + 1e-12))
        return ok, "distance to +1 changes by a factor in [1/4, 2]"

    def kernel_bound_stable():
        ok, detail = True, []
        for k in (1, 2, 3):
            for beta in (-0.25, 0.0, 0.5, 1.0):
                sups = []
                for lev in (9, 10):
                    h = 2.0 ** -lev
                    ys = np.linspace(0.0, 1.0 - 2 * k * k * h * h, 200)
                    sups.append(max(a_kernel_bound_ratio(
                        KernelPoint(y=float(y), beta=beta, k=k, h=h))
                        for y in ys))
                change = abs(sups[0] - sups[1]) / max(sups)
                ok &= change < 0.10
                detail.append(f"k={k},b={beta}: {change:.4f}")
        return ok, "sup |A_k|/(h^k theta^(2b-k)) drift over finest h: " \
            + "; ".join(detail)

    def change_of_variable():
        eta, lam = 0.08, 0.1
        g = JacobiWeight(0.5, 0.5)
        xs, ws = np.polynomial.legendre.leggauss(12)

        def integrate(fn, a, b, cuts=()):
            edges = np.unique(np.concatenate(
                [np.linspace(a, b, 301), [c for c in cuts if a < c < b]]))
            total = 0.0
            for lo, hi in zip(edges[:-1], edges[1:]):
                mid, half = (lo + hi) / 2, (hi - lo) / 2
                total += half * float(np.sum(ws * fn(mid + half * xs)))
            return total

        def chi(y):
            y = np.asarray(y, float)
            return ((y > 0.0) & (y <= 1.0)).astype(float)

        # the x where x + lam*phi(x) crosses 0 is psi(lam, 0)
        cut = psi(lam, 0.0)
        lhs = integrate(lambda x: weight_eval(g, x) * chi(x + lam * phi(x)),
                        -1.0 + eta, 1.0 - eta, cuts=(cut,))
        lo, hi = forward_image(lam, -1.0 + eta), forward_image(lam, 1.0 - eta)
        rhs = integrate(lambda y: weight_eval(g, psi(lam, y)) * chi(y)
                        * np.array([psi_derivative(lam, float(v))
                                    for v in np.atleast_1d(y)]),
                        lo, hi, cuts=(0.0,))
        rel = abs(lhs - rhs) / abs(lhs)
        return rel <= 1e-3, f"substitution identity: rel {rel:.2e}"

    def zero_and_symmetric_cases():
        detail = []
        worst_zero = 0.0
        for k in (1, 3):
            h = 2.0 ** -9
            for y in np.linspace(0.0, 1.0 - 2 * k * k * h * h, 60):
                worst_zero = max(worst_zero, abs(a_kernel(
                    KernelPoint(y=float(y), beta=-0.5, k=k, h=h))))
        detail.append(f"odd-order with exponent -1/2: max {worst_zero:.1e}")
        worst_sym = 0.0
        for y in (0.0, 0.4, 0.9):
            th = phi(y)
            for t in np.linspace(-3.0, 3.0, 61):
                from .kernels import g_kernel
                sym = 0.5 * (g_kernel(0.0, th, y, t) + g_kernel(0.0, th, y, -t))
                worst_sym = max(worst_sym, abs(sym - 1.0 / (1.0 + t * t * th * th)))
        detail.append(f"symmetrized kernel closed form: max {worst_sym:.1e}")
        return worst_zero <= 1e-10 and worst_sym <= 1e-12, "; ".join(detail)

    return _collect("kernels", [
        ("psi_roundtrip", roundtrip),
        ("phi_linear_endpoint_bound", phi_linear_bound),
        ("shifted_endpoint_distance_bracket", shifted_distance_bracket),
        ("kernel_bound_ratio_stable", kernel_bound_stable),
        ("change_of_variable_identity", change_of_variable),
        ("kernel_special_cases", zero_and_symmetric_cases),
    ])


# ---------------------------------------------------------------------------
# extremals


def suite_extremals(seed: int = DEFAULT_SEED) -> List[CheckResult]:

    def catalog_certified():
        entries = [
            catalog_get("heaviside"),
            catalog_get("truncated_power", k=2, eps=0.25, beta=0.0, p=2),
            catalog_get("truncated_power", k=3, eps=0.125, beta=0.5, p="inf"),
            catalog_get("inverse_power", beta=0.5),
            catalog_get("zeta_spline", m=4, lam=1.5, p=2),
            catalog_get("truncated_power_origin", k=1),
            catalog_get("truncated_power_origin", k=2),
            catalog_get("truncated_power_origin", k=3),
            catalog_get("moving_truncated_power", k=2, n=8),
        ]
        ok, detail = True, []
        for entry in entries:
            d = entry.descriptor
            if d.monotone_order is None:
                continue
            v = certify_k_monotone(d, d.monotone_order, trials=500, seed=seed)
            ok &= bool(v)
            detail.append(f"{d.name}: {bool(v)}")
        return ok, "; ".join(detail)

    def normalization_stable():
        ok, detail = True, []
        w00 = JacobiWeight(0.0, 0.0)
        for p in (2, "inf"):
            ratios = []
            for eps in (2.0 ** -j for j in range(2, 7)):
                f = catalog_get("truncated_power", k=2, eps=eps, beta=0.0,
                                p=p).descriptor
                ratios.append(weighted_norm(f, w00, NormOrder.of(p),
                                            (-1.0, 1.0), DEFAULT_QUAD))
            inside = all(0.25 <= r <= 4.0 for r in ratios)
            drift = (max(ratios) - min(ratios)) / max(ratios)
            ok &= inside and drift < 0.10
            detail.append(f"p={p}: [{min(ratios):.3f},{max(ratios):.3f}] "
                          f"drift {drift:.3f}")
        zr = []
        for m in (4, 5, 6, 7):
            f = catalog_get("zeta_spline", m=m, lam=1.5, p=2).descriptor
            zr.append(weighted_norm(f, w00, NormOrder.of(2), (-1.0, 1.0),
                                    DEFAULT_QUAD))
        inside = all(0.25 <= r <= 4.0 for r in zr)
        ok &= inside
        detail.append(f"spline norms [{min(zr):.3f},{max(zr):.3f}]")
        return ok, "unit-sphere scaling: " + "; ".join(detail)

    def spline_shape():
        f = catalog_get("zeta_spline", m=5, lam=1.5, p=2).descriptor
        xs = np.linspace(-1.0, 1.0 - 1e-9, 4001)
        vals = f(xs)
        nondec = bool(np.all(np.diff(vals) >= -1e-12))
        left = float(np.max(np.abs(vals[xs <= 0.0])))
        return nondec and left <= 1e-12, \
            f"nondecreasing={nondec}, left-tail max {left:.1e}"

    def moved_interval_containment():
        ok, worst = True, 0.0
        for n in (8, 16, 32):
            part = chebyshev_partition(n)
            for h in (1.0 / (2 * n), 1.0 / (4 * n)):
                for i in range(1, n):
                    lo, hi = d_interval(part, i, h)
                    margin = 1.0 - 2.0 * h * h
                    ok &= -margin - 1e-12 <= lo <= hi <= margin + 1e-12
                    worst = max(worst, max(abs(lo), abs(hi)) - margin)
        return ok, f"moved intervals stay in the shrunk domain " \
            f"(max excess {worst:.2e})"

    def rho_vs_interval_length():
        ok = True
        for n in (8, 16, 32):
            part = chebyshev_partition(n)
            for i in range(1, n + 1):
                hi, lo = part.interval(i)[1], part.interval(i)[0]
                length = hi - lo
                xs = np.linspace(lo, hi, 9)
                ok &= bool(np.all(rho(n, xs) <= length + 1e-12))
        return ok, "rho_n(x) <= |I_i| for x in I_i"

    return _collect("extremals", [
        ("catalog_entries_certified", catalog_certified),
        ("catalog_normalization_stable", normalization_stable),
        ("spline_nondecreasing_vanishing_left", spline_shape),
        ("moved_intervals_contained", moved_interval_containment),
        ("rho_below_interval_length", rho_vs_interval_length),
    ])


# ---------------------------------------------------------------------------
# approx


def suite_approx(seed: int = DEFAULT_SEED) -> List[CheckResult]:
    w00 = JacobiWeight(0.0, 0.0)

    def equioscillation():
        f = catalog_get("truncated_power_origin", k=2).descriptor
        res = best_approx(f, 10, w00, "inf")
        alts = int(res.residual_stats["alternations"])
        amp = res.residual_stats.get("reference_error",
                                     res.residual_stats["grid_max"])
        rel = abs(res.error - amp) / res.error
        ok = alts >= 11 and rel <= 0.01
        detail = f"alternations {alts} (need >= 11), amplitude rel {rel:.2%}"
        wres = best_approx(f, 10, JacobiWeight(0.5, 1.0), "inf")
        walts = int(wres.residual_stats["alternations"])
        ok &= walts >= 11
        return ok, detail + f"; weighted alternations {walts}"

    def monotone_in_degree():
        ok, detail = True, []
        for name, kw in (("heaviside", {}),
                         ("truncated_power_origin", {"k": 2}),
                         ("inverse_power", {"beta": 0.25})):
            f = catalog_get(name, **kw).descriptor
            errs = [best_approx(f, n, w00, 2).error for n in range(2, 33, 3)]
            good = all(b <= a + 1e-10 for a, b in zip(errs, errs[1:]))
            ok &= good
            detail.append(f"{name}: {good}")
        return ok, "; ".join(detail)

    def irls_cross_validation():
        from .approx import _fit_grid, _irls, _weighted_lstsq
        f = catalog_get("truncated_power_origin", k=2).descriptor
        nodes, qwts = _fit_grid(f, 12, DEFAULT_QUAD)
        fv = f(nodes)
        wv = weight_eval(w00, nodes)
        V = cheb_vandermonde(nodes, 12)
        direct = _weighted_lstsq(V, fv, qwts * wv * wv)
        iterated, _ = _irls(V, fv, qwts, wv, 2.0)
        obj = lambda c: float(np.sqrt(np.sum(qwts * (wv * (fv - V @ c)) ** 2)))
        rel = abs(obj(direct) - obj(iterated)) / obj(direct)
        return rel <= 1e-9, f"IRLS at q=2 vs direct least squares: rel {rel:.2e}"

    def grid_refinement_stable():
        ok, detail = True, []
        cases = [("heaviside", {}, 16, 1), ("heaviside", {}, 16, "inf"),
                 ("truncated_power_origin", {"k": 3}, 32, 1)]
        for name, kw, n, q in cases:
            f = catalog_get(name, **kw).descriptor
            base = best_approx(f, n, w00, q).error
            fine = best_approx(f, n, w00, q,
                               grid_size=2 * max(20 * (n + 1), 512)).error
            rel = abs(fine - base) / base
            ok &= rel < 0.005
            detail.append(f"{name} n={n} q={q}: {rel:.2%}")
        return ok, "doubled discretization grid: " + "; ".join(detail)

    def lower_bound_witness():
        ok, detail = True, []
        for k in (1, 2):
            f = catalog_get("truncated_power_origin", k=k).descriptor
            scaled = [best_approx(f, n, w00, "inf").error * n ** (k - 1)
                      for n in (8, 16, 32, 64)]
            stable = min(scaled) / max(scaled)
            ok &= min(scaled) > 0 and stable >= 0.5
            detail.append(f"k={k}: n^(k-1)*E_n in "
                          f"[{min(scaled):.4f},{max(scaled):.4f}]")
        return ok, "; ".join(detail)

    def derivative_norm_scaling():
        k, beta, p, r = 3, 0.5, 2, 1
        w = JacobiWeight(0.0, beta)
        ratios = []
        for eps in (2.0 ** -j for j in range(2, 7)):
            entry = catalog_get("truncated_power", k=k, eps=eps, beta=beta, p=p)
            fr = entry.descriptor.derivative(r)
            nrm = weighted_norm(fr, w, NormOrder.of(p), (-1.0, 1.0),
                                DEFAULT_QUAD)
            lam = eps ** (-k - beta - 1.0 / p + 1.0)
            predicted = lam * eps ** (beta + k - r - 1 + 1.0 / p)
            ratios.append(nrm / predicted)
        drift = (max(ratios) - min(ratios)) / max(ratios)
        return drift <= 0.15, \
            f"derivative norm vs boundary-distance power: drift {drift:.2%}"

    return _collect("approx", [
        ("minimax_equioscillation", equioscillation),
        ("error_monotone_in_degree", monotone_in_degree),
        ("irls_matches_least_squares", irls_cross_validation),
        ("grid_refinement_stability", grid_refinement_stable),
        ("sup_norm_lower_bound_witness", lower_bound_witness),
        ("truncated_power_derivative_norms", derivative_norm_scaling),
    ])


# ---------------------------------------------------------------------------
# rates


def suite_rates(seed: int = DEFAULT_SEED) -> List[CheckResult]:
    w00 = JacobiWeight(0.0, 0.0)

    def dispatch_continuity():
        deltas = np.linspace(0.01, 0.24, 40)
        ok = True
        for spec in (UpsilonSpec(2, 1, "inf"), UpsilonSpec(1, 2, 4),
                     UpsilonSpec(3, 1, 2), UpsilonSpec(1, 1, 1.5)):
            vals = np.array([upsilon(spec, float(d)) for d in deltas])
            ok &= bool(np.all(np.isfinite(vals)) and np.all(vals > 0))
            ok &= bool(np.all(np.diff(vals) > 0))   # increasing in delta
        base = UpsilonSpec(2, 1, "inf", 0.0, 0.0)
        logged = UpsilonSpec(2, 1, "inf", 0.5, 0.0)
        worst = 0.0
        for d in deltas:
            factor = upsilon(logged, float(d)) / upsilon(base, float(d))
            worst = max(worst, abs(factor - abs(math.log(d))))
        return ok and worst <= 1e-12, \
            f"six-case dispatch smooth within cases; log-branch factor " \
            f"max error {worst:.1e}"

    def family_matches_upsilon():
        deltas = [2.0 ** -j for j in range(3, 9)]
        fam = lambda d: catalog_get("truncated_power", k=2, eps=8.0 * d * d,
                                    beta=0.0, p=2)
        sweep = family_sup_sweep(fam, 2, w00, 1, 2, deltas)
        fit = fit_rate(sweep, "pure_power")
        ok = _within(fit.exponent, 1.0, 0.15) and abs(fit.log_power) <= 0.5
        return ok, f"fitted exponent {fit.exponent:.3f} vs 1.0, " \
            f"log power {fit.log_power:.3f}"

    def upper_bound_trend():
        deltas = [2.0 ** -j for j in range(3, 9)]
        fam = lambda d: catalog_get("truncated_power", k=2, eps=8.0 * d * d,
                                    beta=0.0, p=2)
        sweep = family_sup_sweep(fam, 2, w00, 1, 2, deltas)
        spec = UpsilonSpec(2, 1, 2, 0.0, 0.0)
        ratios = np.array([v / upsilon(spec, d)
                           for d, v in zip(sweep.abscissae, sweep.values)])
        slope = float(np.polyfit(np.log(sweep.abscissae), np.log(ratios), 1)[0])
        ok = bool(np.all(ratios <= 20.0)) and -0.1 <= slope <= 0.5
        return ok, f"modulus over sharp rate: max {ratios.max():.3f}, " \
            f"trend slope {slope:+.3f}"

    def moving_spike_lower_bound():
        k, q, p = 2, 1, 2
        scaled = []
        for n in (8, 12, 16, 24, 32, 48, 64):
            entry = catalog_get("moving_truncated_power", k=k, n=n)
            f = entry.descriptor
            nrm = weighted_norm(f, w00, NormOrder.of(p), (-1.0, 1.0),
                                DEFAULT_QUAD)
            err = best_approx(scale(f, 1.0 / nrm), n, w00, q).error
            rate = mpoly_rate(k, q, p, 0.0, 0.0, n)
            lower = rate[0] if isinstance(rate, tuple) else rate
            scaled.append(err / lower)
        stable = min(scaled) / max(scaled)
        return min(scaled) > 0 and stable >= 0.4, \
            f"E_n over class rate in [{min(scaled):.4f},{max(scaled):.4f}]"

    return _collect("rates", [
        ("upsilon_dispatch_continuity", dispatch_continuity),
        ("family_exponent_matches_upsilon", family_matches_upsilon),
        ("modulus_bounded_by_upsilon_trend", upper_bound_trend),
        ("moving_spike_lower_bound", moving_spike_lower_bound),
    ])


# ---------------------------------------------------------------------------
# registry


SUITES: dict = {
    "core": suite_core,
    "differences": suite_differences,
    "moduli": suite_moduli,
    "kernels": suite_kernels,
    "extremals": suite_extremals,
    "approx": suite_approx,
    "rates": suite_rates,
}


def run_suite(name: str, seed: int = DEFAULT_SEED) -> List[CheckResult]:
    if name == "all":
        out = []
        for key in SUITES:
            out.extend(SUITES[key](seed))
        return out
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from "
                         f"{sorted(SUITES)} or 'all'")
    return SUITES[name](seed)
