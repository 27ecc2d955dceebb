"""Best weighted polynomial approximation across the norm orders."""

import math

import numpy as np
import pytest

from modulus_lab.approx import best_approx, remez_ratio, sign_changes
from modulus_lab.chebyshev import ChebyshevPoly
from modulus_lab.core import JacobiWeight, from_callable
from modulus_lab.errors import DivisionError
from modulus_lab.extremals import catalog_get

W00 = JacobiWeight(0.0, 0.0)
X2 = from_callable(lambda x: np.asarray(x, float) ** 2, name="x^2")


def test_sup_norm_line_fit_of_parabola():
    res = best_approx(X2, 1, W00, "inf")
    assert res.error == pytest.approx(0.5, abs=2e-3)
    assert res.residual_stats["alternations"] >= 2


def test_l2_fit_matches_legendre_projection():
    # projection of x^2 onto {1, x} under flat weight is the constant 1/3
    res = best_approx(X2, 1, W00, 2)
    assert res.error == pytest.approx(math.sqrt(8.0 / 45.0), rel=1e-5)
    xs = np.linspace(-1, 1, 9)
    assert np.max(np.abs(res.poly(xs) - 1.0 / 3.0)) <= 1e-4


def test_l1_fit_median_of_odd_function():
    f = from_callable(lambda x: np.asarray(x, float), name="x")
    res = best_approx(f, 0, W00, 1)
    assert res.error == pytest.approx(1.0, rel=1e-4)
    assert abs(res.poly(np.array([0.0]))[0]) <= 0.01


def test_intermediate_orders_holder_consistent():
    # on a measure-2 interval, E_q <= 2^(1/q - 1/p) E_p for q < p, because
    # the L_p minimizer is an admissible candidate for the L_q problem
    f = catalog_get("heaviside").descriptor
    e2 = best_approx(f, 10, W00, 2).error
    e3 = best_approx(f, 10, W00, 3).error
    e4 = best_approx(f, 10, W00, 4).error
    assert e2 > 0 and e3 > 0 and e4 > 0
    assert e2 <= 2.0 ** (1 / 2 - 1 / 3) * e3 * (1 + 1e-6)
    assert e3 <= 2.0 ** (1 / 3 - 1 / 4) * e4 * (1 + 1e-6)


def test_error_decreases_with_degree():
    f = catalog_get("heaviside").descriptor
    errs = [best_approx(f, n, W00, 2).error for n in (2, 6, 12, 24)]
    assert all(a > b for a, b in zip(errs, errs[1:]))


def test_exact_representation_gives_zero_error():
    res = best_approx(X2, 4, W00, 2)
    assert res.error <= 1e-10


def test_negative_degree_rejected():
    with pytest.raises(ValueError):
        best_approx(X2, -1, W00, 2)


def test_remez_report_empty_and_positive_capacity():
    p = ChebyshevPoly.from_coeffs([0.0, 1.0])
    rep = remez_ratio(p, (0.5, 0.4), W00, 2)
    assert rep.ratio == 1.0 and rep.capacity == 0.0
    rep = remez_ratio(p, (-0.1, 0.1), W00, 2)
    assert rep.ratio >= 1.0
    assert rep.capacity == pytest.approx(2.0 * math.asin(0.1))


def test_remez_degenerate_complement():
    p = ChebyshevPoly.from_coeffs([0.0, 1.0])
    with pytest.raises(DivisionError):
        remez_ratio(p, (-1.0, 1.0), W00, "inf")


def test_sign_changes_counting():
    grid = np.linspace(-1.0, 1.0, 101)
    # sin(4x) vanishes at 0 and at +/- pi/4 inside [-1, 1]
    assert sign_changes(lambda x: np.sin(4.0 * x), grid) == 3
    with pytest.raises(ValueError):
        sign_changes(lambda x: x, np.array([0.0]))
    with pytest.raises(ValueError):
        sign_changes(lambda x: x, np.array([0.5, 0.1]))
