"""Dense simplex solvers for the L1 and minimax fitting subproblems."""

import numpy as np
import pytest

from modulus_lab.chebyshev import cheb_vandermonde
from modulus_lab.simplex import l1_fit, minimax_fit, simplex_solve


def test_simplex_solve_small_lp():
    # min -x1 - 2 x2  s.t.  x1 + x2 + s = 4,  x2 + t = 3,  all >= 0
    c = np.array([-1.0, -2.0, 0.0, 0.0])
    A = np.array([[1.0, 1.0, 1.0, 0.0], [0.0, 1.0, 0.0, 1.0]])
    b = np.array([4.0, 3.0])
    res = simplex_solve(c, A, b)
    assert res.status == "optimal"
    assert res.objective == pytest.approx(-7.0)
    assert res.x[:2] == pytest.approx([1.0, 3.0])


def test_simplex_solve_unbounded():
    c = np.array([-1.0, 0.0])
    A = np.array([[1.0, -1.0]])
    b = np.array([1.0])
    assert simplex_solve(c, A, b).status == "unbounded"


def test_l1_fit_recovers_exact_polynomial():
    xs = np.linspace(-1.0, 1.0, 200)
    V = cheb_vandermonde(xs, 4)
    truth = np.array([0.3, -1.0, 0.5, 0.0, 0.25])
    coeffs = l1_fit(V, V @ truth, np.ones(xs.size))
    assert np.max(np.abs(coeffs - truth)) <= 1e-8


def test_l1_fit_beats_least_squares_objective():
    rng = np.random.default_rng(3)
    xs = np.linspace(-1.0, 1.0, 300)
    V = cheb_vandermonde(xs, 5)
    fv = np.sign(xs) + 0.01 * rng.standard_normal(xs.size)
    wts = np.ones(xs.size)
    a_l1 = l1_fit(V, fv, wts)
    a_ls, *_ = np.linalg.lstsq(V, fv, rcond=None)
    obj = lambda a: float(np.sum(wts * np.abs(fv - V @ a)))
    assert obj(a_l1) <= obj(a_ls) + 1e-9


def test_l1_fit_ignores_zero_weight_rows():
    xs = np.linspace(-1.0, 1.0, 101)
    V = cheb_vandermonde(xs, 2)
    fv = xs ** 2
    fv[50] = 100.0    # outlier carried with zero weight
    wts = np.ones(xs.size)
    wts[50] = 0.0
    coeffs = l1_fit(V, fv, wts)
    # exact representation of x^2 = (T_0 + T_2)/2
    assert coeffs == pytest.approx([0.5, 0.0, 0.5], abs=1e-8)


def test_l1_fit_median_property_degree_zero():
    vals = np.array([0.0, 0.0, 0.0, 1.0, 5.0])
    V = np.ones((5, 1))
    coeffs = l1_fit(V, vals, np.ones(5))
    assert coeffs[0] == pytest.approx(0.0, abs=1e-9)


def test_minimax_fit_equioscillating_solution():
    xs = np.cos((np.arange(400) + 0.5) * np.pi / 400)[::-1].copy()
    V = cheb_vandermonde(xs, 1)
    fv = xs ** 2
    coeffs = minimax_fit(V, fv, np.ones(xs.size))
    # best sup-norm line for x^2 on [-1, 1] is the constant 1/2, error 1/2
    assert coeffs == pytest.approx([0.5, 0.0], abs=2e-3)
    assert np.max(np.abs(fv - V @ coeffs)) == pytest.approx(0.5, abs=2e-3)
