"""Substitution map psi and the boundary difference kernel."""

import math

import numpy as np
import pytest

from modulus_lab.errors import DegenerateError
from modulus_lab.kernels import (KernelPoint, a_kernel, a_kernel_bound_ratio,
                                 forward_image, g_kernel, psi, psi_derivative)


def test_psi_inverts_forward_image():
    xs = np.linspace(-0.9, 0.9, 200)
    for lam in (-0.3, -0.05, 0.05, 0.3):
        ys = forward_image(lam, xs)
        assert np.max(np.abs(psi(lam, ys) - xs)) <= 1e-12


def test_psi_at_zero_shift_is_identity():
    ys = np.linspace(-1.0, 1.0, 11)
    assert np.max(np.abs(psi(0.0, ys) - ys)) <= 1e-15


def test_psi_derivative_matches_finite_difference():
    lam = 0.2
    ys = np.linspace(-0.8, 0.8, 41)
    h = 1e-6
    fd = (psi(lam, ys + h) - psi(lam, ys - h)) / (2.0 * h)
    assert np.max(np.abs(psi_derivative(lam, ys) - fd)) <= 1e-8


def test_psi_derivative_degenerate_radicand():
    with pytest.raises(DegenerateError):
        psi_derivative(0.0, 1.0)


def test_flat_exponent_kernel_symmetrizes_to_closed_form():
    for y in (0.0, 0.5, 0.9):
        th = math.sqrt(1.0 - y * y)
        for t in np.linspace(-2.0, 2.0, 21):
            sym = 0.5 * (g_kernel(0.0, th, y, t) + g_kernel(0.0, th, y, -t))
            assert abs(sym - 1.0 / (1.0 + t * t * th * th)) <= 1e-12


def test_kernel_point_validation():
    with pytest.raises(ValueError):
        KernelPoint(y=1.5, beta=0.0, k=1, h=0.01)
    with pytest.raises(ValueError):
        KernelPoint(y=0.0, beta=0.0, k=1, h=0.0)
    with pytest.raises(ValueError):
        KernelPoint(y=0.0, beta=0.0, k=1, h=0.01, theta=0.5)


def test_odd_order_half_exponent_annihilation():
    h = 2.0 ** -8
    for y in np.linspace(0.0, 0.9, 19):
        pt = KernelPoint(y=float(y), beta=-0.5, k=1, h=h)
        assert abs(a_kernel(pt)) <= 1e-12


def test_bound_ratio_positive_and_finite():
    pt = KernelPoint(y=0.5, beta=0.5, k=2, h=2.0 ** -8)
    r = a_kernel_bound_ratio(pt)
    assert np.isfinite(r) and r >= 0.0
