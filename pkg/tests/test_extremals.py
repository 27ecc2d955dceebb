"""Extremal-function catalog and Chebyshev partition utilities."""

import math

import numpy as np
import pytest

from modulus_lab.differences import certify_k_monotone
from modulus_lab.errors import ParamRangeError, UnknownEntryError
from modulus_lab.extremals import (ChebyshevPartition, catalog_get,
                                   catalog_names, chebyshev_partition,
                                   d_interval, rho)


def test_catalog_names_sorted_and_complete():
    names = catalog_names()
    assert names == tuple(sorted(names))
    assert "heaviside" in names and "zeta_spline" in names


def test_unknown_entry_and_missing_params():
    with pytest.raises(UnknownEntryError):
        catalog_get("does_not_exist")
    with pytest.raises(ParamRangeError):
        catalog_get("truncated_power", k=2)   # eps missing
    with pytest.raises(ParamRangeError):
        catalog_get("inverse_power", beta=-1.0)
    with pytest.raises(ParamRangeError):
        catalog_get("oscillating_step", k=1.5, delta=0.1)


def test_truncated_power_derivatives_consistent():
    entry = catalog_get("truncated_power", k=3, eps=0.25)
    f = entry.descriptor
    xs = np.linspace(0.76, 0.99, 21)    # right of the knot at 0.75
    h = 1e-6
    fd = (f(xs + h) - f(xs - h)) / (2.0 * h)
    assert np.max(np.abs(f.derivatives[0](xs) - fd)) <= 1e-3 * np.max(np.abs(fd))


def test_oscillating_step_values_and_support():
    entry = catalog_get("oscillating_step", k=1, delta=0.1)
    f = entry.descriptor
    assert f(np.array([-0.5]))[0] == 0.0
    assert f(np.array([0.01]))[0] == 1.0     # first on-block
    assert f(np.array([0.11]))[0] == -1.0    # second on-block
    assert f(np.array([0.08]))[0] == 0.0     # gap between blocks


def test_zeta_spline_monotone_and_vanishing_left():
    f = catalog_get("zeta_spline", m=4, lam=1.5).descriptor
    assert bool(certify_k_monotone(f, 1, trials=50))
    xs = np.linspace(-0.99, 0.0, 25)
    assert np.max(np.abs(f(xs))) == 0.0


def test_moving_spike_knot_approaches_endpoint():
    near = catalog_get("moving_truncated_power", k=2, n=32).descriptor
    far = catalog_get("moving_truncated_power", k=2, n=8).descriptor
    assert near.breakpoints[0] > far.breakpoints[0]
    with pytest.raises(ParamRangeError):
        catalog_get("moving_truncated_power", k=2, n=2)


def test_partition_intervals_comparable_to_local_scale():
    part = chebyshev_partition(16)
    assert part.knots[0] == 1.0 and part.knots[-1] == -1.0
    for i in range(2, part.n):
        lo, hi = part.interval(i)
        assert lo < hi
        ln = part.length(i)
        x = 0.5 * (lo + hi)
        assert 2.0 * math.sqrt(1 - x * x) / part.n - 1e-12 <= ln \
            <= 5.0 * math.sqrt(1 - x * x) / part.n + 1e-12


def test_partition_index_errors():
    part = chebyshev_partition(8)
    with pytest.raises(IndexError):
        part.interval(0)
    with pytest.raises(IndexError):
        part.interval(9)
    with pytest.raises(ValueError):
        ChebyshevPartition.build(1)


def test_swept_interval_contains_knot():
    part = chebyshev_partition(16)
    for i in (1, 5, 15):
        lo, hi = d_interval(part, i, 0.05)
        assert lo < part.knots[i] < hi
    with pytest.raises(IndexError):
        d_interval(part, 16, 0.05)
    with pytest.raises(ValueError):
        d_interval(part, 3, 0.0)


def test_local_scale_floor():
    xs = np.linspace(-1.0, 1.0, 9)
    n = 12
    vals = rho(n, xs)
    assert np.all(vals >= 1.0 / n ** 2 - 1e-15)
    assert vals[0] == pytest.approx(1.0 / n ** 2)
