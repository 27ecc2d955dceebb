"""Main-part and boundary moduli of smoothness."""

import numpy as np
import pytest

from modulus_lab.core import JacobiWeight, NormOrder, from_callable, scale
from modulus_lab.extremals import catalog_get
from modulus_lab.moduli import (ModulusRequest, boundary_modulus, dt_modulus,
                                main_part_modulus)

W00 = JacobiWeight(0.0, 0.0)
HEAVISIDE = catalog_get("heaviside").descriptor


def _req(k=1, delta=0.1, w=W00, q=1, **kw):
    return ModulusRequest(k=k, delta=delta, weight=w, q=NormOrder.of(q), **kw)


def test_request_validation():
    with pytest.raises(ValueError):
        ModulusRequest(k=0, delta=0.1, weight=W00, q=NormOrder.of(1))
    with pytest.raises(ValueError):
        ModulusRequest(k=2, delta=0.3, weight=W00, q=NormOrder.of(1))
    with pytest.raises(ValueError):
        ModulusRequest(k=1, delta=0.1, weight=W00, q=NormOrder.of(1),
                       h_samples=4)


def test_jump_total_close_to_delta():
    res = dt_modulus(HEAVISIDE, _req(delta=0.1, q=1))
    assert abs(res.total - 0.1) <= 0.002


def test_total_is_sum_of_parts():
    res = dt_modulus(HEAVISIDE, _req(delta=0.05, q=2))
    assert res.total == pytest.approx(res.main + res.forward + res.backward)
    assert all(h > 0 for h in res.argmax_h)


def test_monotone_in_delta():
    vals = [dt_modulus(HEAVISIDE, _req(delta=d, q=1)).total
            for d in (0.02, 0.05, 0.1, 0.2)]
    assert all(a <= b * (1 + 1e-9) for a, b in zip(vals, vals[1:]))


def test_homogeneity():
    base = dt_modulus(HEAVISIDE, _req(delta=0.1, q=1)).total
    tripled = dt_modulus(scale(HEAVISIDE, 3.0), _req(delta=0.1, q=1)).total
    assert tripled == pytest.approx(3.0 * base, rel=1e-9)


def test_second_order_annihilates_affine():
    f = from_callable(lambda x: 2.0 * np.asarray(x, float) - 0.5, name="affine")
    res = dt_modulus(f, _req(k=2, delta=0.1, q=2))
    assert res.total == 0.0


def test_boundary_part_detects_endpoint_spike():
    k, delta = 2, 0.125
    eps = 2.0 * k * k * delta ** 2
    f = catalog_get("truncated_power", k=k, eps=eps).descriptor
    bwd, _ = boundary_modulus(f, _req(k=k, delta=delta, q=1), "backward")
    assert bwd > 0.0
    fwd, _ = boundary_modulus(f, _req(k=k, delta=delta, q=1), "forward")
    assert fwd == 0.0


def test_main_part_bounded_by_total():
    req = _req(k=1, delta=0.1, q=2)
    main, _ = main_part_modulus(HEAVISIDE, req)
    assert main <= dt_modulus(HEAVISIDE, req).total + 1e-15


def test_unknown_boundary_direction_rejected():
    with pytest.raises(ValueError):
        boundary_modulus(HEAVISIDE, _req(), "sideways")
