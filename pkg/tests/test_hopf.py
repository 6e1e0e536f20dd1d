import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bergersphere.frame import BergerParameter, ConnectionTable, berger_geometry
from bergersphere.hopf import (FIELD_MATRICES, AmbientTangent, BasePoint, SpherePoint, complex_hopf_map, differential,
                               fiber_rotate, frame_components, frame_fields, hopf_map, hopf_map_batch,
                               lie_bracket_linear, metric_split, numeric_lie_bracket, submersion_tension)
from bergersphere.numerics import rk4_integrate

unit4 = st.lists(st.floats(-1, 1), min_size=4, max_size=4).filter(lambda v: np.linalg.norm(v) > 0.1).map(
    lambda v: np.asarray(v) / np.linalg.norm(v))


def test_hopf_map_examples():
    assert np.allclose(hopf_map([1, 0, 0, 0]), [0, 0, 0.5])
    s = 1 / math.sqrt(2)
    assert np.allclose(hopf_map([s, 0, s, 0]), [0.5, 0, 0])


def test_hopf_map_rejects_off_sphere():
    with pytest.raises(ValueError):
        hopf_map([1, 1, 0, 0])
    with pytest.raises(ValueError):
        BasePoint([1, 0, 0])


@settings(max_examples=60, deadline=None)
@given(unit4, st.floats(0, 2 * math.pi))
def test_image_on_base_sphere_and_fiber_invariance(x, theta):
    y = hopf_map(x)
    BasePoint(y)
    assert np.max(np.abs(hopf_map(fiber_rotate(x, theta)) - y)) <= 1e-12
    assert np.allclose(hopf_map_batch(x[None, :])[0], y)


def test_fiber_invariance_along_integrated_flow():
    x0 = np.array([0.3, -0.5, 0.7, 0.0])
    x0 /= np.linalg.norm(x0)
    n = 2000
    xs = rk4_integrate(lambda t, x: FIELD_MATRICES[0] @ x, x0, 2 * math.pi / n, n)
    drift = np.max(np.abs(hopf_map_batch(xs) - hopf_map(x0)))
    assert drift <= 1e-8
    assert np.max(np.abs(xs[-1] - x0)) <= 1e-8


def test_complex_form_needs_conjugation():
    z, w = 0.6 + 0.0j, 0.0 + 0.8j
    lam = np.exp(0.9j)
    good = complex_hopf_map(z, w)
    assert np.allclose(complex_hopf_map(lam * z, lam * w), good)
    assert np.allclose(good, hopf_map([0.6, 0, 0, 0.8]))
    printed = complex_hopf_map(z, w, conjugate_second=False)
    assert not np.allclose(complex_hopf_map(lam * z, lam * w, conjugate_second=False), printed)


def test_frame_fields_examples():
    x1, x2, x3 = frame_fields([1, 0, 0, 0])
    assert np.array_equal(x1, [0, 1, 0, 0])


@settings(max_examples=40, deadline=None)
@given(unit4)
def test_frame_fields_orthonormal_tangent_and_vertical(x):
    fields = np.array(frame_fields(x))
    assert np.allclose(fields @ fields.T, np.eye(3), atol=1e-12)
    assert np.allclose(fields @ x, 0, atol=1e-12)
    assert np.linalg.norm(differential(x, fields[0])) <= 1e-8
    d2, d3 = differential(x, fields[1]), differential(x, fields[2])
    assert abs(np.linalg.norm(d2) - np.linalg.norm(d3)) <= 1e-8
    assert abs(d2 @ d3) <= 1e-8


def test_linear_brackets_match_finite_differences():
    x = np.array([0.1, 0.7, -0.3, 0.5])
    x /= np.linalg.norm(x)
    m1, m2, m3 = FIELD_MATRICES
    for a, b in ((m1, m2), (m2, m3), (m3, m1)):
        fd = numeric_lie_bracket(lambda y: a @ y, lambda y: b @ y, x)
        assert np.allclose(fd, lie_bracket_linear(a, b) @ x, atol=1e-6)
    # [X2, X3] = 2 X1, hence [E1, E2] = 2 eps E3 with E3 = X1 / eps
    assert np.allclose(lie_bracket_linear(m2, m3), 2 * m1)


def test_metric_split_examples():
    x = np.array([1.0, 0, 0, 0])
    f1, f2, _ = frame_fields(x)
    p = BergerParameter(0.5)
    split = metric_split(x, f1, p)
    assert np.allclose(split.vertical, f1) and split.norm == pytest.approx(0.5)
    split = metric_split(x, f2, p)
    assert np.allclose(split.horizontal, f2) and split.norm == pytest.approx(1.0)
    assert metric_split(x, f1 + f2, p).norm ** 2 == pytest.approx(1.25)
    with pytest.raises(ValueError):
        AmbientTangent(SpherePoint(x), x)


def test_frame_components_of_frame_fields():
    x = np.array([0.5, 0.5, 0.5, 0.5])
    f1, f2, f3 = frame_fields(x)
    p = BergerParameter(0.25)
    assert np.allclose(frame_components(x, f2, p), [1, 0, 0])
    assert np.allclose(frame_components(x, f3, p), [0, 1, 0])
    assert np.allclose(frame_components(x, f1 / 0.25, p), [0, 0, 1])


def test_submersion_tension():
    for e in (0.3, 1.0, 2.0):
        t = submersion_tension(berger_geometry(BergerParameter(e))[1])
        assert tuple(t) == (0.0, 0.0, 0.0)
    data = np.zeros((3, 3, 3))
    data[2, 2, 0] = 0.1
    assert tuple(submersion_tension(ConnectionTable(data))) == (0.1, 0.0, 0.0)
    with pytest.raises(ValueError):
        submersion_tension(ConnectionTable(np.zeros((3, 3, 3))), 4)
