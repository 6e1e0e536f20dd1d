from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bergersphere.frame import (BergerParameter, FrameVector, StructureConstants, berger_connection_closed_form,
                                berger_geometry, levi_civita, ricci_alternative_trace, ricci_normal_data,
                                rotate_riemann, sectional_curvature, structure_constants)
from bergersphere.polynomial import RationalPoly

eps_values = st.floats(0.05, 3.0) | st.floats(-3.0, -0.05)


def milnor_ricci(eps):
    """Ricci eigenvalues of a unimodular 3-dimensional Lie group with
    [E2,E3] = l1 E1, [E3,E1] = l2 E2, [E1,E2] = l3 E3 (Milnor's formulas)."""
    l1, l2, l3 = 2 / eps, 2 / eps, 2 * eps
    half = (l1 + l2 + l3) / 2
    m1, m2, m3 = half - l1, half - l2, half - l3
    return 2 * m2 * m3, 2 * m1 * m3, 2 * m1 * m2


def test_structure_constants_examples():
    sc = structure_constants(BergerParameter(0.5))
    assert sc[1, 2, 3] == 1.0 and sc[2, 3, 1] == 4.0 and sc[3, 1, 2] == 4.0
    assert all(sc[1, 1, k] == 0 for k in (1, 2, 3))
    assert sc.antisymmetry_defect() == 0


def test_levi_civita_rejects_non_antisymmetric():
    bad = np.zeros((3, 3, 3))
    bad[0, 1, 2] = 1.0
    with pytest.raises(ValueError):
        levi_civita(StructureConstants(bad))


@settings(max_examples=40, deadline=None)
@given(eps_values)
def test_connection_matches_closed_form_and_is_torsion_free(eps):
    p = BergerParameter(eps)
    sc, conn, _ = berger_geometry(p)
    g = np.asarray(conn.data, float)
    assert np.max(np.abs(g - np.asarray(berger_connection_closed_form(p).data, float))) <= 1e-12
    assert np.max(np.abs(g + np.swapaxes(g, 1, 2))) <= 1e-12
    assert np.max(np.abs(g - np.swapaxes(g, 0, 1) - np.asarray(sc.data, float))) <= 1e-12


def test_connection_examples():
    _, conn, _ = berger_geometry(BergerParameter(0.7))
    assert conn[3, 1, 2] == pytest.approx((2 - 0.49) / 0.7)
    assert all(conn[1, 1, k] == 0 for k in (1, 2, 3))
    _, conn1, _ = berger_geometry(BergerParameter(1.0))
    assert conn1[1, 2, 3] == 1.0


@settings(max_examples=40, deadline=None)
@given(eps_values)
def test_curvature_against_milnor_oracle(eps):
    _, _, curv = berger_geometry(BergerParameter(eps))
    ric = np.asarray(curv.ricci.data, float)
    assert np.allclose(np.diag(ric), milnor_ricci(eps), atol=1e-10)
    # in dimension 3 sectional curvatures follow from Ricci
    r1, r2, r3 = milnor_ricci(eps)
    assert sectional_curvature(curv, [1, 0, 0], [0, 1, 0]) == pytest.approx((r1 + r2 - r3) / 2, abs=1e-10)
    assert sectional_curvature(curv, [1, 0, 0], [0, 0, 1]) == pytest.approx((r1 + r3 - r2) / 2, abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(eps_values)
def test_riemann_symmetries_and_bianchi(eps):
    _, _, curv = berger_geometry(BergerParameter(eps))
    r = np.asarray(curv.riem.data, float)
    assert np.max(np.abs(r + np.swapaxes(r, 0, 1))) <= 1e-12
    assert np.max(np.abs(r + np.swapaxes(r, 2, 3))) <= 1e-12
    assert np.max(np.abs(r - np.transpose(r, (2, 3, 0, 1)))) <= 1e-12
    bianchi = r + np.transpose(r, (0, 2, 3, 1)) + np.transpose(r, (0, 3, 1, 2))
    assert np.max(np.abs(bianchi)) <= 1e-12


def test_named_curvature_values():
    e = 0.4
    _, _, curv = berger_geometry(BergerParameter(e))
    assert curv.riem[1, 2, 1, 2] == pytest.approx(4 - 3 * e * e, abs=1e-12)
    assert curv.riem[1, 3, 1, 3] == pytest.approx(e * e, abs=1e-12)
    assert curv.riem[2, 3, 2, 3] == pytest.approx(e * e, abs=1e-12)
    assert curv.riem[1, 2, 1, 3] == 0
    assert curv.ricci[1, 1] == pytest.approx(4 - 2 * e * e, abs=1e-12)
    assert curv.ricci[1, 3] == 0


def test_round_sphere_is_einstein_and_constant_curvature():
    _, _, curv = berger_geometry(BergerParameter(1.0))
    assert np.allclose(np.asarray(curv.ricci.data, float), 2 * np.eye(3), atol=1e-12)
    rng = np.random.default_rng(1)
    for _ in range(5):
        q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        assert sectional_curvature(curv, q[0], q[1]) == pytest.approx(1.0, abs=1e-12)


def test_both_ricci_traces_agree():
    for e in (0.3, 1.0, 1.7):
        _, _, curv = berger_geometry(BergerParameter(e))
        assert np.array_equal(np.asarray(curv.ricci.data, float), np.asarray(ricci_alternative_trace(curv), float))


def test_exact_and_symbolic_parameters():
    _, conn, curv = berger_geometry(BergerParameter(Fraction(1, 3)))
    assert curv.riem[1, 2, 1, 2] == Fraction(4) - 3 * Fraction(1, 9)
    assert conn[3, 1, 2] == (2 - Fraction(1, 9)) * 3
    eps = RationalPoly.var("epsilon")
    _, _, curv_s = berger_geometry(BergerParameter(eps))
    assert curv_s.riem[1, 2, 1, 2] == 4 - 3 * eps * eps
    assert curv_s.ricci[3, 3] == 2 * eps * eps


def test_parameter_validation():
    with pytest.raises(ValueError):
        BergerParameter(0)
    with pytest.raises(ValueError):
        BergerParameter(0.0)
    assert BergerParameter(2).R == Fraction(-12)
    assert BergerParameter(1.0).is_round()


def test_frame_vector_unit_check():
    FrameVector((0.6, 0.8, 0.0), unit=True)
    with pytest.raises(ValueError):
        FrameVector((1.0, 1.0, 0.0), unit=True)


def _ricci_contraction(xi, eps):
    _, _, curv = berger_geometry(BergerParameter(eps))
    ric = np.asarray(curv.ricci.data, float)
    return ric @ xi


def test_ricci_normal_data_examples():
    val, tang = ricci_normal_data(FrameVector((0.0, 0.0, 1.0)), BergerParameter(0.5))
    assert val == pytest.approx(0.5) and np.allclose(tang.as_array(), 0)
    val, tang = ricci_normal_data(FrameVector((0.6, 0.8, 0.0)), BergerParameter(0.5))
    assert val == pytest.approx(3.5) and np.allclose(tang.as_array(), 0)
    s = 1 / np.sqrt(2)
    val, _ = ricci_normal_data(FrameVector((0.0, s, s)), BergerParameter(0.5))
    assert val == pytest.approx(2.0)
    with pytest.raises(ValueError):
        ricci_normal_data(FrameVector((1.0, 1.0, 0.0)), BergerParameter(0.5))


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 2.0), st.floats(0, 2 * np.pi), st.floats(0, np.pi))
def test_ricci_normal_data_against_tensor(eps, phi, theta):
    xi = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
    val, tang = ricci_normal_data(FrameVector(tuple(xi)), BergerParameter(eps))
    ric_xi = _ricci_contraction(xi, eps)
    assert val == pytest.approx(float(xi @ ric_xi), abs=1e-12)
    assert np.allclose(tang.as_array(), ric_xi - val * xi, atol=1e-12)


def test_rotate_riemann_preserves_sectional_curvature():
    _, _, curv = berger_geometry(BergerParameter(0.6))
    q, _ = np.linalg.qr(np.random.default_rng(3).normal(size=(3, 3)))
    rot = rotate_riemann(curv, q)
    for i, j in product(range(3), repeat=2):
        if i < j:
            assert rot[i, j, i, j] == pytest.approx(sectional_curvature(curv, q[i], q[j]), abs=1e-12)
