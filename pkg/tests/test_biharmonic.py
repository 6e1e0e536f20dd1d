import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bergersphere.biharmonic import (ClassificationTag, CmcDescriptor, InconsistentDescriptorError,
                                     NoProperBiharmonicTorus, classify_cmc, cmc_residuals, hopf_torus_descriptor,
                                     proper_biharmonic_radius, scan_radii, torus_system_residuals)
from bergersphere.frame import BergerParameter, FrameVector
from bergersphere.numerics import GridFunction

E3_NORMAL = FrameVector((0.0, 0.0, 1.0))
HORIZONTAL_NORMAL = FrameVector((0.0, 1.0, 0.0))


def test_cmc_residual_examples():
    assert cmc_residuals(0.0, 7.0, FrameVector((0.6, 0.0, 0.8)), BergerParameter(0.3)).max_abs() == 0
    assert cmc_residuals(1.0, 2.0, FrameVector((0.6, 0.0, 0.8)), BergerParameter(1.0)).max_abs() == 0
    res = cmc_residuals(math.sqrt(3) / 2, 3.5, HORIZONTAL_NORMAL, BergerParameter(0.5))
    assert res.max_abs() <= 1e-12


def test_cmc_residuals_exact_arithmetic():
    p = BergerParameter(Fraction(1, 2))
    v = FrameVector((Fraction(3, 5), Fraction(0), Fraction(4, 5)))
    res = cmc_residuals(Fraction(1), Fraction(3), v, p)
    # 4 eps^2 - 4 = -3
    assert res.r0 == -(3 - Fraction(7, 2) + 3 * Fraction(16, 25))
    assert res.r1 == -3 * Fraction(12, 25)
    assert res.r2 == 0


def test_cmc_rejects_non_unit():
    with pytest.raises(ValueError):
        cmc_residuals(1.0, 2.0, FrameVector((1.0, 1.0, 0.0)), BergerParameter(0.5))


def test_torus_residual_examples():
    p = BergerParameter(0.5)
    res = torus_system_residuals(np.full(16, 2 * math.sqrt(0.75)), p, step=0.01)
    assert res.max_abs() <= 1e-9
    assert torus_system_residuals(np.zeros(8), p, step=0.1).max_abs() == 0
    res = torus_system_residuals(GridFunction(np.ones(8), 0.1), p)
    assert np.allclose(res.e_normal, 2.0)
    with pytest.raises(ValueError):
        torus_system_residuals(np.ones(4), p, step=0.1)
    with pytest.raises(ValueError):
        torus_system_residuals(np.ones(8), p)


def test_torus_residuals_nonconstant_against_closed_form():
    p = BergerParameter(0.4)
    h = 1e-3
    s = np.arange(0, 2, h)
    kg = 1 + 0.3 * np.sin(s)
    res = torus_system_residuals(kg, p, step=h)
    d1, d2 = 0.3 * np.cos(s), -0.3 * np.sin(s)
    expected = d2 - kg * (kg * kg - float(p.R))
    assert np.max(np.abs(res.e_normal - expected)[1:-1]) <= 1e-5
    assert np.max(np.abs(res.e_t1 - 3 * d1 * kg)[1:-1]) <= 1e-5
    assert np.max(np.abs(res.e_t2 + 0.4 * d1)[1:-1]) <= 1e-5


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 1.5), st.floats(0.0, 4.0))
def test_cmc_and_torus_formulations_agree(eps, kg):
    p = BergerParameter(eps)
    d = hopf_torus_descriptor(kg, p)
    cmc = cmc_residuals(d.H, d.shape_norm_sq, d.vertical, p)
    torus = torus_system_residuals(np.full(5, kg), p, step=1.0)
    # r0 = -H (kg^2 + 2 eps^2 - 4 + 2 eps^2) = -(kg / 2) (kg^2 - R)
    assert cmc.r0 == pytest.approx(0.5 * torus.e_normal[2], abs=1e-9)


def test_proper_biharmonic_radius():
    assert proper_biharmonic_radius(BergerParameter(0.5)) == pytest.approx(1 / math.sqrt(7), abs=1e-12)
    assert proper_biharmonic_radius(BergerParameter(0.99)) == pytest.approx(0.495098042, abs=1e-9)
    assert proper_biharmonic_radius(BergerParameter(0.999999)) == pytest.approx(0.5, abs=1e-5)
    for e in (1.0, 1.2, -1.0):
        with pytest.raises(NoProperBiharmonicTorus):
            proper_biharmonic_radius(BergerParameter(e))


# reference values evaluated by hand from 1 / (2 sqrt(2 - eps^2))
@pytest.mark.parametrize("eps,root", [(0.5, 0.377964473), (0.9, 0.458349249)])
def test_scan_examples(eps, root):
    res = scan_radii(BergerParameter(eps), 0.05, 0.49, 2048)
    assert len(res.roots) == 1 and res.roots[0] == pytest.approx(root, abs=1e-6)
    assert res.sign_changes == 1


@pytest.mark.parametrize("eps", [1.0, 1.3, 2.0])
def test_scan_no_interior_root_for_large_eps(eps):
    res = scan_radii(BergerParameter(eps), 0.05, 0.5, 256)
    assert res.roots == []
    assert res.minimal_root == 0.5


def test_scan_matches_closed_form_on_eps_grid():
    for eps in np.linspace(0.05, 0.95, 20):
        p = BergerParameter(float(eps))
        res = scan_radii(p, 0.05, 0.4999, 512)
        assert len(res.roots) == 1
        assert abs(res.roots[0] - proper_biharmonic_radius(p)) <= 1e-6


def test_scan_jobs_deterministic():
    p = BergerParameter(0.6)
    a = scan_radii(p, 0.05, 0.49, 1000, jobs=1)
    b = scan_radii(p, 0.05, 0.49, 1000, jobs=7)
    assert list(a.rows()) == list(b.rows()) and a.roots == b.roots


def test_scan_validation():
    p = BergerParameter(0.5)
    for args in ((0.05, 0.49, 8), (0.3, 0.2, 64), (0.0, 0.4, 64), (0.1, 0.6, 64)):
        with pytest.raises(ValueError):
            scan_radii(p, *args)


def test_classification_examples():
    assert classify_cmc(CmcDescriptor(1.0, 2.0, E3_NORMAL, umbilical=True), BergerParameter(1.0)) == \
        ClassificationTag.PROPER_BIHARMONIC_SPHERE
    p = BergerParameter(0.5)
    assert classify_cmc(hopf_torus_descriptor(math.sqrt(3), p), p) == ClassificationTag.PROPER_BIHARMONIC_TORUS
    assert classify_cmc(CmcDescriptor(0.7, 0.98, FrameVector((0.6, 0.0, 0.8)), umbilical=True), p) == \
        ClassificationTag.NOT_BIHARMONIC
    assert classify_cmc(CmcDescriptor(0.0, 0.5, HORIZONTAL_NORMAL), p) == ClassificationTag.MINIMAL
    assert classify_cmc(hopf_torus_descriptor(1.0, p), p) == ClassificationTag.NOT_BIHARMONIC


def test_classification_tags_restricted_by_eps():
    for e in (0.3, 0.8, 1.5):
        p = BergerParameter(e)
        tag = classify_cmc(CmcDescriptor(1.0, 2.0, E3_NORMAL, umbilical=True), p)
        assert tag == ClassificationTag.NOT_BIHARMONIC
    p = BergerParameter(1.5)
    for kg in (0.5, 1.0, 3.0):
        assert classify_cmc(hopf_torus_descriptor(kg, p), p) != ClassificationTag.PROPER_BIHARMONIC_TORUS


def test_e3_normal_nonminimal_is_not_biharmonic():
    p = BergerParameter(0.5)
    assert classify_cmc(CmcDescriptor(0.5, 3.0, E3_NORMAL), p) == ClassificationTag.NOT_BIHARMONIC


def test_inconsistent_descriptors_rejected():
    p = BergerParameter(0.5)
    with pytest.raises(InconsistentDescriptorError):
        classify_cmc(CmcDescriptor(1.0, 1.0, E3_NORMAL), p)
    with pytest.raises(InconsistentDescriptorError):
        classify_cmc(CmcDescriptor(1.0, 3.0, E3_NORMAL, umbilical=True), p)
    with pytest.raises(InconsistentDescriptorError):
        classify_cmc(CmcDescriptor(1.0, 2.5, HORIZONTAL_NORMAL), p)
