"""Biharmonicity residuals for CMC surfaces and Hopf tori in S^3_eps, the
radius scan and the classification of biharmonic CMC surfaces.

Throughout, ``vertical`` is the unit vector ``(a1, a2, a3)`` of
E3-components of an adapted frame ``(e1, e2, xi)``, i.e. ``e_i = ... + a_i E3``
with ``xi`` the unit normal; equivalently the coordinates of ``E3`` in that
frame.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .frame import BergerParameter, FrameVector, is_exact
from .numerics import DEFAULTS, GridFunction, bisect, central_diff, sign_change_brackets


class NoProperBiharmonicTorus(ValueError):
    pass


class InconsistentDescriptorError(ValueError):
    pass


def _check_unit(v: FrameVector):
    n2 = sum(x * x for x in v)
    bad = (n2 != 1) if is_exact(n2) else abs(n2 - 1) > DEFAULTS.algebraic
    if bad:
        raise ValueError(f"vertical components must form a unit vector, |a|^2 = {n2}")


@dataclass(frozen=True)
class CmcResiduals:
    r0: float
    r1: float
    r2: float

    def __post_init__(self):
        for v in (self.r0, self.r1, self.r2):
            if not is_exact(v) and not math.isfinite(v):
                raise ValueError("residuals must be finite")

    def max_abs(self) -> float:
        return float(max(abs(self.r0), abs(self.r1), abs(self.r2)))

    def vanishes(self, tol: float = DEFAULTS.classification) -> bool:
        return self.max_abs() <= tol


def cmc_residuals(H, shape_norm_sq, vertical: FrameVector, p: BergerParameter) -> CmcResiduals:
    """Normal and tangential parts of the bitension field of a CMC surface:

        r0 = -H (|A|^2 - (4 - 2 eps^2) - (4 eps^2 - 4) a3^2)
        r1 = (4 eps^2 - 4) a1 a3 H
        r2 = (4 eps^2 - 4) a2 a3 H
    """
    _check_unit(vertical)
    a1, a2, a3 = vertical
    eps2 = p.eps_squared
    k = 4 * eps2 - 4
    r0 = -H * (shape_norm_sq - (4 - 2 * eps2) - k * a3 * a3)
    return CmcResiduals(r0, k * a1 * a3 * H, k * a2 * a3 * H)


@dataclass(frozen=True)
class TorusSystemResiduals:
    e_normal: np.ndarray
    e_t1: np.ndarray
    e_t2: np.ndarray
    grid: np.ndarray

    def max_abs(self) -> float:
        return float(max(np.max(np.abs(self.e_normal)), np.max(np.abs(self.e_t1)), np.max(np.abs(self.e_t2))))


def torus_system_residuals(kg, p: BergerParameter, step: Optional[float] = None) -> TorusSystemResiduals:
    """``(kg'' - kg (kg^2 - R), 3 kg' kg, -eps kg')`` on a uniform grid, with
    derivatives by central differences.  ``kg`` is a :class:`GridFunction`
    or an array together with ``step``."""
    if not isinstance(kg, GridFunction):
        if step is None:
            raise ValueError("step is required for raw samples")
        kg = GridFunction(kg, step)
    if len(kg) < 5:
        raise ValueError("torus residuals need at least 5 grid points")
    eps = float(p.epsilon)
    R = float(p.R)
    k = kg.values
    d1 = central_diff(kg, 1).values
    d2 = central_diff(kg, 2).values
    return TorusSystemResiduals(d2 - k * (k * k - R), 3 * d1 * k, -eps * d1, kg.grid)


def proper_biharmonic_radius(p: BergerParameter) -> float:
    """Radius ``1 / (2 sqrt(2 - eps^2))`` of the base circle of the proper
    biharmonic Hopf torus; only for ``eps^2 < 1``."""
    eps2 = float(p.eps_squared)
    if eps2 >= 1:
        raise NoProperBiharmonicTorus(f"no proper biharmonic Hopf torus for eps^2 = {eps2} >= 1")
    return 1.0 / (2.0 * math.sqrt(2.0 - eps2))


def circle_kg(r):
    """Geodesic curvature of a circle of Euclidean radius ``r`` on S^2(1/2)."""
    r = np.asarray(r, dtype=float)
    return np.sqrt(np.maximum(1.0 / (r * r) - 4.0, 0.0))


def torus_normal_factor(r, R: float):
    """Signed normal residual ``kg (kg^2 - R)`` of the constant-kg torus
    over the circle of radius ``r``."""
    k = circle_kg(r)
    return k * (k * k - R)


@dataclass(frozen=True)
class ScanResult:
    epsilon: float
    r: np.ndarray
    kg: np.ndarray
    signed: np.ndarray
    residual_normal: np.ndarray
    residual_t1: np.ndarray
    residual_t2: np.ndarray
    roots: list
    minimal_root: Optional[float]
    sign_changes: int

    def rows(self):
        for i in range(len(self.r)):
            yield (self.epsilon, float(self.r[i]), float(self.kg[i]), float(self.residual_normal[i]),
                   float(self.residual_t1[i]), float(self.residual_t2[i]))


def _scan_chunk(args):
    rs, p = args
    kg = circle_kg(rs)
    signed = kg * (kg * kg - float(p.R))
    normal, t1, t2 = [], [], []
    for k in kg:
        res = torus_system_residuals(np.full(5, k), p, step=1.0)
        normal.append(abs(res.e_normal[2]))
        t1.append(abs(res.e_t1[2]))
        t2.append(abs(res.e_t2[2]))
    return kg, signed, np.array(normal), np.array(t1), np.array(t2)


def scan_radii(p: BergerParameter, r_min: float, r_max: float, samples: int,
               jobs: int = 1, tol: float = DEFAULTS.bisection) -> ScanResult:
    """Scan constant-kg Hopf tori over base radii in ``[r_min, r_max]``.

    Roots are located by bisection on sign changes of ``kg (kg^2 - R)``;
    the ``kg = 0`` zero at ``r = 1/2`` (the minimal torus) is reported as
    ``minimal_root`` rather than among ``roots``.
    """
    if samples < 32:
        raise ValueError(f"need at least 32 samples, got {samples}")
    if not 0 < r_min < r_max <= 0.5:
        raise ValueError(f"need 0 < r_min < r_max <= 1/2, got [{r_min}, {r_max}]")
    rs = np.linspace(r_min, r_max, samples)
    jobs = max(1, int(jobs))
    chunks = [c for c in np.array_split(rs, jobs) if len(c)]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(_scan_chunk, [(c, p) for c in chunks]))
    kg, signed, normal, t1, t2 = (np.concatenate([part[i] for part in parts]) for i in range(5))
    R = float(p.R)
    roots, minimal = [], None
    brackets = sign_change_brackets(rs, signed)
    for lo, hi in brackets:
        root = lo if lo == hi else bisect(lambda r: float(torus_normal_factor(r, R)), lo, hi, tol)
        if 0.5 - root <= DEFAULTS.algebraic:
            minimal = 0.5
        else:
            roots.append(float(root))
    interior_changes = sum(1 for lo, hi in brackets if 0.5 - hi > DEFAULTS.algebraic)
    return ScanResult(float(p.epsilon), rs, kg, signed, normal, t1, t2, roots, minimal, interior_changes)


class ClassificationTag(str, Enum):
    MINIMAL = "minimal"
    PROPER_BIHARMONIC_SPHERE = "proper_biharmonic_sphere"
    PROPER_BIHARMONIC_TORUS = "proper_biharmonic_torus"
    NOT_BIHARMONIC = "not_biharmonic"


@dataclass(frozen=True)
class CmcDescriptor:
    """Pointwise data of a CMC surface.  ``umbilical`` surfaces are taken to
    have constant ``H`` (assumed, not derived)."""

    H: float
    shape_norm_sq: float
    vertical: FrameVector
    umbilical: bool = False


def classify_cmc(d: CmcDescriptor, p: BergerParameter, tol: float = DEFAULTS.classification) -> ClassificationTag:
    _check_unit(d.vertical)
    H = float(d.H)
    A2 = float(d.shape_norm_sq)
    a3 = float(d.vertical[3])
    eps2 = float(p.eps_squared)
    round_sphere = abs(eps2 - 1) <= tol
    if A2 < 2 * H * H - tol:
        raise InconsistentDescriptorError("|A|^2 >= 2 H^2 fails")
    if d.umbilical and abs(A2 - 2 * H * H) > tol:
        raise InconsistentDescriptorError("umbilical surfaces have |A|^2 = 2 H^2")
    if abs(a3) <= tol and abs(4 * H * H - (A2 - 2 * eps2)) > tol:
        raise InconsistentDescriptorError("a Hopf torus has |A|^2 = 4 H^2 + 2 eps^2")
    if abs(H) <= tol:
        return ClassificationTag.MINIMAL
    res = cmc_residuals(H, A2, FrameVector(tuple(float(x) for x in d.vertical)), p)
    if round_sphere:
        if not res.vanishes(tol):
            return ClassificationTag.NOT_BIHARMONIC
        if d.umbilical:
            return ClassificationTag.PROPER_BIHARMONIC_SPHERE
        raise InconsistentDescriptorError(
            "non-umbilical nonminimal CMC surface with |A|^2 = 2 in the round sphere")
    if d.umbilical:
        return ClassificationTag.NOT_BIHARMONIC
    if abs(abs(a3) - 1) <= tol:
        # E3 normal: Span{e1, e2} = Span{E1, E2} is not integrable since [E1, E2] = 2 eps E3
        return ClassificationTag.NOT_BIHARMONIC
    if res.vanishes(tol) and abs(a3) <= tol and eps2 < 1:
        return ClassificationTag.PROPER_BIHARMONIC_TORUS
    return ClassificationTag.NOT_BIHARMONIC


def hopf_torus_descriptor(kg: float, p: BergerParameter) -> CmcDescriptor:
    """Descriptor of the Hopf torus over a circle with geodesic curvature
    ``kg``; its normal is orthogonal to E3."""
    eps = float(p.epsilon)
    return CmcDescriptor(H=kg / 2, shape_norm_sq=kg * kg + 2 * eps * eps, vertical=FrameVector((0.0, 1.0, 0.0)))
