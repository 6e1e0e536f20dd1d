"""Frame algebra of the Berger sphere S^3_eps.

Everything is expressed in the global orthonormal frame ``E1 = X2``,
``E2 = X3``, ``E3 = X1 / eps``.  Structure constants are constant, so the
Levi-Civita connection follows from the Koszul formula without any
differentiation, and curvature from the connection by pure algebra.

Indices are 1-based everywhere in the public API (``table[1, 2, 3]`` is the
coefficient for ``E1, E2, E3``); the underlying arrays are 0-based.

Scalars may be floats, exact rationals (:class:`fractions.Fraction`) or
:class:`~bergersphere.polynomial.RationalPoly` symbols; the same functions
serve all three.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .numerics import DEFAULTS
from .polynomial import RationalPoly

IDX = (0, 1, 2)


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, RationalPoly)) and not isinstance(x, bool)


def _is_zero(x, tol: float) -> bool:
    if isinstance(x, RationalPoly):
        return x.is_zero()
    if isinstance(x, (int, Fraction)):
        return x == 0
    return abs(x) <= tol


def _empty(shape, exact: bool):
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape)


@dataclass(frozen=True)
class BergerParameter:
    """Deformation parameter ``eps`` of the Berger metric and the derived
    constant ``R = 4 - 4 eps**2``."""

    epsilon: object
    R: object = field(init=False)

    def __post_init__(self):
        eps = self.epsilon
        if isinstance(eps, int) and not isinstance(eps, bool):
            eps = Fraction(eps)
            object.__setattr__(self, "epsilon", eps)
        if isinstance(eps, (float, np.floating)):
            eps = float(eps)
            object.__setattr__(self, "epsilon", eps)
        if _is_zero(eps, 0.0):
            raise ValueError("the Berger parameter epsilon must be nonzero")
        object.__setattr__(self, "R", 4 - 4 * eps * eps)

    @property
    def exact(self) -> bool:
        return is_exact(self.epsilon)

    @property
    def eps_squared(self):
        return self.epsilon * self.epsilon

    def is_round(self) -> bool:
        """True when eps**2 == 1 (the round unit sphere)."""
        return _is_zero(self.R, DEFAULTS.algebraic)


@dataclass(frozen=True)
class FrameVector:
    """Components ``(a1, a2, a3)`` with respect to ``(E1, E2, E3)``."""

    coefficients: tuple
    unit: bool = False

    def __post_init__(self):
        c = tuple(self.coefficients)
        if len(c) != 3:
            raise ValueError("a frame vector has three components")
        object.__setattr__(self, "coefficients", c)
        if self.unit:
            n2 = sum(x * x for x in c)
            if is_exact(n2):
                if n2 != 1:
                    raise ValueError(f"not a unit vector: |a|^2 = {n2}")
            elif abs(n2 - 1) > DEFAULTS.algebraic:
                raise ValueError(f"not a unit vector: |a|^2 = {n2!r}")

    def __getitem__(self, i: int):
        return self.coefficients[i - 1]

    def __iter__(self):
        return iter(self.coefficients)

    def as_array(self) -> np.ndarray:
        return np.array(self.coefficients, dtype=float)


class FrameTensor:
    """Frame-indexed coefficient table with 1-based indexing."""

    def __init__(self, data: np.ndarray):
        self.data = data
        self.data.setflags(write=False)

    def __getitem__(self, idx):
        if not isinstance(idx, tuple):
            idx = (idx,)
        return self.data[tuple(i - 1 for i in idx)]

    @property
    def exact(self) -> bool:
        return self.data.dtype == object

    def __repr__(self):
        return f"{type(self).__name__}({self.data!r})"


class StructureConstants(FrameTensor):
    """``c[i, j, k]`` with ``[E_i, E_j] = sum_k c[i, j, k] E_k``."""

    def antisymmetry_defect(self) -> float:
        worst = 0.0
        for i, j, k in product(IDX, repeat=3):
            d = self.data[i, j, k] + self.data[j, i, k]
            worst = max(worst, 0.0 if _is_zero(d, 0.0) else abs(float(_to_float(d))))
        return worst


class ConnectionTable(FrameTensor):
    """``gamma[i, j, k] = <nabla_{E_i} E_j, E_k>``."""


def _to_float(x):
    if isinstance(x, RationalPoly):
        return float(len(x)) if not x.is_constant() else float(x.constant_value())
    return float(x)


@dataclass(frozen=True)
class CurvatureTable:
    """``riem[i, j, k, l] = g(R(E_k, E_l) E_j, E_i)`` and
    ``ricci[i, j] = Ric(E_i, E_j)``."""

    riem: FrameTensor
    ricci: FrameTensor | None = None
    operator: FrameTensor | None = None  # [a, b, c, n]: E_n-part of R(E_a, E_b) E_c


def structure_constants(p: BergerParameter) -> StructureConstants:
    """Brackets of the Berger frame: ``[E1,E2] = 2 eps E3``,
    ``[E2,E3] = (2/eps) E1``, ``[E3,E1] = (2/eps) E2``."""
    eps = p.epsilon
    c = _empty((3, 3, 3), p.exact)
    two_over = 2 / eps if not isinstance(eps, RationalPoly) else 2 * eps ** -1
    for (i, j, k), val in {(0, 1, 2): 2 * eps, (1, 2, 0): two_over, (2, 0, 1): two_over}.items():
        c[i, j, k] = val
        c[j, i, k] = -val
    return StructureConstants(c)


def levi_civita(sc: StructureConstants, tol: float = DEFAULTS.algebraic) -> ConnectionTable:
    """Koszul formula for an orthonormal frame with constant brackets:
    ``2 gamma[i,j,k] = c[i,j,k] - c[j,k,i] + c[k,i,j]``."""
    if sc.antisymmetry_defect() > tol:
        raise ValueError("structure constants are not antisymmetric in the first two indices")
    c = sc.data
    g = _empty((3, 3, 3), sc.exact)
    half = Fraction(1, 2) if sc.exact else 0.5
    for i, j, k in product(IDX, repeat=3):
        g[i, j, k] = half * (c[i, j, k] - c[j, k, i] + c[k, i, j])
    return ConnectionTable(g)


def berger_connection_closed_form(p: BergerParameter) -> ConnectionTable:
    """The published connection table of the Berger frame, used as the
    reference for :func:`levi_civita`."""
    eps = p.epsilon
    g = _empty((3, 3, 3), p.exact)
    inv = 1 / eps if not isinstance(eps, RationalPoly) else eps ** -1
    w = (2 - eps * eps) * inv
    g[0, 1, 2], g[0, 2, 1] = eps, -eps
    g[1, 0, 2], g[1, 2, 0] = -eps, eps
    g[2, 0, 1], g[2, 1, 0] = w, -w
    return ConnectionTable(g)


def riemann_tensor(conn: ConnectionTable, sc: StructureConstants) -> CurvatureTable:
    """Curvature of a frame connection with constant coefficients.

    ``R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z``;
    with constant coefficients ``nabla_{E_a} nabla_{E_b} E_c`` reduces to
    products of connection entries.
    """
    G = conn.data
    c = sc.data
    exact = conn.exact
    # op[a, b, c, n]: E_n-component of R(E_a, E_b) E_c
    op = _empty((3, 3, 3, 3), exact)
    for a, b, cc, n in product(IDX, repeat=4):
        val = 0
        for m in IDX:
            val = val + G[b, cc, m] * G[a, m, n] - G[a, cc, m] * G[b, m, n] - c[a, b, m] * G[m, cc, n]
        op[a, b, cc, n] = val
    riem = _empty((3, 3, 3, 3), exact)
    for i, j, k, l in product(IDX, repeat=4):
        riem[i, j, k, l] = op[k, l, j, i]
    return CurvatureTable(riem=FrameTensor(riem), operator=FrameTensor(op))


def ricci(curv: CurvatureTable) -> CurvatureTable:
    """``Ric(E_a, E_b) = sum_i R(E_b, E_i, E_a, E_i)`` from the four-index
    table; :func:`ricci_alternative_trace` gives the operator-side trace."""
    r = curv.riem.data
    exact = curv.riem.exact
    ric = _empty((3, 3), exact)
    for a, b in product(IDX, repeat=2):
        val = 0
        for i in IDX:
            val = val + r[b, i, a, i]
        ric[a, b] = val
    return CurvatureTable(riem=curv.riem, ricci=FrameTensor(ric), operator=curv.operator)


def ricci_alternative_trace(curv: CurvatureTable) -> np.ndarray:
    """Ricci from the operator form ``sum_i <R(X, e_i) e_i, Y>``, read off
    the curvature operator rather than the four-index table."""
    if curv.operator is None:
        raise ValueError("curvature operator not available")
    op = curv.operator.data
    out = _empty((3, 3), curv.operator.exact)
    for a, b in product(IDX, repeat=2):
        val = 0
        for i in IDX:
            val = val + op[a, i, i, b]
        out[a, b] = val
    return out


def berger_geometry(p: BergerParameter):
    """Structure constants, connection and curvature (with Ricci) for ``p``."""
    sc = structure_constants(p)
    conn = levi_civita(sc)
    curv = ricci(riemann_tensor(conn, sc))
    return sc, conn, curv


def ricci_normal_data(xi: FrameVector, p: BergerParameter):
    """Ricci data along a unit normal ``xi``.

    Returns ``Ric(xi, xi) = 4 - 2 eps^2 + (4 eps^2 - 4) a3^2`` and the part of
    ``Ric(xi)`` tangent to the surface, as a frame vector in the E-basis.
    Its component along a unit tangent ``e`` with E3-component ``e3`` is
    ``(4 eps^2 - 4) e3 a3`` (see :func:`tangential_components`).
    """
    a = tuple(xi)
    n2 = sum(x * x for x in a)
    if (is_exact(n2) and n2 != 1) or (not is_exact(n2) and abs(n2 - 1) > DEFAULTS.algebraic):
        raise ValueError("ricci_normal_data needs a unit normal")
    eps2 = p.eps_squared
    k = 4 * eps2 - 4
    ric_xx = 4 - 2 * eps2 + k * a[2] * a[2]
    ric_vec = ((4 - 2 * eps2) * a[0], (4 - 2 * eps2) * a[1], 2 * eps2 * a[2])
    tangential = tuple(ric_vec[i] - ric_xx * a[i] for i in IDX)
    return ric_xx, FrameVector(tangential)


def tangential_components(vec: FrameVector, *tangents: FrameVector) -> tuple:
    """Components of ``vec`` along the given (orthonormal) tangent vectors."""
    return tuple(sum(x * y for x, y in zip(vec, t)) for t in tangents)


def sectional_curvature(curv: CurvatureTable, u, v) -> float:
    """Sectional curvature of the plane spanned by orthonormal frame
    vectors ``u``, ``v`` (component arrays)."""
    r = np.asarray(curv.riem.data, dtype=float)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return float(np.einsum("ijkl,i,j,k,l->", r, u, v, u, v))


def rotate_riemann(curv: CurvatureTable, frame: np.ndarray) -> np.ndarray:
    """``R(e_i, e_j, e_k, e_l)`` for a frame whose rows are the E-components
    of ``e_1, e_2, e_3``."""
    r = np.asarray(curv.riem.data, dtype=float)
    a = np.asarray(frame, dtype=float)
    return np.einsum("pqrs,ip,jq,kr,ls->ijkl", r, a, a, a, a)
