"""Integrability data of a Riemannian submersion from S^3_eps with vertical
``e3`` and the relations it must satisfy.

Brackets of the frame::

    [e1, e3] = f3 e2 + kappa1 e3
    [e2, e3] = -f3 e1 + kappa2 e3
    [e1, e2] = f1 e1 + f2 e2 - 2 sigma e3

Directional derivatives are not computed here.  They are supplied by the
caller under keys such as ``"e1(f2)"`` or ``"e1e1(kappa1)"`` (apply ``e1``
twice).  In constant mode every derivative is zero.  All functions work
with floats, fractions or :class:`~bergersphere.polynomial.RationalPoly`
values.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from ..frame import BergerParameter, is_exact
from ..numerics import DEFAULTS
from ..polynomial import RationalPoly

FIELDS = ("f1", "f2", "f3", "kappa1", "kappa2", "sigma")


class MissingOracleError(KeyError):
    pass


@dataclass(frozen=True)
class IntegrabilityData:
    f1: object = 0
    f2: object = 0
    f3: object = 0
    kappa1: object = 0
    kappa2: object = 0
    sigma: object = 0
    derivatives: Mapping[str, object] = field(default_factory=dict)
    constant: bool = False
    adapted: bool = False

    def __post_init__(self):
        if self.adapted and not _vanishes(self.f3):
            raise ValueError("an adapted frame has f3 = 0")

    def d(self, key: str):
        """Value of a directional derivative such as ``"e2(kappa1)"``."""
        if key in self.derivatives:
            return self.derivatives[key]
        if self.constant:
            return 0
        raise MissingOracleError(f"no value supplied for {key}")


def _vanishes(x) -> bool:
    if isinstance(x, RationalPoly):
        return x.is_zero()
    if is_exact(x):
        return x == 0
    return abs(x) <= DEFAULTS.algebraic


def hopf_data(p: BergerParameter) -> IntegrabilityData:
    """Data of the frame ``(E1, E2, E3)`` itself: ``f3 = -2/eps``,
    ``sigma = -eps``, everything else zero and constant."""
    eps = p.epsilon
    return IntegrabilityData(f3=-2 * eps ** -1 if isinstance(eps, RationalPoly) else -2 / eps,
                             sigma=-eps, constant=True)


def jacobi_residuals(d: IntegrabilityData) -> tuple:
    r1 = d.d("e3(f1)") + (d.kappa1 + d.f2) * d.f3 - d.d("e1(f3)")
    r2 = d.d("e3(f2)") + (d.kappa2 - d.f1) * d.f3 - d.d("e2(f3)")
    r3 = 2 * d.d("e3(sigma)") + d.kappa1 * d.f1 + d.kappa2 * d.f2 + d.d("e2(kappa1)") - d.d("e1(kappa2)")
    return (r1, r2, r3)


@dataclass(frozen=True)
class FrameCoefficients:
    """Rows are ``e_i`` in the ``E_j`` basis.  Only the last column
    ``(a_1^3, a_2^3, a_3^3)`` enters the curvature relations; it can be
    given alone (``rows=None``), e.g. with symbolic entries."""

    rows: Optional[tuple] = None
    column: Optional[tuple] = None

    def __post_init__(self):
        if self.rows is not None:
            rows = tuple(tuple(r) for r in self.rows)
            if len(rows) != 3 or any(len(r) != 3 for r in rows):
                raise ValueError("frame coefficients form a 3x3 matrix")
            for i in range(3):
                for j in range(3):
                    dot = sum(rows[i][k] * rows[j][k] for k in range(3)) - (1 if i == j else 0)
                    if not _vanishes(dot) and not isinstance(dot, RationalPoly):
                        raise ValueError("frame coefficients are not orthogonal")
            object.__setattr__(self, "rows", rows)
            object.__setattr__(self, "column", tuple(r[2] for r in rows))
        elif self.column is not None:
            col = tuple(self.column)
            n2 = sum(x * x for x in col)
            if not isinstance(n2, RationalPoly) and not _vanishes(n2 - 1):
                raise ValueError("the E3-column of an orthogonal matrix is a unit vector")
            object.__setattr__(self, "column", col)
        else:
            raise ValueError("give rows or the E3-column")

    @classmethod
    def identity(cls) -> "FrameCoefficients":
        return cls(rows=((1, 0, 0), (0, 1, 0), (0, 0, 1)))


def curvature_residuals(d: IntegrabilityData, c: FrameCoefficients, p: BergerParameter) -> tuple:
    """LHS minus RHS of the seven curvature relations, in the order
    R(e1,e3,e1,e2), R(e1,e3,e1,e3), R(e1,e3,e2,e3), R(e1,e2,e1,e2),
    R(e1,e2,e2,e3), R(e2,e3,e1,e3), R(e2,e3,e2,e3)."""
    a13, a23, a33 = c.column
    R = p.R
    e2 = p.eps_squared
    f1, f2, f3, k1, k2, s = d.f1, d.f2, d.f3, d.kappa1, d.kappa2, d.sigma
    return (
        -d.d("e1(sigma)") + 2 * k1 * s + a23 * a33 * R,
        d.d("e1(kappa1)") + s * s - k1 * k1 + k2 * f1 - (a23 * a23 * R + e2),
        d.d("e1(kappa2)") - d.d("e3(sigma)") - k1 * f1 - k1 * k2 + a13 * a23 * R,
        d.d("e1(f2)") - d.d("e2(f1)") - f1 * f1 - f2 * f2 + 2 * f3 * s - 3 * s * s - (a33 * a33 * R + e2),
        -d.d("e2(sigma)") + 2 * k2 * s - a13 * a33 * R,
        d.d("e2(kappa1)") + d.d("e3(sigma)") + k2 * f2 - k1 * k2 + a13 * a23 * R,
        s * s + d.d("e2(kappa2)") - k1 * f2 - k2 * k2 - (a13 * a13 * R + e2),
    )


def curvature_relation_rhs(c: FrameCoefficients, p: BergerParameter) -> tuple:
    """Right-hand sides of the seven relations: the Berger curvature
    evaluated on the frame ``e_i``."""
    a13, a23, a33 = c.column
    R, e2 = p.R, p.eps_squared
    return (-a23 * a33 * R, a23 * a23 * R + e2, -a13 * a23 * R, a33 * a33 * R + e2,
            a13 * a33 * R, -a13 * a23 * R, a13 * a13 * R + e2)


def base_gauss_curvature(d: IntegrabilityData):
    """``K = e1(f2) - e2(f1) - f1^2 - f2^2 + 2 f3 sigma``."""
    return d.d("e1(f2)") - d.d("e2(f1)") - d.f1 * d.f1 - d.f2 * d.f2 + 2 * d.f3 * d.sigma


def laplacian(d: IntegrabilityData, name: str):
    """``Delta u = sum_i e_i e_i u - (f2 + kappa1) e1 u - (kappa2 - f1) e2 u``,
    from ``nabla_{e_i} e_i`` summed over the frame."""
    second = d.d(f"e1e1({name})") + d.d(f"e2e2({name})") + d.d(f"e3e3({name})")
    return second - (d.f2 + d.kappa1) * d.d(f"e1({name})") - (d.kappa2 - d.f1) * d.d(f"e2({name})")


def submersion_bitension(d: IntegrabilityData, gauss_curvature) -> tuple:
    """The two components of the bitension field of the submersion in an
    adapted frame; both vanish iff the submersion is biharmonic."""
    f1, f2, k1, k2 = d.f1, d.f2, d.kappa1, d.kappa2
    div_term = d.d("e1(f1)") + d.d("e2(f2)") - k1 * f1 - k2 * f2
    potential = -gauss_curvature + f1 * f1 + f2 * f2
    t1 = (-laplacian(d, "kappa1") - 2 * (f1 * d.d("e1(kappa2)") + f2 * d.d("e2(kappa2)"))
          - k2 * div_term + k1 * potential)
    t2 = (-laplacian(d, "kappa2") + 2 * (f1 * d.d("e1(kappa1)") + f2 * d.d("e2(kappa1)"))
          + k1 * div_term + k2 * potential)
    return (t1, t2)


@dataclass(frozen=True)
class AdaptedState:
    """Unknowns of an adapted frame with ``e1`` horizontal for E3
    (``a_1^3 = 0``, ``f1 = 0``): ``a2 = a_2^3``, ``a3 = a_3^3``."""

    a2: object
    a3: object
    sigma: object
    kappa1: object
    kappa2: object
    f2: object
    f3: object = 0


def adapted_relations_residuals(state: AdaptedState, p: BergerParameter, oracles: Mapping[str, object] | None = None,
                                constant: bool = False) -> tuple:
    """Residuals of the eight relations for ``e1 = a_1^1 E1 + a_1^2 E2``:
    derivatives of ``a2``, ``a3`` along the frame plus the algebraic
    relations ``kappa1 a3 = (sigma - eps - f3) a2`` and
    ``f2 a2 = (sigma + eps) a3``."""
    a2, a3, s, eps = state.a2, state.a3, state.sigma, p.epsilon
    if not isinstance(a2, RationalPoly) and not isinstance(a3, RationalPoly):
        if not _vanishes(a2 * a2 + a3 * a3 - 1) and (a2 * a2 + a3 * a3) > 1:
            raise ValueError("need (a_2^3)^2 + (a_3^3)^2 <= 1")
    oracles = dict(oracles or {})

    def get(key):
        if key in oracles:
            return oracles[key]
        if constant:
            return 0
        raise MissingOracleError(f"no value supplied for {key}")

    return (
        get("e1(a2)") + (s + eps) * a3,
        get("e1(a3)") - (s + eps) * a2,
        get("e2(a2)"),
        get("e2(a3)"),
        get("e3(a2)") + state.kappa2 * a3,
        get("e3(a3)") - state.kappa2 * a2,
        state.kappa1 * a3 - (s - eps - state.f3) * a2,
        state.f2 * a2 - (s + eps) * a3,
    )


def exact_epsilon(value) -> object:
    """Coerce an exact Berger parameter value (int, Fraction or "p/q")."""
    if isinstance(value, (int, Fraction, RationalPoly)):
        return Fraction(value) if isinstance(value, int) else value
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"exact arithmetic needs a rational epsilon, got {type(value).__name__}")
