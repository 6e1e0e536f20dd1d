"""Hopf fibration S^3 -> S^2(1/2), the parallelizing fields X1, X2, X3 and
the vertical/horizontal splitting of the Berger metric."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frame import BergerParameter, ConnectionTable, FrameVector
from .numerics import DEFAULTS

# X_i(x) = M_i @ x; all three fields are linear in the ambient coordinates.
_X1 = np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], dtype=float)
_X2 = np.array([[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]], dtype=float)
_X3 = np.array([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]], dtype=float)
FIELD_MATRICES = (_X1, _X2, _X3)


@dataclass(frozen=True)
class SpherePoint:
    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        if x.shape != (4,):
            raise ValueError("a point of S^3 has four coordinates")
        if abs(x @ x - 1) > DEFAULTS.algebraic:
            raise ValueError(f"point is off S^3: |x|^2 = {x @ x!r}")
        object.__setattr__(self, "x", x)


@dataclass(frozen=True)
class BasePoint:
    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.shape != (3,):
            raise ValueError("a point of S^2(1/2) has three coordinates")
        if abs(p @ p - 0.25) > DEFAULTS.algebraic:
            raise ValueError(f"point is off S^2(1/2): |p|^2 = {p @ p!r}")
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class AmbientTangent:
    at: SpherePoint
    v: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.v, dtype=float)
        if abs(v @ self.at.x) > DEFAULTS.algebraic * max(1.0, float(np.linalg.norm(v))):
            raise ValueError("vector is not tangent to S^3 at the given point")
        object.__setattr__(self, "v", v)


def _coords(x) -> np.ndarray:
    if isinstance(x, SpherePoint):
        return x.x
    return SpherePoint(x).x


def hopf_map(x) -> np.ndarray:
    """``psi(x) = 1/2 (2x1x3 + 2x2x4, 2x2x3 - 2x1x4, x1^2 + x2^2 - x3^2 - x4^2)``,
    i.e. ``(z conj(w), (|z|^2 - |w|^2)/2)`` with ``z = x1 + i x2``,
    ``w = x3 + i x4``."""
    x1, x2, x3, x4 = _coords(x)
    return np.array([x1 * x3 + x2 * x4, x2 * x3 - x1 * x4, 0.5 * (x1 * x1 + x2 * x2 - x3 * x3 - x4 * x4)])


def _hopf_map_unchecked(x: np.ndarray) -> np.ndarray:
    x1, x2, x3, x4 = x
    return np.array([x1 * x3 + x2 * x4, x2 * x3 - x1 * x4, 0.5 * (x1 * x1 + x2 * x2 - x3 * x3 - x4 * x4)])


def hopf_map_batch(xs: np.ndarray) -> np.ndarray:
    """Vectorised :func:`hopf_map` over rows of ``xs`` (no validation)."""
    xs = np.asarray(xs, dtype=float)
    x1, x2, x3, x4 = xs[..., 0], xs[..., 1], xs[..., 2], xs[..., 3]
    return np.stack([x1 * x3 + x2 * x4, x2 * x3 - x1 * x4, 0.5 * (x1**2 + x2**2 - x3**2 - x4**2)], axis=-1)


def complex_hopf_map(z: complex, w: complex, conjugate_second: bool = True) -> np.ndarray:
    """Complex-coordinate form ``1/2 (2 z w*, |z|^2 - |w|^2)``.

    With ``conjugate_second=False`` this evaluates ``1/2 (2 z w, ...)``,
    which is not constant on the fibres ``(e^{it} z, e^{it} w)``; kept so the
    failure can be demonstrated.
    """
    prod = z * (np.conj(w) if conjugate_second else w)
    return np.array([prod.real, prod.imag, 0.5 * (abs(z) ** 2 - abs(w) ** 2)])


def frame_fields(x) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``X1 = (-x2, x1, -x4, x3)``, ``X2 = (-x4, -x3, x2, x1)``,
    ``X3 = (-x3, x4, x1, -x2)``; X1 spans the fibre direction."""
    x = _coords(x)
    return tuple(m @ x for m in FIELD_MATRICES)


def fiber_rotate(x, theta: float) -> np.ndarray:
    """``cos(theta) x + sin(theta) X1(x)``, i.e. ``(z, w) -> e^{i theta}(z, w)``."""
    x = _coords(x)
    return np.cos(theta) * x + np.sin(theta) * (_X1 @ x)


def lie_bracket_linear(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Bracket of the linear fields ``x -> a x`` and ``x -> b x`` as a
    matrix: ``[A, B](x) = DB(Ax) - DA(Bx) = (b a - a b) x``."""
    return b @ a - a @ b


def numeric_lie_bracket(f, g, x: np.ndarray, h: float = DEFAULTS.map_differential_step) -> np.ndarray:
    """Finite-difference bracket ``[F, G](x) = DG_x F(x) - DF_x G(x)`` of
    two ambient vector fields given as callables."""
    x = np.asarray(x, dtype=float)
    fx, gx = f(x), g(x)
    dg_f = (g(x + h * fx) - g(x - h * fx)) / (2 * h)
    df_g = (f(x + h * gx) - f(x - h * gx)) / (2 * h)
    return dg_f - df_g


def differential(x, v: np.ndarray, h: float = DEFAULTS.map_differential_step) -> np.ndarray:
    """Map-differential oracle: ``d psi_x(v)`` by central differences along
    the curve ``normalize(x +- h v)`` on S^3."""
    x = _coords(x)
    v = np.asarray(v, dtype=float)
    xp = x + h * v
    xm = x - h * v
    xp /= np.linalg.norm(xp)
    xm /= np.linalg.norm(xm)
    return (_hopf_map_unchecked(xp) - _hopf_map_unchecked(xm)) / (2 * h)


@dataclass(frozen=True)
class MetricSplit:
    vertical: np.ndarray
    horizontal: np.ndarray
    norm: float


def metric_split(x, v, p: BergerParameter) -> MetricSplit:
    """Vertical part ``<v, X1> X1``, horizontal remainder and the Berger
    norm ``sqrt(|horizontal|^2 + eps^2 <v, X1>^2)``."""
    tangent = v if isinstance(v, AmbientTangent) else AmbientTangent(SpherePoint(_coords(x)), v)
    x1 = _X1 @ tangent.at.x
    vert_coeff = float(tangent.v @ x1)
    vertical = vert_coeff * x1
    horizontal = tangent.v - vertical
    eps = float(p.epsilon)
    return MetricSplit(vertical, horizontal, float(np.sqrt(horizontal @ horizontal + eps * eps * vert_coeff**2)))


def frame_components(x: np.ndarray, v: np.ndarray, p: BergerParameter) -> np.ndarray:
    """Components of an ambient tangent vector in the Berger frame
    ``E1 = X2, E2 = X3, E3 = X1 / eps``."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    eps = float(p.epsilon)
    return np.array([v @ (_X2 @ x), v @ (_X3 @ x), eps * (v @ (_X1 @ x))])


def submersion_tension(conn: ConnectionTable, vertical_index: int = 3) -> FrameVector:
    """Frame components of ``nabla_{E_v} E_v`` for the vertical frame field
    ``E_v``; the submersion is harmonic iff this vanishes."""
    if vertical_index not in (1, 2, 3):
        raise ValueError("frame indices are 1, 2, 3")
    v = vertical_index
    return FrameVector(tuple(conn[v, v, k] for k in (1, 2, 3)))
