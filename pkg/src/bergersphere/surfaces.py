"""Base curves on S^2(1/2), their horizontal lifts and Hopf-torus geometry.

Orientation: for a lift with ``gamma' = a X2 + b X3`` the unit normal of the
Hopf torus is ``xi = b E1 - a E2``.  Its image ``d psi(xi)`` is
``beta' x n`` where ``beta = psi o gamma`` and ``n = beta / |beta|`` is the
outward normal of S^2(1/2), so a positive geodesic curvature means the base
curve turns towards ``beta' x n``.  With this choice

    nabla_{gamma'} gamma' = kg xi,   nabla_{gamma'} E3 = eps xi,

so the geodesic torsion is ``-eps``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .frame import BergerParameter, berger_geometry
from .hopf import FIELD_MATRICES, hopf_map_batch
from .numerics import DEFAULTS, diff_along_axis, rk4_integrate

NORMAL_CURVATURE = 2.0  # S^2(1/2) as a sphere in R^3


@dataclass(frozen=True)
class BaseCurveSpec:
    """Arclength-parametrised curve on S^2(1/2) given by its geodesic
    curvature; ``constant_kg`` is set for circles."""

    kg: Callable[[float], float]
    constant_kg: Optional[float] = None
    radius: Optional[float] = None

    def __post_init__(self):
        if self.radius is not None:
            if not 0 < self.radius <= 0.5:
                raise ValueError(f"a circle on S^2(1/2) has radius in (0, 1/2], got {self.radius}")
            if self.constant_kg is None:
                raise ValueError("a radius needs a constant geodesic curvature")
            if abs(self.radius * self.euclidean_curvature(0.0) - 1) > DEFAULTS.algebraic:
                raise ValueError("radius and geodesic curvature disagree")

    @classmethod
    def constant(cls, kg: float) -> "BaseCurveSpec":
        kg = float(kg)
        return cls(kg=lambda s: kg, constant_kg=kg)

    def euclidean_curvature(self, s: float) -> float:
        k = self.kg(s)
        return math.sqrt(k * k + NORMAL_CURVATURE**2)


def circle_from_radius(r: float) -> BaseCurveSpec:
    """Circle of Euclidean radius ``r`` on S^2(1/2); ``kg = sqrt(1/r^2 - 4)``."""
    if not 0 < r <= 0.5:
        raise ValueError(f"radius must lie in (0, 1/2], got {r}")
    kg = math.sqrt(max(1.0 / (r * r) - 4.0, 0.0))
    return BaseCurveSpec(kg=lambda s: kg, constant_kg=kg, radius=float(r))


@dataclass(frozen=True)
class CurveState:
    s: float
    x: np.ndarray
    a: float
    b: float

    def velocity(self) -> np.ndarray:
        return self.a * (FIELD_MATRICES[1] @ self.x) + self.b * (FIELD_MATRICES[2] @ self.x)


@dataclass(frozen=True)
class LiftedCurve:
    """Samples of a horizontal lift: arclength ``s``, points ``x`` (rows),
    direction coefficients ``a``, ``b`` and the projected curve ``base``."""

    s: np.ndarray
    x: np.ndarray
    a: np.ndarray
    b: np.ndarray
    spec: BaseCurveSpec
    base: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "base", hopf_map_batch(self.x))

    @property
    def step(self) -> float:
        return float(self.s[1] - self.s[0])

    def __len__(self):
        return len(self.s)

    def __getitem__(self, i: int) -> CurveState:
        return CurveState(float(self.s[i]), self.x[i], float(self.a[i]), float(self.b[i]))

    def states(self) -> list[CurveState]:
        return [self[i] for i in range(len(self))]

    def constraint_drift(self) -> tuple[float, float]:
        """Max deviations of ``|x|^2`` and ``a^2 + b^2`` from 1."""
        return (float(np.max(np.abs(np.einsum("ij,ij->i", self.x, self.x) - 1))),
                float(np.max(np.abs(self.a**2 + self.b**2 - 1))))

    def horizontality_defect(self) -> float:
        vel = self.a[:, None] * (self.x @ FIELD_MATRICES[1].T) + self.b[:, None] * (self.x @ FIELD_MATRICES[2].T)
        vert = self.x @ FIELD_MATRICES[0].T
        return float(np.max(np.abs(np.einsum("ij,ij->i", vel, vert))))

    def closure_error(self) -> float:
        return float(np.linalg.norm(self.base[-1] - self.base[0]))


def _normalize_state(y: np.ndarray) -> np.ndarray:
    y = y.copy()
    y[:4] /= np.linalg.norm(y[:4])
    y[4:] /= np.hypot(y[4], y[5])
    return y


def frenet_integrate(
    spec: BaseCurveSpec,
    p: BergerParameter,
    steps: int = 4096,
    length: Optional[float] = None,
    x0=(1.0, 0.0, 0.0, 0.0),
    ab0=(1.0, 0.0),
) -> LiftedCurve:
    """Horizontal lift of the base curve by RK4 on

        x' = a X2(x) + b X3(x),   a' = kg b,   b' = -kg a,

    renormalising ``x`` and ``(a, b)`` after every step.  The system does not
    involve ``eps``; ``p`` is accepted so callers can pass one parameter
    object through the whole pipeline.  ``length`` defaults to one period
    ``2 pi r`` of a circle.
    """
    del p
    if steps < 16:
        raise ValueError(f"need at least 16 steps, got {steps}")
    if length is None:
        if spec.radius is None:
            raise ValueError("length is required for curves without a radius")
        length = 2 * math.pi * spec.radius
    if not (length > 0 and math.isfinite(length)):
        raise ValueError(f"length must be positive and finite, got {length}")
    x0 = np.asarray(x0, dtype=float)
    ab0 = np.asarray(ab0, dtype=float)
    if abs(x0 @ x0 - 1) > DEFAULTS.algebraic or abs(ab0 @ ab0 - 1) > DEFAULTS.algebraic:
        raise ValueError("initial point and direction must be unit vectors")
    m2, m3 = FIELD_MATRICES[1], FIELD_MATRICES[2]
    kg = spec.kg

    def rhs(s, y):
        x, a, b = y[:4], y[4], y[5]
        k = kg(s)
        return np.concatenate([a * (m2 @ x) + b * (m3 @ x), [k * b, -k * a]])

    h = length / steps
    ys = rk4_integrate(rhs, np.concatenate([x0, ab0]), h, steps, post_step=_normalize_state)
    return LiftedCurve(s=h * np.arange(steps + 1), x=ys[:, :4], a=ys[:, 4], b=ys[:, 5], spec=spec)


def frame_components_batch(points: np.ndarray, vectors: np.ndarray, eps: float) -> np.ndarray:
    """Vectorised :func:`~bergersphere.hopf.frame_components` over leading axes."""
    m1, m2, m3 = FIELD_MATRICES
    return np.stack([np.einsum("...i,...i->...", vectors, points @ m2.T),
                     np.einsum("...i,...i->...", vectors, points @ m3.T),
                     eps * np.einsum("...i,...i->...", vectors, points @ m1.T)], axis=-1)


def covariant_acceleration_defect(curve: LiftedCurve, p: BergerParameter, trim: int = 2) -> float:
    """Oracle for the reduced system: ``nabla_{gamma'} gamma' - kg xi`` in the
    Berger frame, with ``gamma'`` from finite differences of the sampled
    points and the connection from the Koszul table.  Returns the maximum
    norm over samples, ``trim`` samples dropped at each end."""
    _, conn, _ = berger_geometry(BergerParameter(float(p.epsilon)))
    gamma = np.asarray(conn.data, dtype=float)
    h = curve.step
    dx = diff_along_axis(curve.x, h)
    comps = frame_components_batch(curve.x, dx, float(p.epsilon))
    dcomps = diff_along_axis(comps, h)
    accel = dcomps + np.einsum("si,sj,ijk->sk", comps, comps, gamma)
    kg = np.array([curve.spec.kg(s) for s in curve.s])
    expected = kg[:, None] * np.stack([curve.b, -curve.a, np.zeros_like(curve.a)], axis=1)
    err = np.linalg.norm(accel - expected, axis=1)
    return float(np.max(err[trim:len(err) - trim]))


def measured_geodesic_curvature(base_samples, arclength_step: float) -> np.ndarray:
    """Geodesic curvature ``<beta'', beta' x n> / |beta'|^3`` of sampled
    points on S^2(1/2) from second-order finite differences."""
    beta = np.asarray(base_samples, dtype=float)
    if beta.ndim != 2 or beta.shape[1] != 3:
        raise ValueError("base samples must be an (n, 3) array")
    if len(beta) < 5:
        raise ValueError("need at least 5 samples")
    d1 = diff_along_axis(beta, arclength_step, order=1)
    d2 = diff_along_axis(beta, arclength_step, order=2)
    n = beta / np.linalg.norm(beta, axis=1)[:, None]
    conormal = np.cross(d1, n)
    speed = np.linalg.norm(d1, axis=1)
    return np.einsum("ij,ij->i", d2, conormal) / speed**3


@dataclass(frozen=True)
class TorusGeometry:
    H: float
    h11: float
    h12: float
    h21: float
    h22: float
    shape_norm_sq: float
    tau_g: float
    a3_normal: float

    def __post_init__(self):
        tol = DEFAULTS.algebraic
        if abs(self.h12 - self.h21) > tol:
            raise ValueError("second fundamental form must be symmetric")
        if abs(self.H - (self.h11 + self.h22) / 2) > tol:
            raise ValueError("H must be half the trace of the second fundamental form")
        if abs(self.shape_norm_sq - (self.h11**2 + self.h12**2 + self.h21**2 + self.h22**2)) > tol:
            raise ValueError("|A|^2 must equal the sum of squares of the entries")


def torus_geometry(spec: BaseCurveSpec, p: BergerParameter, s: float = 0.0) -> TorusGeometry:
    """Second fundamental form of the Hopf torus over ``spec`` in the frame
    ``(gamma', E3)``: ``h11 = kg``, ``h12 = h21 = eps``, ``h22 = 0``."""
    kg = float(spec.kg(s))
    eps = float(p.epsilon)
    return TorusGeometry(H=kg / 2, h11=kg, h12=eps, h21=eps, h22=0.0,
                         shape_norm_sq=kg * kg + 2 * eps * eps, tau_g=-eps, a3_normal=0.0)


@dataclass(frozen=True)
class ShapeOperatorMeasurement:
    shape_norm_sq: np.ndarray
    mean_curvature: np.ndarray
    normal_e3: np.ndarray

    @property
    def shape_norm_sq_mean(self) -> float:
        return float(np.mean(self.shape_norm_sq))


def periodic_derivative(values: np.ndarray, period: float, axis: int) -> np.ndarray:
    """Spectral derivative of samples on a uniform periodic grid."""
    n = values.shape[axis]
    k = np.fft.fftfreq(n, d=period / n) * 2 * math.pi
    shape = [1] * values.ndim
    shape[axis] = n
    spec = np.fft.fft(values, axis=axis) * (1j * k).reshape(shape)
    if n % 2 == 0:
        idx = [slice(None)] * values.ndim
        idx[axis] = n // 2
        spec[tuple(idx)] = 0
    return np.fft.ifft(spec, axis=axis).real


def torus_surface(curve: LiftedCurve, thetas: np.ndarray) -> np.ndarray:
    """Points ``e^{i theta} gamma(s)`` as an array ``[s, theta, 4]``."""
    x = curve.x
    jx = x @ FIELD_MATRICES[0].T
    c = np.cos(thetas)[None, :, None]
    sn = np.sin(thetas)[None, :, None]
    return c * x[:, None, :] + sn * jx[:, None, :]


def numeric_shape_operator(curve: LiftedCurve, p: BergerParameter, n_theta: int = 64,
                           s_indices=None) -> ShapeOperatorMeasurement:
    """Second fundamental form of the Hopf torus measured from the embedded
    surface ``F(s, theta) = e^{i theta} gamma(s)``.

    Tangents come from finite differences of ``F``; the unit normal is the
    cross product of their Berger-frame components; ``nabla nu`` is the
    finite-difference derivative of its components plus the Koszul
    connection terms.  Nothing here uses ``kg`` or the closed form.
    """
    eps = float(p.epsilon)
    pf = BergerParameter(eps)
    _, conn, _ = berger_geometry(pf)
    gamma = np.asarray(conn.data, dtype=float)
    thetas = 2 * math.pi * np.arange(n_theta) / n_theta
    F = torus_surface(curve, thetas)
    hs = curve.step
    Fs = diff_along_axis(F, hs, axis=0)
    Ft = periodic_derivative(F, 2 * math.pi, axis=1)
    cs = frame_components_batch(F, Fs, eps)
    ct = frame_components_batch(F, Ft, eps)
    nu = np.cross(cs, ct)
    nu /= np.linalg.norm(nu, axis=-1)[..., None]
    dnu_s = diff_along_axis(nu, hs, axis=0) + np.einsum("...i,...j,ijk->...k", cs, nu, gamma)
    dnu_t = periodic_derivative(nu, 2 * math.pi, axis=1) + np.einsum("...i,...j,ijk->...k", ct, nu, gamma)
    if s_indices is None:
        n = len(curve)
        s_indices = np.linspace(2, n - 3, 9).astype(int)
    s_indices = np.asarray(s_indices)
    tangents = np.stack([cs, ct], axis=-2)[s_indices]  # [k, theta, 2, 3]
    dnu = np.stack([dnu_s, dnu_t], axis=-2)[s_indices]
    G = np.einsum("...ai,...bi->...ab", tangents, tangents)
    B = -np.einsum("...ai,...bi->...ab", dnu, tangents)
    B = 0.5 * (B + np.swapaxes(B, -1, -2))
    S = np.linalg.solve(G, B)
    norm_sq = np.einsum("...ab,...ba->...", S, S)
    H = 0.5 * np.trace(S, axis1=-2, axis2=-1)
    return ShapeOperatorMeasurement(shape_norm_sq=norm_sq.ravel(), mean_curvature=np.abs(H).ravel(),
                                    normal_e3=np.abs(nu[s_indices][..., 2]).ravel())


def fiber_bracket_defect(curve: LiftedCurve, p: BergerParameter, n_theta: int = 64) -> float:
    """Max norm of ``[alpha2, alpha3]`` on the torus, where ``alpha2`` is the
    finite-difference lift direction ``dF/ds`` and ``alpha3 = X1 / eps``:
    ``eps [alpha3, alpha2] = d_theta alpha2 - X1 alpha2``."""
    eps = float(p.epsilon)
    thetas = 2 * math.pi * np.arange(n_theta) / n_theta
    F = torus_surface(curve, thetas)
    Fs = diff_along_axis(F, curve.step, axis=0)
    d_theta = periodic_derivative(Fs, 2 * math.pi, axis=1)
    rotated = Fs @ FIELD_MATRICES[0].T
    return float(np.max(np.linalg.norm(d_theta - rotated, axis=-1)) / abs(eps))
