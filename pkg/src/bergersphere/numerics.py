"""Shared numeric kernels: fixed-step RK4, central differences and bisection.

All tolerances used across the package live in :data:`DEFAULTS`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np


@dataclass(frozen=True)
class Tolerances:
    """Default tolerances, one record for the whole package."""

    algebraic: float = 1e-12  # identities that are exact in exact arithmetic
    constraint: float = 1e-10  # |x| = 1, a^2 + b^2 = 1 along integrated curves
    closure: float = 1e-6  # closing of projected base circles
    curvature_recovery: float = 1e-4  # finite-difference geodesic curvature
    shape_operator: float = 1e-5  # numeric second fundamental form
    bracket: float = 1e-6  # finite-difference Lie brackets
    covariant: float = 1e-6  # finite-difference covariant acceleration
    bisection: float = 1e-10  # final bracket width of root searches
    root_match: float = 1e-6  # scanned root vs closed form
    residual: float = 1e-9  # torus residuals for exact solutions
    root_filter_pad: float = 1e-9  # interval padding in the numeric root filter
    map_differential_step: float = 1e-6  # central-difference step on S^3
    classification: float = 1e-9


DEFAULTS = Tolerances()


class NonFiniteDerivativeError(FloatingPointError):
    pass


@dataclass(frozen=True)
class GridFunction:
    """Samples of a scalar function on a uniform grid."""

    values: np.ndarray
    step: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("GridFunction values must be one-dimensional")
        if not self.step > 0:
            raise ValueError(f"grid step must be positive, got {self.step}")
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)

    @property
    def grid(self) -> np.ndarray:
        return self.step * np.arange(len(self.values))


def rk4_integrate(
    f: Callable[[float, np.ndarray], np.ndarray],
    y0,
    step: float,
    n: int,
    t0: float = 0.0,
    post_step: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> np.ndarray:
    """Classical fourth-order Runge-Kutta with a fixed step.

    Parameters
    ----------
    f : callable
        Right-hand side ``f(t, y)``.
    y0 : array_like
        Initial state.
    step, n : float, int
        Step size and number of steps.
    post_step : callable, optional
        Applied to the state after every step (e.g. projection back onto a
        constraint manifold).

    Returns
    -------
    ndarray of shape ``(n + 1,) + y0.shape``, the initial state included.
    """
    if not step > 0:
        raise ValueError(f"step must be positive, got {step}")
    if n < 1:
        raise ValueError(f"need at least one step, got n={n}")
    y = np.array(y0, dtype=float)
    out = np.empty((n + 1,) + y.shape)
    out[0] = y
    h = step
    for i in range(n):
        t = t0 + i * h
        k1 = np.asarray(f(t, y))
        k2 = np.asarray(f(t + h / 2, y + h / 2 * k1))
        k3 = np.asarray(f(t + h / 2, y + h / 2 * k2))
        k4 = np.asarray(f(t + h, y + h * k3))
        if not (np.all(np.isfinite(k1)) and np.all(np.isfinite(k2))
                and np.all(np.isfinite(k3)) and np.all(np.isfinite(k4))):
            raise NonFiniteDerivativeError(f"non-finite derivative at step {i}, t={t!r}")
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if post_step is not None:
            y = post_step(y)
        out[i + 1] = y
    return out


def central_diff(g: GridFunction, order: int = 1) -> GridFunction:
    """Second-order accurate first or second derivative on a uniform grid.

    Interior points use central stencils, the endpoints one-sided
    second-order stencils.
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    v = g.values
    h = g.step
    n = len(v)
    d = np.empty_like(v)
    if order == 1:
        if n < 3:
            raise ValueError("first derivative needs at least 3 samples")
        d[1:-1] = (v[2:] - v[:-2]) / (2 * h)
        d[0] = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h)
        d[-1] = (3 * v[-1] - 4 * v[-2] + v[-3]) / (2 * h)
    else:
        if n < 5:
            raise ValueError("second derivative needs at least 5 samples")
        d[1:-1] = (v[2:] - 2 * v[1:-1] + v[:-2]) / h**2
        d[0] = (2 * v[0] - 5 * v[1] + 4 * v[2] - v[3]) / h**2
        d[-1] = (2 * v[-1] - 5 * v[-2] + 4 * v[-3] - v[-4]) / h**2
    return GridFunction(d, h)


def diff_along_axis(values: np.ndarray, step: float, axis: int = 0, order: int = 1) -> np.ndarray:
    """:func:`central_diff` applied along one axis of an array of samples."""
    moved = np.moveaxis(np.asarray(values, dtype=float), axis, 0)
    flat = moved.reshape(moved.shape[0], -1)
    out = np.empty_like(flat)
    for j in range(flat.shape[1]):
        out[:, j] = central_diff(GridFunction(flat[:, j], step), order).values
    return np.moveaxis(out.reshape(moved.shape), 0, axis)


class NoSignChangeError(ValueError):
    pass


def bisect(f: Callable[[float], float], lo: float, hi: float, tol: float = DEFAULTS.bisection) -> float:
    """Bisection on a sign-changing bracket; returns the midpoint of the
    final bracket, whose width is at most ``tol``."""
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if flo * fhi > 0:
        raise NoSignChangeError(f"f does not change sign on [{lo}, {hi}]")
    n = max(0, math.ceil(math.log2((hi - lo) / tol)))
    for _ in range(n):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if flo * fm < 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def sign_change_brackets(xs: np.ndarray, ys: np.ndarray) -> list[tuple[float, float]]:
    """Consecutive sample pairs where ``ys`` changes sign (exact zeros count
    as brackets of zero width around that sample)."""
    brackets = []
    for i in range(len(xs) - 1):
        if ys[i] == 0:
            brackets.append((float(xs[i]), float(xs[i])))
        elif ys[i] * ys[i + 1] < 0:
            brackets.append((float(xs[i]), float(xs[i + 1])))
    if len(ys) and ys[-1] == 0:
        brackets.append((float(xs[-1]), float(xs[-1])))
    return brackets
