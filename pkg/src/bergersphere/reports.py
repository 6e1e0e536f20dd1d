"""Report assembly and deterministic emission for the command-line runs."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Optional

import numpy as np

from .biharmonic import proper_biharmonic_radius, scan_radii
from .frame import (BergerParameter, berger_connection_closed_form, berger_geometry, ricci_alternative_trace)
from .hopf import (FIELD_MATRICES, differential, fiber_rotate, frame_fields, hopf_map, lie_bracket_linear,
                   submersion_tension)
from .numerics import DEFAULTS
from .surfaces import circle_from_radius, frenet_integrate
from .submersion.integrability import base_gauss_curvature, hopf_data

SCAN_COLUMNS = ("epsilon", "r", "kg", "residual_normal", "residual_t1", "residual_t2")
CURVE_COLUMNS = ("s", "x1", "x2", "x3", "x4", "a", "b", "p1", "p2", "p3")
FLOAT_DIGITS = 15


@dataclass(frozen=True)
class Check:
    name: str
    expected: float
    computed: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(abs(self.computed - self.expected) <= self.tolerance)

    def to_json(self) -> dict:
        return {"name": self.name, "expected": self.expected, "computed": self.computed,
                "tolerance": self.tolerance, "pass": self.passed}


def _f(x) -> float:
    return float(x)


def geometry_checks(p: BergerParameter, n_points: int = 16, seed: int = 0) -> list[Check]:
    """Frame-algebra and Hopf-fibration checks at one parameter value."""
    eps = _f(p.epsilon)
    tol = DEFAULTS.algebraic
    sc, conn, curv = berger_geometry(p)
    ref = berger_connection_closed_form(p)
    riem = np.asarray(curv.riem.data, dtype=float)
    ric = np.asarray(curv.ricci.data, dtype=float)
    checks = [
        Check("connection_vs_closed_form_max_error", 0.0,
              float(np.max(np.abs(np.asarray(conn.data, float) - np.asarray(ref.data, float)))), tol),
        Check("connection_metric_compatibility", 0.0,
              float(np.max(np.abs(np.asarray(conn.data, float) + np.swapaxes(np.asarray(conn.data, float), 1, 2)))),
              tol),
        Check("R_1212", 4 - 3 * eps * eps, float(riem[0, 1, 0, 1]), tol),
        Check("R_1313", eps * eps, float(riem[0, 2, 0, 2]), tol),
        Check("R_2323", eps * eps, float(riem[1, 2, 1, 2]), tol),
    ]
    named = {(0, 1, 0, 1), (0, 2, 0, 2), (1, 2, 1, 2)}
    others = 0.0
    for i, j, k, l in product(range(3), repeat=4):
        if i < j and k < l and (i, j) <= (k, l) and (i, j, k, l) not in named:
            others = max(others, abs(float(riem[i, j, k, l])))
    checks.append(Check("riemann_other_components_max", 0.0, others, tol))
    sym = max(float(np.max(np.abs(riem + np.swapaxes(riem, 0, 1)))),
              float(np.max(np.abs(riem + np.swapaxes(riem, 2, 3)))),
              float(np.max(np.abs(riem - np.transpose(riem, (2, 3, 0, 1))))))
    checks.append(Check("riemann_symmetries_max_defect", 0.0, sym, tol))
    for i, val in enumerate((4 - 2 * eps * eps, 4 - 2 * eps * eps, 2 * eps * eps)):
        checks.append(Check(f"ricci_{i + 1}{i + 1}", val, float(ric[i, i]), tol))
    checks.append(Check("ricci_off_diagonal_max", 0.0, float(np.max(np.abs(ric - np.diag(np.diag(ric))))), tol))
    checks.append(Check("ricci_trace_agreement", 0.0,
                        float(np.max(np.abs(ric - np.asarray(ricci_alternative_trace(curv), float)))), tol))

    # brackets of X1, X2, X3 against the frame structure constants rescaled by E3 = X1 / eps
    m1, m2, m3 = FIELD_MATRICES
    bracket_err = max(float(np.max(np.abs(lie_bracket_linear(m2, m3) - 2 * m1))),
                      float(np.max(np.abs(lie_bracket_linear(m3, m1) - 2 * m2))),
                      float(np.max(np.abs(lie_bracket_linear(m1, m2) - 2 * m3))))
    checks.append(Check("field_brackets_max_error", 0.0, bracket_err, tol))
    tension = submersion_tension(conn)
    checks.append(Check("hopf_submersion_tension_norm", 0.0, float(np.linalg.norm(tension.as_array())), 0.0))
    checks.append(Check("base_gauss_curvature", 4.0, _f(base_gauss_curvature(hopf_data(p))), tol))

    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(n_points, 4))
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    on_base = fib = vert = horiz = 0.0
    for x in pts:
        y = hopf_map(x)
        on_base = max(on_base, abs(float(y @ y) - 0.25))
        fib = max(fib, float(np.max(np.abs(hopf_map(fiber_rotate(x, 0.7)) - y))))
        f1, f2, f3 = frame_fields(x)
        vert = max(vert, float(np.linalg.norm(differential(x, f1))))
        d2, d3 = differential(x, f2), differential(x, f3)
        horiz = max(horiz, abs(float(d2 @ d2) - 1), abs(float(d3 @ d3) - 1), abs(float(d2 @ d3)))
    checks += [
        Check("hopf_image_on_base_sphere", 0.0, on_base, tol),
        Check("hopf_fiber_invariance", 0.0, fib, tol),
        Check("hopf_vertical_kernel", 0.0, vert, DEFAULTS.bracket),
        Check("hopf_horizontal_isometry", 0.0, horiz, DEFAULTS.bracket),
    ]
    return checks


def geometry_report(p: BergerParameter) -> tuple[dict, bool]:
    checks = geometry_checks(p)
    ok = all(c.passed for c in checks)
    return {"command": "verify-geometry", "epsilon": _f(p.epsilon), "R": _f(p.R),
            "checks": [c.to_json() for c in checks], "pass": ok}, ok


def scan_report(p: BergerParameter, r_min: float, r_max: float, samples: int, jobs: int = 1):
    """Returns ``(summary, rows, ok)``."""
    res = scan_radii(p, r_min, r_max, samples, jobs=jobs)
    eps2 = _f(p.eps_squared)
    if eps2 < 1:
        closed = proper_biharmonic_radius(p)
        inside = r_min <= closed <= r_max
        root = res.roots[0] if len(res.roots) == 1 else None
        err = abs(root - closed) if root is not None else None
        ok = (len(res.roots) == 1 and err <= DEFAULTS.root_match) if inside else not res.roots
    else:
        closed, root, err = None, None, None
        ok = not res.roots
    summary = {"command": "scan-tori", "epsilon": _f(p.epsilon), "r_min": r_min, "r_max": r_max,
               "samples": samples, "roots": list(res.roots), "root": root, "closed_form": closed,
               "abs_error": err, "minimal_root": res.minimal_root, "pass": bool(ok)}
    return summary, list(res.rows()), bool(ok)


def curve_report(p: BergerParameter, radius: float, steps: int, length: Optional[float] = None):
    """Returns ``(summary, rows, ok)`` for the horizontal lift of a circle."""
    spec = circle_from_radius(radius)
    curve = frenet_integrate(spec, p, steps=steps, length=length)
    drift = curve.constraint_drift()
    full_period = length is None or math.isclose(length, 2 * math.pi * radius, rel_tol=1e-12)
    closure = curve.closure_error()
    ok = max(drift) <= DEFAULTS.constraint and (closure <= DEFAULTS.closure or not full_period)
    rows = [(float(curve.s[i]), *map(float, curve.x[i]), float(curve.a[i]), float(curve.b[i]),
             *map(float, curve.base[i])) for i in range(len(curve))]
    summary = {"command": "integrate-curve", "epsilon": _f(p.epsilon), "radius": radius,
               "kg": spec.constant_kg, "steps": steps, "length": float(curve.s[-1]),
               "constraint_drift_point": drift[0], "constraint_drift_direction": drift[1],
               "closure_error": closure if full_period else None, "pass": bool(ok)}
    return summary, rows, bool(ok)


def _round(obj):
    """Fix floats at 15 significant digits so output bytes are stable."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return str(x)
        return float(f"{x:.{FLOAT_DIGITS}g}")
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def to_json_text(report: dict) -> str:
    return json.dumps(_round(report), sort_keys=True, indent=2) + "\n"


def to_csv_text(columns: Iterable[str], rows: Iterable[tuple]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([f"{float(v):.{FLOAT_DIGITS}g}" for v in row])
    return buf.getvalue()


def emit(text: str, path: Optional[str]) -> None:
    """Write ``text`` to ``path`` (stdout when ``None`` or ``-``).
    I/O errors propagate as ``OSError``."""
    if path is None or path == "-":
        import sys
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
