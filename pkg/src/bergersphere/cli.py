"""Command-line entry point.

Exit codes: 0 all checks pass, 1 a check failed (report still written),
2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .frame import BergerParameter
from .reports import (CURVE_COLUMNS, SCAN_COLUMNS, curve_report, emit, geometry_report, scan_report, to_csv_text,
                      to_json_text)

COMMANDS = ("verify-geometry", "scan-tori", "integrate-curve", "certify-submersion")
_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    epsilon: str
    r_min: float = 0.05
    r_max: float = 0.49
    samples: int = 2048
    radius: float = 0.3
    steps: int = 4096
    length: Optional[float] = None
    output: Optional[str] = None
    format: str = "json"
    jobs: int = 1

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.command == "scan-tori" and not self.r_min < self.r_max:
            raise ConfigError("--r-min must be below --r-max")
        if self.format == "csv" and self.command in ("verify-geometry", "certify-submersion"):
            raise ConfigError(f"{self.command} only writes JSON")


def parse_numeric_epsilon(text: str) -> BergerParameter:
    """Decimal epsilon for the floating-point paths."""
    if "/" in text:
        raise ConfigError(f"epsilon {text!r} is an exact rational; numeric commands take a decimal")
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"cannot parse epsilon {text!r}") from None
    if value == 0 or value != value or value in (float("inf"), float("-inf")):
        raise ConfigError("epsilon must be finite and nonzero")
    return BergerParameter(value)


def parse_exact_epsilon(text: str):
    """``"p/q"``, an integer, or ``"symbolic"`` for the certifier."""
    if text == "symbolic":
        return text
    if not _RATIONAL.match(text.strip()):
        raise ConfigError(f"certify-submersion needs an exact rational 'p/q' or 'symbolic', got {text!r}")
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"cannot parse epsilon {text!r}") from None
    if value == 0 or value * value == 1:
        raise ConfigError("the certificate needs eps != 0 and eps^2 != 1")
    return value


def run(cfg: RunConfig) -> int:
    if cfg.command == "certify-submersion":
        from .submersion.certificate import eliminate_and_bound
        eps = parse_exact_epsilon(cfg.epsilon)
        cert = eliminate_and_bound(eps)
        report = cert.to_json()
        ok = report["degree"] == 7 and report["leading_coefficient"] == "80"
        if eps != "symbolic":
            ok = ok and report["conclusion"] == "biharmonic_iff_harmonic"
        emit(to_json_text(report), cfg.output)
        return 0 if ok else 1

    p = parse_numeric_epsilon(cfg.epsilon)
    if cfg.command == "verify-geometry":
        report, ok = geometry_report(p)
        emit(to_json_text(report), cfg.output)
    elif cfg.command == "scan-tori":
        summary, rows, ok = scan_report(p, cfg.r_min, cfg.r_max, cfg.samples, cfg.jobs)
        if cfg.format == "csv":
            emit(to_csv_text(SCAN_COLUMNS, rows), cfg.output)
            sys.stderr.write(to_json_text(summary))
        else:
            summary["profile"] = [dict(zip(SCAN_COLUMNS, r)) for r in rows]
            emit(to_json_text(summary), cfg.output)
    else:
        summary, rows, ok = curve_report(p, cfg.radius, cfg.steps, cfg.length)
        if cfg.format == "csv":
            emit(to_csv_text(CURVE_COLUMNS, rows), cfg.output)
            sys.stderr.write(to_json_text(summary))
        else:
            summary["samples"] = [dict(zip(CURVE_COLUMNS, r)) for r in rows]
            emit(to_json_text(summary), cfg.output)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bergersphere", description="Berger-sphere verification runs")
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--epsilon", required=True,
                        help="decimal for numeric commands; 'p/q' or 'symbolic' for certify-submersion")
    common.add_argument("--output", "-o", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_parser("verify-geometry", parents=[common])
    scan = sub.add_parser("scan-tori", parents=[common])
    scan.add_argument("--r-min", type=float, default=0.05)
    scan.add_argument("--r-max", type=float, default=0.49)
    scan.add_argument("--samples", type=int, default=2048)
    scan.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    curve = sub.add_parser("integrate-curve", parents=[common])
    curve.add_argument("--radius", type=float, default=0.3)
    curve.add_argument("--steps", type=int, default=4096)
    curve.add_argument("--length", type=float, default=None, help="arclength (default one period 2 pi r)")
    sub.add_parser("certify-submersion", parents=[common])
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    fields = {k: v for k, v in vars(args).items() if v is not None or k in ("output", "length")}
    try:
        cfg = RunConfig(**fields)
        return run(cfg)
    except (ConfigError, ValueError, TypeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"error: cannot write output: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
