"""Local interpolation-convergence experiments on the built-in test cases.

The procedure, per test case and per order n: draw seeded random centers in
the case's domain, build a family of p = 2n+1 waves with q = max(n-1, 1),
match the exact solution's Taylor jet of order n in the least-squares sense,
then record the maximum error over a circle of radius h around the center,
for a decreasing grid of radii.  Reported errors are worst-case over the
centers; orders of convergence are least-squares slopes of log(error) against
log(h) restricted to the window where the error is between 1e-12 and 1e-2
(below the pre-asymptotic bend, above the conditioning floor).

Center sampling note: candidates where |s(center)| < 1e-3 are rejected and
redrawn, since the direction normalization degenerates where the zeroth-order
coefficient vanishes.  The rejection rule and count are recorded in the
report metadata.

Everything is a pure function of the configuration, including the emitted
data files (byte-identical for equal configurations).
"""

from __future__ import annotations

import json
import math
import os
import tempfile
import warnings
from dataclasses import dataclass, field

import numpy as np

from .cases import TestCase, get_case
from .construct import (
    evaluate,
    evaluate_gradient,
    gpw_family,
)
from .errors import GPWError
from .interpolation import build_matrix, condition_number, gpw_taylor_column, match_solution
from .series import tri_len

_REJECT_TOL = 1e-3
_MAX_CONSECUTIVE_REJECTS = 1000
_FIT_WINDOW = (1e-12, 1e-2)
_MATCH_TOL = 1e-3  # generous: conditioning floors are data, not failures

FAMILIES = ("amplitude", "phase")


def default_h_grid() -> tuple[float, ...]:
    """Radii 10^(-k/2), k = 0..12 (1 down to 1e-6).

    Starting at h = 1 keeps at least three points inside the order-fit
    window even at the steepest convergence orders swept here, where the
    error drops three decades per half-decade of h.
    """
    return tuple(10.0 ** (-k / 2.0) for k in range(13))


def comparison_h_grid() -> tuple[float, ...]:
    """Radii 10^(-k/2), k = -2..12 (10 down to 1e-6), for pre-asymptotic studies."""
    return tuple(10.0 ** (-k / 2.0) for k in range(-2, 13))


@dataclass(frozen=True)
class SweepConfig:
    case: str
    n_range: tuple[int, ...]
    num_centers: int = 50
    h_values: tuple[float, ...] = field(default_factory=default_h_grid)
    circle_samples: int = 64
    seed: int = 0
    angle_offset: float = math.pi / 6.0
    normalization: str = "general"
    families: tuple[str, ...] = ("amplitude",)

    def __post_init__(self):
        if self.num_centers < 1:
            raise GPWError("num_centers must be at least 1")
        hs = tuple(float(h) for h in self.h_values)
        if any(b >= a for a, b in zip(hs, hs[1:])):
            raise GPWError("h_values must be strictly decreasing")
        if not self.n_range:
            raise GPWError("n_range must be nonempty")
        if any(n < 1 for n in self.n_range):
            raise GPWError("orders in n_range must be positive")
        for fam in self.families:
            if fam not in FAMILIES:
                raise GPWError(f"unknown family {fam!r}")
        if not self.families:
            raise GPWError("families must be nonempty")

    def as_dict(self) -> dict:
        return {
            "case": self.case,
            "n_range": list(self.n_range),
            "num_centers": self.num_centers,
            "h_values": list(self.h_values),
            "circle_samples": self.circle_samples,
            "seed": self.seed,
            "angle_offset": self.angle_offset,
            "normalization": self.normalization,
            "families": list(self.families),
        }


@dataclass
class Field:
    """A value/gradient pair of vectorized callables on points (x, y)."""

    value: object
    gradient: object


def exact_field(case: TestCase) -> Field:
    return Field(value=case.exact_value, gradient=case.exact_gradient)


def combination_field(gpws, weights) -> Field:
    """Linear combination of constructed waves as a Field."""
    weights = np.asarray(weights, dtype=np.complex128)

    def value(x, y):
        total = 0.0 + 0.0j
        for w, g in zip(weights, gpws):
            total = total + w * evaluate(g, x, y)
        return total

    def gradient(x, y):
        gx = 0.0 + 0.0j
        gy = 0.0 + 0.0j
        for w, g in zip(weights, gpws):
            dx, dy = evaluate_gradient(g, x, y)
            gx = gx + w * dx
            gy = gy + w * dy
        return gx, gy

    return Field(value=value, gradient=gradient)


def _sample_centers_counted(case: TestCase, num: int, seed: int):
    x0, x1, y0, y1 = case.domain
    rng = np.random.default_rng(seed)
    centers = []
    rejections = 0
    consecutive = 0
    while len(centers) < num:
        x = rng.uniform(x0, x1)
        y = rng.uniform(y0, y1)
        if abs(case.operator.s.value_at((x, y))) < _REJECT_TOL:
            rejections += 1
            consecutive += 1
            if consecutive > _MAX_CONSECUTIVE_REJECTS:
                raise GPWError("domain dominated by cut-off")
            continue
        consecutive = 0
        centers.append((float(x), float(y)))
    return centers, rejections


def sample_centers(case: TestCase, num: int, seed: int) -> list[tuple[float, float]]:
    """Seeded uniform centers, redrawn while |s(center)| < 1e-3."""
    return _sample_centers_counted(case, num, seed)[0]


def circle_error(u_exact: Field, u_approx: Field, center, h: float, samples: int = 64):
    """Max value and gradient error over equispaced points of the radius-h circle."""
    if samples < 8:
        raise GPWError("samples must be at least 8")
    phi = 2.0 * math.pi * np.arange(samples) / samples
    x = center[0] + h * np.cos(phi)
    y = center[1] + h * np.sin(phi)
    with np.errstate(over="ignore", invalid="ignore"):
        dv = np.abs(np.asarray(u_exact.value(x, y)) - np.asarray(u_approx.value(x, y)))
        gx_e, gy_e = u_exact.gradient(x, y)
        gx_a, gy_a = u_approx.gradient(x, y)
        dg = np.sqrt(
            np.abs(np.asarray(gx_e) - np.asarray(gx_a)) ** 2
            + np.abs(np.asarray(gy_e) - np.asarray(gy_a)) ** 2
        )
    # an overflowed approximation is infinitely wrong, not silently ignored
    dv = np.where(np.isnan(dv), np.inf, dv)
    dg = np.where(np.isnan(dg), np.inf, dg)
    return float(np.max(dv)), float(np.max(dg))


def fit_order(h_values, errors, window=_FIT_WINDOW):
    """Least-squares slope of log(error) vs log(h) inside the error window.

    Returns None ("saturated") when fewer than three points survive.
    """
    h = np.asarray(h_values, dtype=float)
    e = np.asarray(errors, dtype=float)
    mask = np.isfinite(e) & (e >= window[0]) & (e <= window[1])
    if int(np.sum(mask)) < 3:
        return None
    slope = np.polyfit(np.log(h[mask]), np.log(e[mask]), 1)[0]
    return float(slope)


@dataclass
class ConvergenceReport:
    config: SweepConfig
    centers: list
    errors: dict  # (family, n) -> ndarray over h of worst value errors
    gradient_errors: dict  # (family, n) -> ndarray over h
    orders: dict  # (family, n) -> float | None
    gradient_orders: dict  # (family, n) -> float | None
    condition_numbers: dict  # (family, n) -> ndarray over centers
    matching_failures: int
    center_rejections: int

    def error_floor(self, family: str, n: int) -> float:
        return float(np.min(self.errors[(family, n)]))


def run_convergence(config: SweepConfig) -> ConvergenceReport:
    """Run the full sweep described by ``config``; deterministic in the seed."""
    case = get_case(config.case)
    centers, rejections = _sample_centers_counted(case, config.num_centers, config.seed)
    hs = np.asarray(config.h_values, dtype=float)
    phi = 2.0 * math.pi * np.arange(config.circle_samples) / config.circle_samples
    # all circle points at once: shape (len(hs), samples)
    cosphi = np.cos(phi)[None, :]
    sinphi = np.sin(phi)[None, :]
    exact = exact_field(case)

    errors = {}
    gradient_errors = {}
    conds = {}
    failures = 0
    for n in config.n_range:
        p = 2 * n + 1
        q = max(n - 1, 1)
        for fam in config.families:
            errors[(fam, n)] = np.zeros(hs.size)
            gradient_errors[(fam, n)] = np.zeros(hs.size)
            conds[(fam, n)] = []
        for center in centers:
            px = center[0] + hs[:, None] * cosphi
            py = center[1] + hs[:, None] * sinphi
            ue = np.asarray(exact.value(px, py))
            ge_x, ge_y = exact.gradient(px, py)
            U = case.exact_taylor(center, n).coeffs
            for fam in config.families:
                gpws = gpw_family(
                    case.operator,
                    center,
                    p,
                    q,
                    angle_offset=config.angle_offset,
                    mode=config.normalization,
                    family=fam,
                )
                M = build_matrix([gpw_taylor_column(g, n) for g in gpws], n)
                conds[(fam, n)].append(condition_number(M))
                match = match_solution(M, U, tol=_MATCH_TOL)
                if not match.ok:
                    failures += 1
                    continue
                ua = combination_field(gpws, match.x)
                with np.errstate(over="ignore", invalid="ignore"):
                    uv = np.asarray(ua.value(px, py))
                    ga_x, ga_y = ua.gradient(px, py)
                    dv = np.abs(ue - uv)
                    dg = np.sqrt(
                        np.abs(np.asarray(ge_x) - np.asarray(ga_x)) ** 2
                        + np.abs(np.asarray(ge_y) - np.asarray(ga_y)) ** 2
                    )
                # overflowed approximations count as infinitely wrong
                dv = np.where(np.isnan(dv), np.inf, dv)
                dg = np.where(np.isnan(dg), np.inf, dg)
                errors[(fam, n)] = np.maximum(errors[(fam, n)], np.max(dv, axis=1))
                gradient_errors[(fam, n)] = np.maximum(
                    gradient_errors[(fam, n)], np.max(dg, axis=1)
                )
        for fam in config.families:
            conds[(fam, n)] = np.asarray(conds[(fam, n)])

    orders = {key: fit_order(hs, err) for key, err in errors.items()}
    gradient_orders = {key: fit_order(hs, err) for key, err in gradient_errors.items()}
    return ConvergenceReport(
        config=config,
        centers=centers,
        errors=errors,
        gradient_errors=gradient_errors,
        orders=orders,
        gradient_orders=gradient_orders,
        condition_numbers=conds,
        matching_failures=failures,
        center_rejections=rejections,
    )


def _column_name(family: str, n: int) -> str:
    return ("errAn" if family == "amplitude" else "errPn") + str(n)


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _metadata(report: ConvergenceReport) -> dict:
    cfg = report.config
    fitted = {}
    for fam in cfg.families:
        fitted[fam] = {
            str(n): {
                "value": report.orders[(fam, n)],
                "gradient": report.gradient_orders[(fam, n)],
            }
            for n in cfg.n_range
        }
    quantiles = {}
    for fam in cfg.families:
        quantiles[fam] = {}
        for n in cfg.n_range:
            c = report.condition_numbers[(fam, n)]
            if c.size:
                quantiles[fam][str(n)] = {
                    "min": float(np.min(c)),
                    "median": float(np.median(c)),
                    "max": float(np.max(c)),
                }
            else:
                quantiles[fam][str(n)] = {"min": None, "median": None, "max": None}
    return {
        "config": cfg.as_dict(),
        "fitted_orders": fitted,
        "condition_number_quantiles": quantiles,
        "matching_failures": report.matching_failures,
        "center_rejections": report.center_rejections,
        "rejection_rule": f"redraw centers with |s(center)| < {_REJECT_TOL}",
    }


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".gpw-tmp-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def metadata_path(path: str) -> str:
    stem, _ = os.path.splitext(path)
    return stem + ".meta.json"


def write_report(report: ConvergenceReport, path: str) -> str:
    """Write the whitespace-separated error table plus a metadata sidecar.

    Columns are ``h`` then one worst-error column per (family, order), named
    errAn<n> for amplitude and errPn<n> for phase.  Writes are atomic
    (temp file + rename); returns the metadata path.
    """
    cfg = report.config
    keys = [("amplitude", n) for n in cfg.n_range if "amplitude" in cfg.families]
    keys += [("phase", n) for n in cfg.n_range if "phase" in cfg.families]
    header = "h " + " ".join(_column_name(fam, n) for fam, n in keys)
    lines = [header]
    hs = cfg.h_values
    for i, h in enumerate(hs):
        row = [_fmt(h)] + [_fmt(float(report.errors[key][i])) for key in keys]
        lines.append(" ".join(row))
    for key in keys:
        err = np.asarray(report.errors[key])
        small = err <= _FIT_WINDOW[1]
        if np.any(small) and np.any(np.diff(err[small]) > 0):
            warnings.warn(
                f"column {_column_name(*key)} is not monotone in h inside the fit window",
                stacklevel=2,
            )
    try:
        _atomic_write(path, "\n".join(lines) + "\n")
        meta = metadata_path(path)
        _atomic_write(meta, json.dumps(_metadata(report), indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise GPWError(f"cannot write report to {path!r}: {exc}") from exc
    return meta
