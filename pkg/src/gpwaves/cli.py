"""Command-line frontend: construction, certification, rank diagnostics and
convergence sweeps over the built-in test cases.

Every command echoes its resolved configuration (defaults included) before
computing, prints numbers with 17 significant digits, and exits with status 2
on any anticipated library error.
"""

from __future__ import annotations

import math
import sys

import click
import numpy as np

from .cases import builtin_test_cases, case_labels, get_case
from .construct import (
    construct_amplitude_gpw,
    construct_phase_gpw,
    gpw_family,
    normalize_direction,
    residual_certificate,
)
from .errors import GPWError
from .experiments import SweepConfig, comparison_h_grid, run_convergence, write_report
from .interpolation import (
    build_matrix,
    classical_pw_column,
    condition_number,
    gpw_taylor_column,
    numerical_rank,
)


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _fmt_c(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}i"


def _parse_point(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise GPWError(f"expected a point as X,Y, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise GPWError(f"expected a point as X,Y, got {text!r}") from None


def _resolve_case(label: str, center=None):
    case = get_case(label)
    if center is not None and not case.contains(center):
        x0, x1, y0, y1 = case.domain
        raise GPWError(
            f"center {center} outside the {label} domain [{x0},{x1}]x[{y0},{y1}]"
        )
    return case


def _norm_mode(flag: str) -> str:
    return {"general": "general", "classical-pw": "classical_pw"}[flag]


def _echo_config(**kv):
    click.echo("config: " + " ".join(f"{k}={v}" for k, v in kv.items()))


class _Cli(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except GPWError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)


@click.group(cls=_Cli)
def main():
    """Quasi-Trefftz generalized plane waves: build, certify, diagnose, sweep."""


@main.command("list-cases")
def list_cases():
    """List the built-in test cases."""
    for case in builtin_test_cases():
        x0, x1, y0, y1 = case.domain
        click.echo(
            f"{case.label:3s} | {case.description} | "
            f"[{x0:g},{x1:g}]x[{y0:g},{y1:g}] | u = {case.solution}"
        )


@main.command()
@click.option("--case", "label", required=True, help="Test-case label (see list-cases).")
@click.option("--center", required=True, help="Expansion center as X,Y.")
@click.option("--theta", type=float, required=True, help="Direction angle in radians.")
@click.option("--q", type=int, required=True, help="Quasi-Trefftz order (>= 1).")
@click.option(
    "--family",
    type=click.Choice(["amplitude", "phase"]),
    default="amplitude",
    show_default=True,
)
@click.option(
    "--normalization",
    type=click.Choice(["general", "classical-pw"]),
    default="general",
    show_default=True,
)
def construct(label, center, theta, q, family, normalization):
    """Construct one wave and print its direction, coefficients and residual."""
    pt = _parse_point(center)
    case = _resolve_case(label, pt)
    _echo_config(
        case=label, center=center, theta=theta, q=q, family=family, normalization=normalization
    )
    d = normalize_direction(case.operator, pt, theta, mode=_norm_mode(normalization))
    click.echo(f"direction: lambda10 = {_fmt_c(d.lambda10)}  lambda01 = {_fmt_c(d.lambda01)}")
    if family == "amplitude":
        g = construct_amplitude_gpw(case.operator, pt, d, q)
        poly = g.Q
    else:
        g = construct_phase_gpw(case.operator, pt, d, q)
        poly = g.P
    cutoff = 1e-13 * (1.0 + poly.max_abs())
    click.echo("coefficients (ix iy re im):")
    for deg in range(poly.degree + 1):
        for iy in range(deg + 1):
            ix = deg - iy
            c = poly[ix, iy]
            if abs(c) > cutoff:
                click.echo(f"{ix} {iy} {_fmt(c.real)} {_fmt(c.imag)}")
    cert = residual_certificate(case.operator, g)
    click.echo(f"residual max coefficient: {_fmt(cert.max_residual)}")
    click.echo(f"residual relative: {_fmt(cert.relative)}")


@main.command()
@click.option("--case", "label", required=True)
@click.option("--center", required=True, help="Expansion center as X,Y.")
@click.option("--q", type=int, required=True)
@click.option("--p", type=int, default=8, show_default=True, help="Family size.")
@click.option(
    "--family",
    type=click.Choice(["amplitude", "phase"]),
    default="amplitude",
    show_default=True,
)
@click.option(
    "--normalization",
    type=click.Choice(["general", "classical-pw"]),
    default="general",
    show_default=True,
)
@click.option("--angle-offset", type=float, default=math.pi / 6.0, show_default=True)
def certify(label, center, q, p, family, normalization, angle_offset):
    """Build a family and print the worst quasi-Trefftz residual over members."""
    pt = _parse_point(center)
    case = _resolve_case(label, pt)
    _echo_config(
        case=label,
        center=center,
        q=q,
        p=p,
        family=family,
        normalization=normalization,
        angle_offset=angle_offset,
    )
    gpws = gpw_family(
        case.operator,
        pt,
        p,
        q,
        angle_offset=angle_offset,
        mode=_norm_mode(normalization),
        family=family,
    )
    certs = [residual_certificate(case.operator, g) for g in gpws]
    max_abs = max(c.max_residual for c in certs)
    max_rel = max(c.relative for c in certs)
    click.echo(f"max residual coefficient: {_fmt(max_abs)}")
    click.echo(f"max relative residual: {_fmt(max_rel)}")


@main.command()
@click.option("--case", "label", required=True)
@click.option("--center", required=True, help="Expansion center as X,Y.")
@click.option("--n", type=int, required=True, help="Taylor order of the matrices.")
@click.option(
    "--normalization",
    type=click.Choice(["general", "classical-pw"]),
    default="general",
    show_default=True,
)
@click.option("--angle-offset", type=float, default=math.pi / 6.0, show_default=True)
def rank(label, center, n, normalization, angle_offset):
    """Numerical rank and conditioning of the wave and plane-wave matrices."""
    pt = _parse_point(center)
    case = _resolve_case(label, pt)
    _echo_config(
        case=label, center=center, n=n, normalization=normalization, angle_offset=angle_offset
    )
    p = 2 * n + 1
    q = max(n - 1, 1)
    gpws = gpw_family(
        case.operator, pt, p, q, angle_offset=angle_offset, mode=_norm_mode(normalization)
    )
    mg = build_matrix([gpw_taylor_column(g, n) for g in gpws], n)
    dirs = [
        normalize_direction(
            case.operator, pt, 2.0 * k * math.pi / p + angle_offset, mode="classical_pw"
        )
        for k in range(p)
    ]
    mc = build_matrix([classical_pw_column(d, pt, n) for d in dirs], n)
    click.echo(f"p = {p}, q = {q}, expected rank 2n+1 = {2 * n + 1}")
    click.echo(f"wave matrix: rank {numerical_rank(mg)}, condition {_fmt(condition_number(mg))}")
    click.echo(
        f"plane-wave matrix: rank {numerical_rank(mc)}, condition {_fmt(condition_number(mc))}"
    )


def _parse_families(text: str) -> tuple[str, ...]:
    fams = tuple(f.strip() for f in text.split(",") if f.strip())
    if not fams:
        raise GPWError("at least one family is required")
    return fams


def _print_orders(report):
    for fam in report.config.families:
        for n in report.config.n_range:
            v = report.orders[(fam, n)]
            g = report.gradient_orders[(fam, n)]
            vtxt = "saturated" if v is None else f"{v:.3f}"
            gtxt = "saturated" if g is None else f"{g:.3f}"
            click.echo(f"{fam} n={n}: value order {vtxt} (expected {n + 1}), "
                       f"gradient order {gtxt} (expected {n})")


@main.command()
@click.option("--case", "label", required=True)
@click.option("--nmax", type=int, required=True, help="Run orders n = 1..nmax.")
@click.option("--centers", type=int, default=50, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Data file path.")
@click.option("--families", default="amplitude", show_default=True, help="Comma-separated.")
@click.option(
    "--normalization",
    type=click.Choice(["general", "classical-pw"]),
    default="general",
    show_default=True,
)
def convergence(label, nmax, centers, seed, out, families, normalization):
    """Convergence sweep: worst circle errors over seeded random centers."""
    get_case(label)
    if nmax < 1:
        raise GPWError("nmax must be at least 1")
    fams = _parse_families(families)
    config = SweepConfig(
        case=label,
        n_range=tuple(range(1, nmax + 1)),
        num_centers=centers,
        seed=seed,
        families=fams,
        normalization=_norm_mode(normalization),
    )
    path = out or f"convergence_{label}.dat"
    _echo_config(
        case=label,
        nmax=nmax,
        centers=centers,
        seed=seed,
        out=path,
        families=",".join(fams),
        normalization=normalization,
    )
    report = run_convergence(config)
    meta = write_report(report, path)
    click.echo(f"wrote {path} and {meta}")
    if report.matching_failures:
        click.echo(f"warning: {report.matching_failures} matching failures excluded")
    _print_orders(report)


@main.command()
@click.option("--case", "label", required=True)
@click.option("--nmax", type=int, default=5, show_default=True)
@click.option("--centers", type=int, default=50, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def compare(label, nmax, centers, seed, out):
    """Amplitude vs phase on a grid extending into the pre-asymptotic range."""
    get_case(label)
    if nmax < 1:
        raise GPWError("nmax must be at least 1")
    config = SweepConfig(
        case=label,
        n_range=tuple(range(1, nmax + 1)),
        num_centers=centers,
        seed=seed,
        h_values=comparison_h_grid(),
        families=("amplitude", "phase"),
    )
    path = out or f"compare_{label}.dat"
    _echo_config(case=label, nmax=nmax, centers=centers, seed=seed, out=path)
    report = run_convergence(config)
    meta = write_report(report, path)
    click.echo(f"wrote {path} and {meta}")
    hs = np.asarray(config.h_values)
    pre = hs >= 1.0
    for n in config.n_range:
        amp = np.max(report.errors[("amplitude", n)][pre])
        pha = np.max(report.errors[("phase", n)][pre])
        click.echo(
            f"n={n}: worst error at h>=1, amplitude {_fmt(float(amp))} vs phase {_fmt(float(pha))}"
        )
    _print_orders(report)


if __name__ == "__main__":
    main()
