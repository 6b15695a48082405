"""Construction of amplitude- and phase-based generalized plane waves.

An amplitude-based wave about a center is  G = Q(x,y) exp(d . r)  with a
polynomial amplitude Q of degree q+1 and a constant direction pair
d = (lambda10, lambda01); a phase-based wave is  G = exp(P(x,y))  with a
polynomial phase P of degree q+1 vanishing at the center.  Both are built so
that the conjugated operator applied to the polynomial has a vanishing Taylor
expansion through total degree q-1 (the quasi-Trefftz property, certified
numerically by :func:`residual_certificate`).

The defining equations grade by total degree.  Grouping the Taylor
coefficients of the conjugated residual by degree ``ell`` yields, layer by
layer, a small triangular system for the degree-(ell+2) polynomial
coefficients: the only coupling to the newest layer runs through the
principal part frozen at the center,

    (jx+2)(jx+1) A11c u[jx+2, jy]
        + (jx+1)(jy+1) (A12c+A21c) u[jx+1, jy+1]
        + (jy+2)(jy+1) A22c u[jx, jy+2]  =  -(known terms),

solved by substitution for jx = 0..ell after fixing u[0, ell+2] and
u[1, ell+1] to zero.  Solvability needs A11c != 0 (the sweep's pivot);
the homogeneous principal map has a two-dimensional kernel on every layer,
which is exactly the freedom removed by the two fixed entries.

Directions are normalized so the layer-0 equation closes: with the
orthogonal eigendecomposition A(center) = U diag(g1, g2) U^T the choice

    d = sqrt(-s(center)) * U diag(1/sqrt(g1), 1/sqrt(g2)) (cos t, sin t)

gives d^T A(center) d + s(center) = 0 for every angle t.  For A = I this is
the familiar plane-wave rule d = sqrt(-k^2(center)) (cos t, sin t), and the
alternative "classical_pw" mode applies that rule regardless of A.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import GPWError
from .operators import (
    OperatorSpec,
    conjugated_amplitude_operator,
    conjugated_fields,
    conjugated_phase_operator,
)
from .series import (
    TaylorPoly2,
    differentiate,
    homogeneous_product_part,
    truncated_multiply,
)

_PIVOT_TOL = 1e-12
_EIG_TOL = 1e-12
_SCALE_TOL = 1e-10


def _principal_sqrt(z: complex) -> complex:
    """Principal square root; strips signed zeros so sqrt(-k^2) = +i|k|."""
    z = complex(z)
    if z.imag == 0.0:
        z = complex(z.real, 0.0)
    return cmath.sqrt(z)


@dataclass(frozen=True)
class Direction:
    """Constant direction pair (lambda10, lambda01) of the plane-wave phase."""

    lambda10: complex
    lambda01: complex

    def as_pair(self) -> tuple[complex, complex]:
        return (self.lambda10, self.lambda01)

    def __getitem__(self, i: int) -> complex:
        return (self.lambda10, self.lambda01)[i]


@dataclass(frozen=True)
class AmplitudeGPW:
    """Q(x,y) exp(d . r) about ``center``; Q has degree q+1, Q(center) = 1."""

    center: tuple[float, float]
    direction: Direction
    q: int
    Q: TaylorPoly2


@dataclass(frozen=True)
class PhaseGPW:
    """exp(P(x,y)) about ``center``; P has degree q+1 and P(center) = 0."""

    center: tuple[float, float]
    q: int
    P: TaylorPoly2

    @property
    def direction(self) -> Direction:
        return Direction(self.P[1, 0], self.P[0, 1])


@dataclass
class CostCounter:
    """Tallies layer-sweep work: one charge per coefficient fixed or solved."""

    fixed: int = 0
    solved: int = 0
    coupling_terms: int = 0

    def total(self) -> int:
        return self.fixed + self.solved + self.coupling_terms


def normalize_direction(
    op: OperatorSpec, center, theta: float, mode: str = "general", scale: complex | None = None
) -> Direction:
    """Direction for angle ``theta`` satisfying d^T A(center) d + s(center) = 0.

    ``mode="general"`` uses the eigendecomposition rule above;
    ``mode="classical_pw"`` returns sqrt(-s(center)) (cos t, sin t) (which
    only closes the layer-0 equation when A(center) = I, but is useful as a
    conditioning alternative).  Pass ``scale`` to override sqrt(-s(center)),
    e.g. near a zero of s.
    """
    if mode not in ("general", "classical_pw"):
        raise GPWError(f"unknown normalization mode {mode!r}")
    if scale is None:
        sc = op.s.value_at(center)
        if abs(sc) < _SCALE_TOL:
            raise GPWError("vanishing zeroth-order coefficient: supply explicit scale")
        scale = _principal_sqrt(-sc)
    else:
        scale = complex(scale)
    ct, st = math.cos(theta), math.sin(theta)
    if mode == "classical_pw":
        return Direction(scale * ct, scale * st)
    a = op.a_matrix_at(center)
    w, vec = np.linalg.eigh(a)
    # descending eigenvalue order (stable, so A = I keeps the identity frame
    # and the general rule coincides with the plane-wave one); canonical signs
    order = np.argsort(-w, kind="stable")
    w = w[order]
    vec = vec[:, order]
    for j in range(2):
        k = int(np.argmax(np.abs(vec[:, j])))
        if vec[k, j] < 0:
            vec[:, j] = -vec[:, j]
    if np.min(np.abs(w)) < _EIG_TOL:
        raise GPWError("degenerate principal part")
    inv_sqrt = np.array([1.0 / _principal_sqrt(wi) for wi in w])
    d = scale * (vec @ (inv_sqrt * np.array([ct, st])))
    return Direction(complex(d[0]), complex(d[1]))


def principal_homogeneous_map(
    a11c: complex, asumc: complex, a22c: complex, layer_coeffs: np.ndarray
) -> np.ndarray:
    """Apply div(Ac grad) to one homogeneous layer.

    ``layer_coeffs`` holds the degree-(ell+2) coefficients by increasing
    x-exponent; the result is the degree-ell layer of the image.
    """
    p = np.asarray(layer_coeffs, dtype=np.complex128)
    ell = p.size - 3
    if ell < 0:
        raise GPWError("layer must have degree at least 2")
    out = np.zeros(ell + 1, dtype=np.complex128)
    for i in range(ell + 1):
        out[i] = (
            (i + 2) * (i + 1) * a11c * p[i + 2]
            + (i + 1) * (ell + 1 - i) * asumc * p[i + 1]
            + (ell + 2 - i) * (ell + 1 - i) * a22c * p[i]
        )
    return out


def harmonic_layer_basis(ell: int) -> tuple[np.ndarray, np.ndarray]:
    """Real and imaginary parts of (X + iY)^(ell+2): a kernel basis of the
    homogeneous Laplacian on the degree-(ell+2) layer (increasing x-exponent).
    """
    m = ell + 2
    z = np.array([math.comb(m, i) * (1j) ** (m - i) for i in range(m + 1)])
    return z.real.copy(), z.imag.copy()


def _layer_sweep(coeffs_poly, fields_known, ell, a11c, asumc, a22c, counter):
    """Solve one layer of the graded system in place.

    ``fields_known`` is the degree-ell homogeneous slice of the residual
    evaluated with the degree-(ell+2) layer still zero; the in-layer
    couplings through the frozen principal part are added during the sweep.
    """
    for jx in range(ell + 1):
        jy = ell - jx
        val = (
            fields_known[jx]
            + (jx + 1) * (jy + 1) * asumc * coeffs_poly[jx + 1, jy + 1]
            + (jy + 2) * (jy + 1) * a22c * coeffs_poly[jx, jy + 2]
        )
        coeffs_poly[jx + 2, jy] = -val / ((jx + 2) * (jx + 1) * a11c)
        if counter is not None:
            counter.solved += 1
            counter.coupling_terms += 2


def construct_amplitude_gpw(
    op: OperatorSpec, center, d: Direction, q: int, counter: CostCounter | None = None
) -> AmplitudeGPW:
    """Build the amplitude polynomial Q of degree q+1 layer by layer.

    Fixed values: Q(center) = 1, both first-order coefficients zero, and on
    each layer the two entries u[0, ell+2] and u[1, ell+1] zero.  The
    remaining coefficients are the unique solution of the graded system.
    """
    if q < 1:
        raise GPWError("q must be a positive integer")
    center = (float(center[0]), float(center[1]))
    f = conjugated_fields(op, center, d.as_pair(), q - 1)
    a11c = complex(f.a11.coeffs[0])
    asumc = complex(f.asum.coeffs[0])
    a22c = complex(f.a22.coeffs[0])
    if abs(a11c) < _PIVOT_TOL:
        raise GPWError("pivot failure: rotate coordinates")
    Q = TaylorPoly2.zero(center, q + 1)
    Q[0, 0] = 1.0
    if counter is not None:
        counter.fixed += 3  # constant and both first-order coefficients
    for ell in range(q):
        if counter is not None:
            counter.fixed += 2  # u[0, ell+2] and u[1, ell+1]
        qx = differentiate(Q, "x")
        qy = differentiate(Q, "y")
        qxx = differentiate(qx, "x")
        qxy = differentiate(qx, "y")
        qyy = differentiate(qy, "y")
        known = (
            homogeneous_product_part(f.a11, qxx, ell)
            + homogeneous_product_part(f.asum, qxy, ell)
            + homogeneous_product_part(f.a22, qyy, ell)
            + homogeneous_product_part(f.vt1, qx, ell)
            + homogeneous_product_part(f.vt2, qy, ell)
            + homogeneous_product_part(f.st, Q, ell)
        )
        _layer_sweep(Q, known, ell, a11c, asumc, a22c, counter)
    return AmplitudeGPW(center, d, q, Q)


def construct_phase_gpw(
    op: OperatorSpec, center, d: Direction, q: int, counter: CostCounter | None = None
) -> PhaseGPW:
    """Build the phase polynomial P of degree q+1 layer by layer.

    P(center) = 0 and the degree-1 part equals the direction; on each layer
    the entries u[0, ell+2] and u[1, ell+1] are fixed to zero.  The quadratic
    gradient term never touches the newest layer, so the sweep is the same
    triangular substitution as in the amplitude case.
    """
    if q < 1:
        raise GPWError("q must be a positive integer")
    center = (float(center[0]), float(center[1]))
    m = q - 1
    a11 = op.a11.taylor_at(center, m + 1)
    a12 = op.a12.taylor_at(center, m + 1)
    a21 = op.a21.taylor_at(center, m + 1)
    a22 = op.a22.taylor_at(center, m + 1)
    dax = differentiate(a11, "x") + differentiate(a21, "y")
    day = differentiate(a12, "x") + differentiate(a22, "y")
    v1 = op.v1.taylor_at(center, m)
    v2 = op.v2.taylor_at(center, m)
    s = op.s.taylor_at(center, m)
    a11c = complex(a11.coeffs[0])
    asumc = complex(a12.coeffs[0] + a21.coeffs[0])
    a22c = complex(a22.coeffs[0])
    if abs(a11c) < _PIVOT_TOL:
        raise GPWError("pivot failure: rotate coordinates")
    P = TaylorPoly2.zero(center, q + 1)
    P[1, 0] = d.lambda10
    P[0, 1] = d.lambda01
    if counter is not None:
        counter.fixed += 3
    for ell in range(q):
        if counter is not None:
            counter.fixed += 2
        px = differentiate(P, "x")
        py = differentiate(P, "y")
        pxx = differentiate(px, "x")
        pxy = differentiate(px, "y")
        pyy = differentiate(py, "y")
        known = (
            homogeneous_product_part(a11, pxx, ell)
            + homogeneous_product_part(a12 + a21, pxy, ell)
            + homogeneous_product_part(a22, pyy, ell)
            + homogeneous_product_part(dax, px, ell)
            + homogeneous_product_part(day, py, ell)
            + homogeneous_product_part(v1, px, ell)
            + homogeneous_product_part(v2, py, ell)
            + s.homogeneous(ell)
        )
        # (grad P)^T A (grad P), degree-ell slice; w = A grad P
        w1 = truncated_multiply(a11, px, ell) + truncated_multiply(a12, py, ell)
        w2 = truncated_multiply(a21, px, ell) + truncated_multiply(a22, py, ell)
        known = known + homogeneous_product_part(w1, px, ell)
        known = known + homogeneous_product_part(w2, py, ell)
        _layer_sweep(P, known, ell, a11c, asumc, a22c, counter)
    return PhaseGPW(center, q, P)


def gpw_family(
    op: OperatorSpec,
    center,
    p: int,
    q: int,
    angle_offset: float = math.pi / 6.0,
    mode: str = "general",
    family: str = "amplitude",
    counter: CostCounter | None = None,
) -> list:
    """p waves at angles 2(k-1)pi/p + angle_offset, k = 1..p.

    The default offset avoids aligning any member with the coordinate axes.
    """
    if p < 1:
        raise GPWError("p must be a positive integer")
    if family not in ("amplitude", "phase"):
        raise GPWError(f"unknown family {family!r}")
    out = []
    for k in range(p):
        theta = 2.0 * k * math.pi / p + angle_offset
        d = normalize_direction(op, center, theta, mode=mode)
        if family == "amplitude":
            out.append(construct_amplitude_gpw(op, center, d, q, counter=counter))
        else:
            out.append(construct_phase_gpw(op, center, d, q, counter=counter))
    return out


def evaluate(g, x, y):
    """Pointwise value of a constructed wave (scalars or arrays)."""
    if isinstance(g, AmplitudeGPW):
        dx = np.asarray(x, dtype=float) - g.center[0]
        dy = np.asarray(y, dtype=float) - g.center[1]
        with np.errstate(over="ignore", invalid="ignore"):
            e = np.exp(g.direction.lambda10 * dx + g.direction.lambda01 * dy)
            out = g.Q.evaluate(x, y) * e
        return complex(out) if np.asarray(out).shape == () else out
    if isinstance(g, PhaseGPW):
        with np.errstate(over="ignore", invalid="ignore"):
            out = np.exp(g.P.evaluate(x, y))
        return complex(out) if np.asarray(out).shape == () else out
    raise GPWError("expected an AmplitudeGPW or PhaseGPW")


def evaluate_gradient(g, x, y):
    """Gradient pair of a constructed wave (scalars or arrays)."""
    if isinstance(g, AmplitudeGPW):
        dx = np.asarray(x, dtype=float) - g.center[0]
        dy = np.asarray(y, dtype=float) - g.center[1]
        l10, l01 = g.direction.lambda10, g.direction.lambda01
        qv = g.Q.evaluate(x, y)
        qx = differentiate(g.Q, "x").evaluate(x, y)
        qy = differentiate(g.Q, "y").evaluate(x, y)
        with np.errstate(over="ignore", invalid="ignore"):
            e = np.exp(l10 * dx + l01 * dy)
            gx = (qx + l10 * qv) * e
            gy = (qy + l01 * qv) * e
    elif isinstance(g, PhaseGPW):
        pxv = differentiate(g.P, "x").evaluate(x, y)
        pyv = differentiate(g.P, "y").evaluate(x, y)
        with np.errstate(over="ignore", invalid="ignore"):
            e = np.exp(g.P.evaluate(x, y))
            gx = pxv * e
            gy = pyv * e
    else:
        raise GPWError("expected an AmplitudeGPW or PhaseGPW")
    if np.asarray(gx).shape == ():
        return complex(gx), complex(gy)
    return gx, gy


def residual_polynomial(op: OperatorSpec, g) -> TaylorPoly2:
    """Conjugated-operator residual through degree q-1 (zero for a perfect build)."""
    if isinstance(g, AmplitudeGPW):
        return conjugated_amplitude_operator(op, g.Q, g.direction.as_pair(), g.q - 1)
    if isinstance(g, PhaseGPW):
        return conjugated_phase_operator(op, g.P, g.q - 1)
    raise GPWError("expected an AmplitudeGPW or PhaseGPW")


@dataclass(frozen=True)
class Certificate:
    """Quasi-Trefftz certificate: residual sizes of one constructed wave."""

    max_residual: float
    max_coeff: float

    @property
    def relative(self) -> float:
        return self.max_residual / (1.0 + self.max_coeff)

    def passes(self, tol: float = 1e-9) -> bool:
        return self.relative <= tol


def residual_certificate(op: OperatorSpec, g) -> Certificate:
    """Certify that the conjugated residual vanishes through degree q-1.

    The residual is measured relative to 1 + max|polynomial coefficient| so
    large-degree constructions are not penalized for their own scale.
    """
    res = residual_polynomial(op, g)
    poly = g.Q if isinstance(g, AmplitudeGPW) else g.P
    return Certificate(res.max_abs(), poly.max_abs())
