"""Second-order operators  L = div(A grad) + V . grad + s  as Taylor data.

Coefficients are :class:`CoefficientField` objects: rules that emit the local
Taylor polynomial of a scalar function about any requested center.  The
module applies L itself to a polynomial jet, and also the two conjugated
forms that drive the quasi-Trefftz constructions:

* amplitude conjugation, exp(-d.r) L (Q exp(d.r)) for a constant vector d,
  expanded by the product rule into

      A11 Qxx + (A12+A21) Qxy + A22 Qyy + Vt . grad Q + st Q,

  with
      Vt = (A + A^T) d + V + (dx A11 + dy A21, dx A12 + dy A22)
      st = d^T A d + V . d + s
           + (dx A11 + dy A21) d1 + (dx A12 + dy A22) d2;

* phase conjugation, exp(-P) L exp(P) for a polynomial P vanishing at the
  center:

      div(A grad P) + (grad P)^T A (grad P) + V . grad P + s.

Both expansions are checked in the test suite against the brute-force route
(multiply by an exponential jet, apply L, multiply back).

The Helmholtz sign convention used throughout: an equation written as
-Laplacian(u) - k^2 u = 0 is registered as A = I, V = 0, s = k^2 (same
kernel, opposite overall sign), so a single code path covers the isotropic
and anisotropic cases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import GPWError
from .series import (
    TaylorPoly2,
    UniSeries,
    differentiate,
    tri_index,
    truncated_multiply,
    univariate_to_bivariate,
)

SeriesFactory = Callable[[float, int], UniSeries]


class CoefficientField:
    """Scalar coefficient able to emit local Taylor data at any center."""

    def __init__(self, jet_fn: Callable[[tuple, int], TaylorPoly2], label: str = "field"):
        self._jet_fn = jet_fn
        self.label = label

    def taylor_at(self, center, degree: int) -> TaylorPoly2:
        if degree < 0:
            raise GPWError("degree must be nonnegative")
        out = self._jet_fn((float(center[0]), float(center[1])), degree)
        if out.degree != degree:
            raise GPWError(f"coefficient rule for {self.label!r} returned wrong degree")
        return out

    def value_at(self, center) -> complex:
        return complex(self.taylor_at(center, 0).coeffs[0])

    # -- constructors --------------------------------------------------------

    @classmethod
    def constant(cls, value, label: Optional[str] = None) -> "CoefficientField":
        value = complex(value)

        def jet(center, degree):
            return TaylorPoly2.constant(value, center, degree)

        return cls(jet, label or f"{value.real:g}")

    @classmethod
    def polynomial(cls, terms: dict, label: str = "poly") -> "CoefficientField":
        """Global-coordinate polynomial sum c[i,j] x^i y^j, re-expanded exactly."""
        items = [(int(i), int(j), complex(c)) for (i, j), c in terms.items()]

        def jet(center, degree):
            xc, yc = center
            out = TaylorPoly2.zero(center, degree)
            for i, j, c in items:
                for a in range(min(i, degree) + 1):
                    ca = c * math.comb(i, a) * xc ** (i - a)
                    for b in range(min(j, degree - a) + 1):
                        out.coeffs[tri_index(a, b)] += ca * math.comb(j, b) * yc ** (j - b)
            return out

        return cls(jet, label)

    @classmethod
    def separable(
        cls,
        fx: Optional[SeriesFactory],
        fy: Optional[SeriesFactory],
        label: str = "f(x)g(y)",
    ) -> "CoefficientField":
        """Product f(x) g(y) of univariate factors (None means the constant 1)."""

        def jet(center, degree):
            xc, yc = center
            if fx is None and fy is None:
                return TaylorPoly2.constant(1.0, center, degree)
            if fx is None:
                return univariate_to_bivariate(fy(yc, max(degree, 1)), "y", degree, other=xc)
            if fy is None:
                return univariate_to_bivariate(fx(xc, max(degree, 1)), "x", degree, other=yc)
            px = univariate_to_bivariate(fx(xc, max(degree, 1)), "x", degree, other=yc)
            py = univariate_to_bivariate(fy(yc, max(degree, 1)), "y", degree, other=xc)
            return truncated_multiply(px, py, degree)

        return cls(jet, label)

    # -- algebra -------------------------------------------------------------

    def __add__(self, other) -> "CoefficientField":
        other = _as_field(other)
        return CoefficientField(
            lambda center, degree: self.taylor_at(center, degree) + other.taylor_at(center, degree),
            f"({self.label}+{other.label})",
        )

    __radd__ = __add__

    def __sub__(self, other) -> "CoefficientField":
        return self + (-_as_field(other))

    def __neg__(self) -> "CoefficientField":
        return CoefficientField(
            lambda center, degree: -self.taylor_at(center, degree), f"-{self.label}"
        )

    def __mul__(self, other) -> "CoefficientField":
        if isinstance(other, CoefficientField):
            return CoefficientField(
                lambda center, degree: truncated_multiply(
                    self.taylor_at(center, degree), other.taylor_at(center, degree), degree
                ),
                f"{self.label}*{other.label}",
            )
        scalar = complex(other)
        return CoefficientField(
            lambda center, degree: self.taylor_at(center, degree) * scalar,
            f"{scalar.real:g}*{self.label}",
        )

    __rmul__ = __mul__

    def __repr__(self):
        return f"CoefficientField({self.label})"


def _as_field(value) -> CoefficientField:
    if isinstance(value, CoefficientField):
        return value
    return CoefficientField.constant(value)


ZERO_FIELD = CoefficientField.constant(0.0, "0")
ONE_FIELD = CoefficientField.constant(1.0, "1")


@dataclass(frozen=True)
class OperatorSpec:
    """div(A grad) + V . grad + s with coefficient fields for every entry."""

    a11: CoefficientField
    a12: CoefficientField
    a21: CoefficientField
    a22: CoefficientField
    v1: CoefficientField
    v2: CoefficientField
    s: CoefficientField
    label: str = ""

    @classmethod
    def helmholtz(cls, kappa_sq: CoefficientField, label: str = "") -> "OperatorSpec":
        """Register -Laplacian - k^2 as A = I, V = 0, s = k^2 (same kernel)."""
        return cls(ONE_FIELD, ZERO_FIELD, ZERO_FIELD, ONE_FIELD, ZERO_FIELD, ZERO_FIELD, kappa_sq, label)

    def a_matrix_at(self, center) -> np.ndarray:
        """Pointwise principal part, validated real symmetric."""
        m = np.array(
            [
                [self.a11.value_at(center), self.a12.value_at(center)],
                [self.a21.value_at(center), self.a22.value_at(center)],
            ]
        )
        scale = 1.0 + float(np.max(np.abs(m)))
        if np.max(np.abs(m.imag)) > 1e-10 * scale:
            raise GPWError("principal part is not real at the center")
        if abs(m[0, 1] - m[1, 0]) > 1e-10 * scale:
            raise GPWError("principal part is not symmetric at the center")
        return m.real


class ConjugatedFields(NamedTuple):
    """Taylor data of the amplitude-conjugated operator about one center."""

    a11: TaylorPoly2
    asum: TaylorPoly2  # A12 + A21
    a22: TaylorPoly2
    vt1: TaylorPoly2
    vt2: TaylorPoly2
    st: TaylorPoly2


def _divergence_jets(op: OperatorSpec, center, degree: int):
    """(dx A11 + dy A21, dx A12 + dy A22) as degree-``degree`` jets."""
    a11 = op.a11.taylor_at(center, degree + 1)
    a12 = op.a12.taylor_at(center, degree + 1)
    a21 = op.a21.taylor_at(center, degree + 1)
    a22 = op.a22.taylor_at(center, degree + 1)
    dax = differentiate(a11, "x") + differentiate(a21, "y")
    day = differentiate(a12, "x") + differentiate(a22, "y")
    return a11, a12, a21, a22, dax, day


def apply_operator_taylor(op: OperatorSpec, u: TaylorPoly2, out_degree: int) -> TaylorPoly2:
    """Taylor polynomial of L u about u's center, exact through out_degree."""
    if out_degree < 0:
        raise GPWError("out_degree must be nonnegative")
    if u.degree < out_degree + 2:
        raise GPWError("insufficient jet order")
    c = u.center
    m = out_degree
    a11, a12, a21, a22, dax, day = _divergence_jets(op, c, m)
    v1 = op.v1.taylor_at(c, m)
    v2 = op.v2.taylor_at(c, m)
    s = op.s.taylor_at(c, m)
    ux = differentiate(u, "x")
    uy = differentiate(u, "y")
    uxx = differentiate(ux, "x")
    uxy = differentiate(ux, "y")
    uyy = differentiate(uy, "y")
    out = truncated_multiply(a11, uxx, m)
    out = out + truncated_multiply(a12 + a21, uxy, m)
    out = out + truncated_multiply(a22, uyy, m)
    out = out + truncated_multiply(dax, ux, m)
    out = out + truncated_multiply(day, uy, m)
    out = out + truncated_multiply(v1, ux, m)
    out = out + truncated_multiply(v2, uy, m)
    out = out + truncated_multiply(s, u, m)
    return out


def conjugated_fields(op: OperatorSpec, center, d, degree: int) -> ConjugatedFields:
    """Assemble the amplitude-conjugation fields Vt and st through ``degree``.

    ``d`` is the direction pair (lambda10, lambda01).  The A-jets are carried
    one degree higher than requested so their derivatives are exact through
    ``degree``.
    """
    l10, l01 = complex(d[0]), complex(d[1])
    a11, a12, a21, a22, dax, day = _divergence_jets(op, center, degree)
    asum = a12 + a21
    v1 = op.v1.taylor_at(center, degree)
    v2 = op.v2.taylor_at(center, degree)
    s = op.s.taylor_at(center, degree)
    vt1 = a11 * (2.0 * l10) + asum * l01 + v1 + dax
    vt2 = a22 * (2.0 * l01) + asum * l10 + v2 + day
    st = (
        a11 * (l10 * l10)
        + asum * (l10 * l01)
        + a22 * (l01 * l01)
        + v1 * l10
        + v2 * l01
        + s
        + dax * l10
        + day * l01
    )
    return ConjugatedFields(a11, asum, a22, vt1, vt2, st)


def conjugated_amplitude_operator(
    op: OperatorSpec, Q: TaylorPoly2, d, out_degree: int
) -> TaylorPoly2:
    """Taylor polynomial of exp(-d.r) L (Q exp(d.r)) through out_degree."""
    if out_degree < 0:
        raise GPWError("out_degree must be nonnegative")
    if Q.degree < out_degree + 2:
        raise GPWError("insufficient jet order")
    m = out_degree
    f = conjugated_fields(op, Q.center, d, m)
    qx = differentiate(Q, "x")
    qy = differentiate(Q, "y")
    qxx = differentiate(qx, "x")
    qxy = differentiate(qx, "y")
    qyy = differentiate(qy, "y")
    out = truncated_multiply(f.a11, qxx, m)
    out = out + truncated_multiply(f.asum, qxy, m)
    out = out + truncated_multiply(f.a22, qyy, m)
    out = out + truncated_multiply(f.vt1, qx, m)
    out = out + truncated_multiply(f.vt2, qy, m)
    out = out + truncated_multiply(f.st, Q, m)
    return out


def conjugated_phase_operator(op: OperatorSpec, P: TaylorPoly2, out_degree: int) -> TaylorPoly2:
    """Taylor polynomial of exp(-P) L exp(P) through out_degree (P(center) = 0)."""
    if out_degree < 0:
        raise GPWError("out_degree must be nonnegative")
    if P.degree < out_degree + 2:
        raise GPWError("insufficient jet order")
    if abs(P.coeffs[0]) > 1e-13 * (1.0 + P.max_abs()):
        raise GPWError("phase polynomial must vanish at the center")
    c = P.center
    m = out_degree
    a11, a12, a21, a22, dax, day = _divergence_jets(op, c, m)
    v1 = op.v1.taylor_at(c, m)
    v2 = op.v2.taylor_at(c, m)
    s = op.s.taylor_at(c, m)
    px = differentiate(P, "x")
    py = differentiate(P, "y")
    pxx = differentiate(px, "x")
    pxy = differentiate(px, "y")
    pyy = differentiate(py, "y")
    out = truncated_multiply(a11, pxx, m)
    out = out + truncated_multiply(a12 + a21, pxy, m)
    out = out + truncated_multiply(a22, pyy, m)
    out = out + truncated_multiply(dax, px, m)
    out = out + truncated_multiply(day, py, m)
    # (grad P)^T A (grad P): w = A grad P, then w . grad P
    w1 = truncated_multiply(a11, px, m) + truncated_multiply(a12, py, m)
    w2 = truncated_multiply(a21, px, m) + truncated_multiply(a22, py, m)
    out = out + truncated_multiply(w1, px, m)
    out = out + truncated_multiply(w2, py, m)
    out = out + truncated_multiply(v1, px, m)
    out = out + truncated_multiply(v2, py, m)
    out = out + s
    return out
