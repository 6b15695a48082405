"""Truncated bivariate Taylor polynomials and univariate Taylor series.

A bivariate polynomial about a center ``(xc, yc)``,

    p(x, y) = sum over ix+iy <= D of c[ix, iy] * (x-xc)^ix * (y-yc)^iy,

is stored as a dense triangular array in graded order: the coefficient
``c[ix, iy]`` lives at position ``(ix+iy)(ix+iy+1)/2 + iy``.  A polynomial of
total degree D therefore has exactly ``(D+1)(D+2)/2`` stored coefficients.
The same linear order indexes the rows of the Taylor-coefficient matrices
assembled in :mod:`gpwaves.interpolation`.

Truncation bounds are explicit at every call site.  No operation silently
promotes the degree of its result; this keeps the order-of-accuracy
bookkeeping of the wave construction auditable.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import GPWError


def tri_len(degree: int) -> int:
    """Number of coefficients of a bivariate polynomial of total degree <= degree."""
    return (degree + 1) * (degree + 2) // 2


def tri_index(ix: int, iy: int) -> int:
    """Storage position of the coefficient multiplying (x-xc)^ix (y-yc)^iy."""
    d = ix + iy
    return d * (d + 1) // 2 + iy


class MultiIndex2(NamedTuple):
    """Exponent pair of a bivariate monomial."""

    ix: int
    iy: int

    @property
    def degree(self) -> int:
        return self.ix + self.iy

    @property
    def position(self) -> int:
        return tri_index(self.ix, self.iy)


@dataclass
class TaylorPoly2:
    """Dense triangular bivariate Taylor polynomial about a fixed center."""

    center: tuple[float, float]
    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        self.center = (float(self.center[0]), float(self.center[1]))
        if self.degree < 0:
            raise GPWError("degree must be nonnegative")
        self.coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if self.coeffs.shape != (tri_len(self.degree),):
            raise GPWError(
                f"coefficient array must have length {tri_len(self.degree)} "
                f"for degree {self.degree}, got shape {self.coeffs.shape}"
            )

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, center, degree: int) -> "TaylorPoly2":
        return cls(tuple(center), degree, np.zeros(tri_len(degree), dtype=np.complex128))

    @classmethod
    def constant(cls, value, center, degree: int = 0) -> "TaylorPoly2":
        out = cls.zero(center, degree)
        out.coeffs[0] = value
        return out

    @classmethod
    def from_terms(cls, center, degree: int, terms: dict) -> "TaylorPoly2":
        """Build from a ``{(ix, iy): coefficient}`` mapping (local coordinates)."""
        out = cls.zero(center, degree)
        for (ix, iy), c in terms.items():
            out[ix, iy] = c
        return out

    # -- element access ------------------------------------------------------

    def __getitem__(self, key) -> complex:
        ix, iy = key
        if ix < 0 or iy < 0:
            raise GPWError("negative exponent")
        if ix + iy > self.degree:
            return 0j
        return complex(self.coeffs[tri_index(ix, iy)])

    def __setitem__(self, key, value):
        ix, iy = key
        if ix < 0 or iy < 0 or ix + iy > self.degree:
            raise GPWError(f"index ({ix},{iy}) outside stored degree {self.degree}")
        self.coeffs[tri_index(ix, iy)] = value

    def homogeneous(self, ell: int) -> np.ndarray:
        """Degree-ell coefficients ordered by increasing x-exponent."""
        return homogeneous_part(self, ell)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def copy(self) -> "TaylorPoly2":
        return TaylorPoly2(self.center, self.degree, self.coeffs.copy())

    # -- arithmetic ----------------------------------------------------------

    def _check_center(self, other: "TaylorPoly2"):
        if self.center != other.center:
            raise GPWError("center mismatch")

    def __add__(self, other: "TaylorPoly2") -> "TaylorPoly2":
        self._check_center(other)
        d = min(self.degree, other.degree)
        n = tri_len(d)
        return TaylorPoly2(self.center, d, self.coeffs[:n] + other.coeffs[:n])

    def __sub__(self, other: "TaylorPoly2") -> "TaylorPoly2":
        self._check_center(other)
        d = min(self.degree, other.degree)
        n = tri_len(d)
        return TaylorPoly2(self.center, d, self.coeffs[:n] - other.coeffs[:n])

    def __neg__(self) -> "TaylorPoly2":
        return TaylorPoly2(self.center, self.degree, -self.coeffs)

    def __mul__(self, scalar) -> "TaylorPoly2":
        # Scalar scaling only; polynomial products go through truncated_multiply
        # so the truncation bound is always spelled out.
        return TaylorPoly2(self.center, self.degree, self.coeffs * complex(scalar))

    __rmul__ = __mul__

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, x, y):
        """Value at (x, y); accepts scalars or broadcastable arrays."""
        dx = np.asarray(x, dtype=float) - self.center[0]
        dy = np.asarray(y, dtype=float) - self.center[1]
        dx, dy = np.broadcast_arrays(dx, dy)
        px = [np.ones_like(dx)]
        py = [np.ones_like(dy)]
        for _ in range(self.degree):
            px.append(px[-1] * dx)
            py.append(py[-1] * dy)
        total = np.zeros(dx.shape, dtype=np.complex128)
        k = 0
        for d in range(self.degree + 1):
            for iy in range(d + 1):
                c = self.coeffs[k]
                k += 1
                if c != 0:
                    total = total + c * px[d - iy] * py[iy]
        if total.shape == ():
            return complex(total)
        return total

    def __repr__(self):
        return (
            f"TaylorPoly2(center={self.center}, degree={self.degree}, "
            f"max|c|={self.max_abs():.3g})"
        )


@dataclass
class UniSeries:
    """Univariate Taylor series a_0 + a_1 t + ... about ``center`` (t = x - center)."""

    center: float
    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        self.center = float(self.center)
        if self.degree < 0:
            raise GPWError("degree must be nonnegative")
        self.coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if self.coeffs.shape != (self.degree + 1,):
            raise GPWError("univariate coefficient array must have length degree+1")

    @classmethod
    def zero(cls, center: float, degree: int) -> "UniSeries":
        return cls(center, degree, np.zeros(degree + 1, dtype=np.complex128))

    def derivative(self) -> "UniSeries":
        if self.degree == 0:
            return UniSeries.zero(self.center, 0)
        k = np.arange(1, self.degree + 1)
        return UniSeries(self.center, self.degree - 1, self.coeffs[1:] * k)

    def evaluate(self, x):
        """Horner evaluation at x (scalar or array)."""
        t = np.asarray(x, dtype=float) - self.center
        total = np.full(t.shape, self.coeffs[-1], dtype=np.complex128)
        for c in self.coeffs[-2::-1]:
            total = total * t + c
        if total.shape == ():
            return complex(total)
        return total


# ---------------------------------------------------------------------------
# core operations
# ---------------------------------------------------------------------------


def truncated_multiply(a: TaylorPoly2, b: TaylorPoly2, bound: int) -> TaylorPoly2:
    """Product of a and b with every coefficient of total degree <= bound exact.

    The factors must share a center.  The result always has degree ``bound``;
    requesting a bound above a.degree + b.degree simply pads exact zeros.
    """
    if a.center != b.center:
        raise GPWError("center mismatch")
    if bound < 0:
        raise GPWError("bound must be nonnegative")
    out = TaylorPoly2.zero(a.center, bound)
    for la in range(min(a.degree, bound) + 1):
        ha = a.homogeneous(la)
        if not np.any(ha):
            continue
        for lb in range(min(b.degree, bound - la) + 1):
            hb = b.homogeneous(lb)
            if not np.any(hb):
                continue
            conv = np.convolve(ha, hb)  # increasing x-exponent, layer la+lb
            base = tri_len(la + lb - 1) if la + lb > 0 else 0
            out.coeffs[base : base + la + lb + 1] += conv[::-1]
    return out


def differentiate(a: TaylorPoly2, axis: str) -> TaylorPoly2:
    """Partial derivative along "x" or "y"; the degree drops by one."""
    if axis not in ("x", "y"):
        raise GPWError(f"unknown axis {axis!r}")
    if a.degree == 0:
        return TaylorPoly2.zero(a.center, 0)
    out = TaylorPoly2.zero(a.center, a.degree - 1)
    for d in range(a.degree):
        for iy in range(d + 1):
            ix = d - iy
            if axis == "x":
                out.coeffs[tri_index(ix, iy)] = (ix + 1) * a.coeffs[tri_index(ix + 1, iy)]
            else:
                out.coeffs[tri_index(ix, iy)] = (iy + 1) * a.coeffs[tri_index(ix, iy + 1)]
    return out


def homogeneous_part(a: TaylorPoly2, ell: int) -> np.ndarray:
    """Coefficients c[ix, ell-ix] for ix = 0..ell, in increasing ix.

    Storage within a layer runs by increasing y-exponent, so this is the
    reversed slice of the layer block.
    """
    if ell < 0 or ell > a.degree:
        raise GPWError(f"homogeneous degree {ell} out of range 0..{a.degree}")
    base = tri_len(ell - 1) if ell > 0 else 0
    return a.coeffs[base : base + ell + 1][::-1].copy()


def homogeneous_product_part(a: TaylorPoly2, b: TaylorPoly2, ell: int) -> np.ndarray:
    """Degree-ell homogeneous coefficients of a*b (increasing x-exponent).

    Avoids forming the full product when a layer sweep only needs one
    homogeneous slice.
    """
    if a.center != b.center:
        raise GPWError("center mismatch")
    out = np.zeros(ell + 1, dtype=np.complex128)
    for m in range(ell + 1):
        if m > a.degree or ell - m > b.degree:
            continue
        ha = a.homogeneous(m)
        hb = b.homogeneous(ell - m)
        out += np.convolve(ha, hb)
    return out


def univariate_to_bivariate(u: UniSeries, axis: str, bound: int, other: float = 0.0) -> TaylorPoly2:
    """Embed a univariate series onto one axis of a bivariate polynomial.

    ``other`` is the center coordinate of the remaining axis (the embedded
    polynomial does not depend on it, but the bivariate center must be
    complete for downstream center checks).
    """
    if axis not in ("x", "y"):
        raise GPWError(f"unknown axis {axis!r}")
    if bound < 0 or bound > u.degree:
        raise GPWError(f"bound {bound} out of range 0..{u.degree}")
    center = (u.center, other) if axis == "x" else (other, u.center)
    out = TaylorPoly2.zero(center, bound)
    for k in range(bound + 1):
        if axis == "x":
            out.coeffs[tri_index(k, 0)] = u.coeffs[k]
        else:
            out.coeffs[tri_index(0, k)] = u.coeffs[k]
    return out


def univariate_along_line(
    u: UniSeries, alpha: float, beta: float, center, bound: int
) -> TaylorPoly2:
    """Bivariate expansion of f(alpha*x + beta*y) from the series of f.

    ``u`` must be centered at alpha*xc + beta*yc.  Coefficient of the
    monomial t^i s^j is a_(i+j) * C(i+j, i) * alpha^i * beta^j.
    """
    if bound < 0 or bound > u.degree:
        raise GPWError(f"bound {bound} out of range 0..{u.degree}")
    xc, yc = float(center[0]), float(center[1])
    expected = alpha * xc + beta * yc
    if abs(u.center - expected) > 1e-9 * (1.0 + abs(expected)):
        raise GPWError("univariate series is not centered on the line through the center")
    out = TaylorPoly2.zero((xc, yc), bound)
    for k in range(bound + 1):
        ak = u.coeffs[k]
        if ak == 0:
            continue
        for i in range(k + 1):
            out.coeffs[tri_index(i, k - i)] = (
                ak * math.comb(k, i) * (alpha**i) * (beta ** (k - i))
            )
    return out


def elementary_series(kind: str, center: float, degree: int) -> UniSeries:
    """Taylor series of exp, cos or sin about an arbitrary real center."""
    if degree < 0:
        raise GPWError("degree must be nonnegative")
    coeffs = np.zeros(degree + 1, dtype=np.complex128)
    if kind == "exp":
        e = math.exp(center)
        fact = 1.0
        for k in range(degree + 1):
            coeffs[k] = e * fact
            fact /= k + 1
    elif kind in ("cos", "sin"):
        # derivative four-cycle, tabulated so zeros at the center stay exact
        cv, sv = math.cos(center), math.sin(center)
        cycle = (cv, -sv, -cv, sv) if kind == "cos" else (sv, cv, -sv, -cv)
        fact = 1.0
        for k in range(degree + 1):
            coeffs[k] = cycle[k % 4] * fact
            fact /= k + 1
    else:
        raise GPWError(f"unknown elementary series kind {kind!r}")
    return UniSeries(center, degree, coeffs)


def scaled_exp_series(alpha: complex, center: float, degree: int) -> UniSeries:
    """Taylor series of exp(alpha*x) about ``center``: e^(alpha*c) alpha^k / k!."""
    if degree < 0:
        raise GPWError("degree must be nonnegative")
    coeffs = np.zeros(degree + 1, dtype=np.complex128)
    term = cmath.exp(alpha * center)
    for k in range(degree + 1):
        coeffs[k] = term
        term = term * alpha / (k + 1)
    return UniSeries(center, degree, coeffs)


def exp_jet(lambda10: complex, lambda01: complex, center, degree: int) -> TaylorPoly2:
    """Taylor polynomial of exp(l10*(x-xc) + l01*(y-yc)) about the center.

    Coefficients are l10^ix * l01^iy / (ix! iy!).
    """
    out = TaylorPoly2.zero(center, degree)
    lx = np.zeros(degree + 1, dtype=np.complex128)
    ly = np.zeros(degree + 1, dtype=np.complex128)
    lx[0] = 1.0
    ly[0] = 1.0
    for k in range(1, degree + 1):
        lx[k] = lx[k - 1] * lambda10 / k
        ly[k] = ly[k - 1] * lambda01 / k
    for d in range(degree + 1):
        for iy in range(d + 1):
            out.coeffs[tri_index(d - iy, iy)] = lx[d - iy] * ly[iy]
    return out


def resized(a: TaylorPoly2, degree: int) -> TaylorPoly2:
    """Same polynomial stored at another degree (explicit pad or truncate)."""
    out = TaylorPoly2.zero(a.center, degree)
    n = min(tri_len(degree), tri_len(a.degree))
    out.coeffs[:n] = a.coeffs[:n]
    return out


def exp_of_poly(p: TaylorPoly2, bound: int) -> TaylorPoly2:
    """Taylor polynomial of exp(p) through total degree ``bound``.

    Splits off the constant term and sums exp(n) = sum n^k / k! for the
    nilpotent remainder; n^k has no terms below degree k, so k <= bound terms
    suffice.
    """
    if bound < 0:
        raise GPWError("bound must be nonnegative")
    c0 = complex(p.coeffs[0])
    nil = resized(p, bound)
    nil.coeffs[0] = 0.0
    result = TaylorPoly2.constant(1.0, p.center, bound)
    term = TaylorPoly2.constant(1.0, p.center, bound)
    for k in range(1, bound + 1):
        term = truncated_multiply(term, nil, bound) * (1.0 / k)
        if term.max_abs() == 0.0:
            break
        result = result + term
    return result * cmath.exp(c0)
