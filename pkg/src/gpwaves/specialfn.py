"""Self-contained Airy Ai and Bessel J0/J1 values and Taylor generators.

Point values come from power series about the origin, reliable in double
precision on the working ranges of the built-in test problems (|x| <= 10 for
Ai, |x| <= 16 for J0/J1; outside those ranges the alternating sums lose too
many digits and we refuse to answer).

Taylor series about other centers come from the defining ODEs:

* Airy, y'' = x y, shifted to x = c + t:
      (m+2)(m+1) a_{m+2} = c a_m + a_{m-1},     a_{-1} = 0
* Bessel, x^2 y'' + x y' + (x^2 - v^2) y = 0, shifted to x = c + t:
      c^2 (k+2)(k+1) a_{k+2} =
          -[ c (k+1)(2k+1) a_{k+1} + (k^2 + c^2 - v^2) a_k
             + 2 c a_{k-1} + a_{k-2} ]
  with the regular Maclaurin expansion taking over at c = 0.

The two Airy seeds Ai(0) and Ai'(0) are hard-coded 16-digit constants; an
import-time check validates their product against the closed form
1/(2 sqrt(3) pi), which pins both Gamma-function values at once.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import GPWError
from .series import UniSeries

AIRY_AI_0 = 0.3550280538878172  # 3^(-2/3) / Gamma(2/3)
AIRY_AI_PRIME_0 = -0.2588194037928068  # -3^(-1/3) / Gamma(1/3)

_AIRY_RANGE = 10.0
_BESSEL_RANGE = 16.0
_AIRY_TERMS = 60
_BESSEL_TERMS = 48


def _check_seed_constants():
    target = 1.0 / (2.0 * math.sqrt(3.0) * math.pi)
    if abs(AIRY_AI_0 * (-AIRY_AI_PRIME_0) - target) > 5e-16:
        raise GPWError("Airy seed constants fail the Wronskian product check")


_check_seed_constants()


def _require_range(x: np.ndarray, limit: float, name: str):
    if np.any(np.abs(x) > limit):
        raise GPWError(f"outside validated range: |{name}| must be <= {limit}")


def _airy_basis(x: np.ndarray):
    """The two origin-normalized solutions of y'' = x y and their derivatives.

    f(0)=1, f'(0)=0 and g(0)=0, g'(0)=1; both series have terms every third
    power, accumulated without ever dividing by x.
    """
    f = np.ones_like(x)
    fp = np.zeros_like(x)
    g = x.copy()
    gp = np.ones_like(x)
    x2 = x * x
    x3 = x2 * x
    tf = np.ones_like(x)  # current term of f
    tg = x.copy()  # current term of g
    for k in range(1, _AIRY_TERMS + 1):
        fp = fp + tf * x2 / (3 * k - 1)
        tf = tf * x3 / ((3 * k) * (3 * k - 1))
        f = f + tf
        gp = gp + tg * x2 / (3 * k)
        tg = tg * x3 / ((3 * k + 1) * (3 * k))
        g = g + tg
    return f, fp, g, gp


def _scalar_out(v: np.ndarray):
    return float(v) if v.shape == () else v


def airy_ai(x):
    """Ai(x) for |x| <= 10 (scalar or array)."""
    xa = np.asarray(x, dtype=float)
    _require_range(xa, _AIRY_RANGE, "x")
    f, _, g, _ = _airy_basis(xa)
    return _scalar_out(AIRY_AI_0 * f + AIRY_AI_PRIME_0 * g)


def airy_ai_prime(x):
    """Ai'(x) for |x| <= 10 (scalar or array)."""
    xa = np.asarray(x, dtype=float)
    _require_range(xa, _AIRY_RANGE, "x")
    _, fp, _, gp = _airy_basis(xa)
    return _scalar_out(AIRY_AI_0 * fp + AIRY_AI_PRIME_0 * gp)


def bessel_j0(x):
    """J0(x) by its power series, reliable for |x| <= 16."""
    xa = np.asarray(x, dtype=float)
    _require_range(xa, _BESSEL_RANGE, "x")
    q = xa * xa / 4.0
    term = np.ones_like(xa)
    total = np.ones_like(xa)
    for m in range(1, _BESSEL_TERMS + 1):
        term = -term * q / (m * m)
        total = total + term
    return _scalar_out(total)


def bessel_j1(x):
    """J1(x) by its power series, reliable for |x| <= 16."""
    xa = np.asarray(x, dtype=float)
    _require_range(xa, _BESSEL_RANGE, "x")
    q = xa * xa / 4.0
    term = xa / 2.0
    total = term.copy()
    for m in range(1, _BESSEL_TERMS + 1):
        term = -term * q / (m * (m + 1))
        total = total + term
    return _scalar_out(total)


def bessel_j1_prime(x):
    """J1'(x) = J0(x) - J1(x)/x, with the limit value 1/2 at x = 0."""
    xa = np.asarray(x, dtype=float)
    _require_range(xa, _BESSEL_RANGE, "x")
    safe = np.where(xa == 0.0, 1.0, xa)
    out = np.where(xa == 0.0, 0.5, np.asarray(bessel_j0(xa)) - np.asarray(bessel_j1(xa)) / safe)
    return _scalar_out(out)


def airy_taylor(center: float, degree: int) -> UniSeries:
    """Taylor series of Ai about ``center`` (|center| <= 10, degree >= 1)."""
    if degree < 1:
        raise GPWError("degree must be at least 1")
    c = float(center)
    if abs(c) > _AIRY_RANGE:
        raise GPWError(f"outside validated range: |center| must be <= {_AIRY_RANGE}")
    a = np.zeros(degree + 1, dtype=np.complex128)
    a[0] = airy_ai(c)
    a[1] = airy_ai_prime(c)
    for m in range(degree - 1):
        prev = a[m - 1] if m >= 1 else 0.0
        a[m + 2] = (c * a[m] + prev) / ((m + 2) * (m + 1))
    return UniSeries(c, degree, a)


def _bessel_maclaurin(order: int, degree: int) -> np.ndarray:
    a = np.zeros(degree + 1, dtype=np.complex128)
    if order == 0:
        term = 1.0
        for m in range(degree // 2 + 1):
            if 2 * m <= degree:
                a[2 * m] = term
            term = -term / (4.0 * (m + 1) * (m + 1))
    else:
        term = 0.5
        for m in range((degree + 1) // 2):
            if 2 * m + 1 <= degree:
                a[2 * m + 1] = term
            term = -term / (4.0 * (m + 1) * (m + 2))
    return a


def bessel_taylor(order: int, center: float, degree: int) -> UniSeries:
    """Taylor series of J0 or J1 about ``center``.

    First two coefficients come from point values via J0' = -J1 and
    J1' = J0 - J1/x; the rest follow the shifted Bessel ODE recurrence.
    The center x = 0 is a regular point and uses the Maclaurin expansion
    directly.
    """
    if order not in (0, 1):
        raise GPWError("order must be 0 or 1")
    if degree < 1:
        raise GPWError("degree must be at least 1")
    c = float(center)
    if abs(c) > _BESSEL_RANGE:
        raise GPWError(f"outside validated range: |center| must be <= {_BESSEL_RANGE}")
    if c == 0.0:
        return UniSeries(0.0, degree, _bessel_maclaurin(order, degree))
    a = np.zeros(degree + 1, dtype=np.complex128)
    if order == 0:
        a[0] = bessel_j0(c)
        a[1] = -bessel_j1(c)
    else:
        a[0] = bessel_j1(c)
        a[1] = bessel_j1_prime(c)
    nu2 = float(order * order)
    c2 = c * c
    for k in range(degree - 1):
        am1 = a[k - 1] if k >= 1 else 0.0
        am2 = a[k - 2] if k >= 2 else 0.0
        rhs = c * (k + 1) * (2 * k + 1) * a[k + 1] + (k * k + c2 - nu2) * a[k] + 2 * c * am1 + am2
        a[k + 2] = -rhs / (c2 * (k + 2) * (k + 1))
    return UniSeries(c, degree, a)
