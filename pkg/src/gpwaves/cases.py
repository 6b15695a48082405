"""Built-in variable-coefficient test problems with known exact solutions.

Each case bundles an operator (in the div(A grad) + V.grad + s form of
:mod:`gpwaves.operators`), an axis-aligned domain, and an exact solution with
pointwise values, gradient, and local Taylor data.  Operators written with
explicit second-order terms (e.g. x^2 * Laplacian) are converted to
divergence form, with first-order corrections folded into V.

Note on the "Jc" case: with the first-order term -x d/dx the function
J1(x) cos(y) does not solve the PDE (the Bessel relation forces +x d/dx, as
in the "JJ" case), so the operator here carries +x d/dx and the exact
solution annihilates it; the test suite checks this for every case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial
from typing import Callable

import numpy as np

from .errors import GPWError
from .operators import CoefficientField, OperatorSpec, ONE_FIELD, ZERO_FIELD
from .series import (
    TaylorPoly2,
    elementary_series,
    scaled_exp_series,
    truncated_multiply,
    univariate_along_line,
    univariate_to_bivariate,
)
from .specialfn import (
    airy_ai,
    airy_ai_prime,
    airy_taylor,
    bessel_j0,
    bessel_j1,
    bessel_j1_prime,
    bessel_taylor,
)


@dataclass(frozen=True)
class TestCase:
    label: str
    operator: OperatorSpec
    domain: tuple[float, float, float, float]  # (x0, x1, y0, y1)
    description: str
    solution: str
    value: Callable
    gradient: Callable
    taylor: Callable

    def exact_value(self, x, y):
        return self.value(x, y)

    def exact_gradient(self, x, y):
        return self.gradient(x, y)

    def exact_taylor(self, center, degree: int) -> TaylorPoly2:
        return self.taylor(center, degree)

    def contains(self, point) -> bool:
        x0, x1, y0, y1 = self.domain
        return x0 <= point[0] <= x1 and y0 <= point[1] <= y1


def _sep_taylor(fx, fy):
    """Jet of f(x) g(y): embed both univariate jets and multiply."""

    def taylor(center, degree):
        xc, yc = center
        d = max(degree, 1)
        px = univariate_to_bivariate(fx(xc, d), "x", degree, other=yc)
        py = univariate_to_bivariate(fy(yc, d), "y", degree, other=xc)
        return truncated_multiply(px, py, degree)

    return taylor


def _axis_taylor(fy):
    def taylor(center, degree):
        xc, yc = center
        return univariate_to_bivariate(fy(yc, max(degree, 1)), "y", degree, other=xc)

    return taylor


_cos = partial(elementary_series, "cos")
_sin = partial(elementary_series, "sin")
_exp_i = partial(scaled_exp_series, 1j)
_j0 = partial(bessel_taylor, 0)
_j1 = partial(bessel_taylor, 1)


def _case_ae() -> TestCase:
    # Laplacian - (x - 1), i.e. s = 1 - x after sign normalization.
    op = OperatorSpec.helmholtz(
        CoefficientField.polynomial({(0, 0): 1.0, (1, 0): -1.0}, "1-x"), label="Ae"
    )
    return TestCase(
        label="Ae",
        operator=op,
        domain=(-2.0, 2.0, -2.0, 2.0),
        description="Laplacian - (x - 1)",
        solution="Ai(x) exp(i y)",
        value=lambda x, y: airy_ai(x) * np.exp(1j * np.asarray(y, dtype=float)),
        gradient=lambda x, y: (
            airy_ai_prime(x) * np.exp(1j * np.asarray(y, dtype=float)),
            1j * airy_ai(x) * np.exp(1j * np.asarray(y, dtype=float)),
        ),
        taylor=_sep_taylor(airy_taylor, _exp_i),
    )


def _case_ac() -> TestCase:
    op = OperatorSpec.helmholtz(
        CoefficientField.polynomial({(0, 0): 1.0, (1, 0): -1.0}, "1-x"), label="Ac"
    )
    return TestCase(
        label="Ac",
        operator=op,
        domain=(-2.0, 2.0, -2.0, 2.0),
        description="Laplacian - (x - 1)",
        solution="Ai(x) cos(y)",
        value=lambda x, y: airy_ai(x) * np.cos(np.asarray(y, dtype=float)),
        gradient=lambda x, y: (
            airy_ai_prime(x) * np.cos(np.asarray(y, dtype=float)),
            -airy_ai(x) * np.sin(np.asarray(y, dtype=float)),
        ),
        taylor=_sep_taylor(airy_taylor, _cos),
    )


def _case_aplus() -> TestCase:
    op = OperatorSpec.helmholtz(
        CoefficientField.polynomial({(1, 0): -2.0, (0, 1): -2.0}, "-2(x+y)"), label="A+"
    )

    def taylor(center, degree):
        xc, yc = center
        u = airy_taylor(xc + yc, max(degree, 1))
        return univariate_along_line(u, 1.0, 1.0, center, degree)

    return TestCase(
        label="A+",
        operator=op,
        domain=(-2.0, 2.0, -2.0, 2.0),
        description="Laplacian - 2(x + y)",
        solution="Ai(x + y)",
        value=lambda x, y: airy_ai(np.asarray(x, dtype=float) + np.asarray(y, dtype=float)),
        gradient=lambda x, y: (
            airy_ai_prime(np.asarray(x, dtype=float) + np.asarray(y, dtype=float)),
            airy_ai_prime(np.asarray(x, dtype=float) + np.asarray(y, dtype=float)),
        ),
        taylor=taylor,
    )


def _case_cs() -> TestCase:
    # dxx + 0.2 cos(x) sin(y) dxdy - 2 dyy + (0.2 sin(x) cos(y) - 1).
    # The mixed term is split symmetrically, A12 = A21 = 0.1 cos(x) sin(y);
    # only A12 + A21 enters the equations and the point matrix stays symmetric.
    # Divergence form adds (dy A21) dx + (dx A12) dy, cancelled through V.
    a_off = CoefficientField.separable(_cos, _sin, "cos(x)sin(y)") * 0.1
    v1 = CoefficientField.separable(_cos, _cos, "cos(x)cos(y)") * (-0.1)
    v2 = CoefficientField.separable(_sin, _sin, "sin(x)sin(y)") * 0.1
    s = CoefficientField.separable(_sin, _cos, "sin(x)cos(y)") * 0.2 + CoefficientField.constant(
        -1.0
    )
    op = OperatorSpec(
        a11=ONE_FIELD,
        a12=a_off,
        a21=a_off,
        a22=CoefficientField.constant(-2.0),
        v1=v1,
        v2=v2,
        s=s,
        label="cs",
    )
    return TestCase(
        label="cs",
        operator=op,
        domain=(-1.0, 1.0, -1.0, 1.0),
        description="dxx + 0.2 cos(x)sin(y) dxdy - 2 dyy + (0.2 sin(x)cos(y) - 1)",
        solution="cos(x) sin(y)",
        value=lambda x, y: np.cos(np.asarray(x, dtype=float)) * np.sin(np.asarray(y, dtype=float))
        + 0j,
        gradient=lambda x, y: (
            -np.sin(np.asarray(x, dtype=float)) * np.sin(np.asarray(y, dtype=float)) + 0j,
            np.cos(np.asarray(x, dtype=float)) * np.cos(np.asarray(y, dtype=float)) + 0j,
        ),
        taylor=_sep_taylor(_cos, _sin),
    )


def _case_ey() -> TestCase:
    op = OperatorSpec.helmholtz(ONE_FIELD, label="ey")
    return TestCase(
        label="ey",
        operator=op,
        domain=(-1.0, 1.0, 0.0, 2.0 * math.pi),
        description="Laplacian + 1",
        solution="exp(i y)",
        value=lambda x, y: np.exp(1j * np.asarray(y, dtype=float))
        * np.ones_like(np.asarray(x, dtype=float)),
        gradient=lambda x, y: (
            np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape, dtype=complex),
            1j
            * np.exp(1j * np.asarray(y, dtype=float))
            * np.ones_like(np.asarray(x, dtype=float)),
        ),
        taylor=_axis_taylor(_exp_i),
    )


def _case_jc() -> TestCase:
    # x^2 Laplacian + x dx + cos(y) dy - (1 - 2x^2 - sin(y)) in divergence
    # form: A = x^2 I contributes 2x dx, so V1 = -x leaves +x dx in total.
    x_sq = CoefficientField.polynomial({(2, 0): 1.0}, "x^2")
    op = OperatorSpec(
        a11=x_sq,
        a12=ZERO_FIELD,
        a21=ZERO_FIELD,
        a22=x_sq,
        v1=CoefficientField.polynomial({(1, 0): -1.0}, "-x"),
        v2=CoefficientField.separable(None, _cos, "cos(y)"),
        s=CoefficientField.polynomial({(2, 0): 2.0, (0, 0): -1.0}, "2x^2-1")
        + CoefficientField.separable(None, _sin, "sin(y)"),
        label="Jc",
    )
    return TestCase(
        label="Jc",
        operator=op,
        domain=(1.0, 5.0, 0.0, 2.0 * math.pi),
        description="x^2 Laplacian + x dx + cos(y) dy - (1 - 2x^2 - sin(y))",
        solution="J1(x) cos(y)",
        value=lambda x, y: bessel_j1(x) * np.cos(np.asarray(y, dtype=float)) + 0j,
        gradient=lambda x, y: (
            bessel_j1_prime(x) * np.cos(np.asarray(y, dtype=float)) + 0j,
            -bessel_j1(x) * np.sin(np.asarray(y, dtype=float)) + 0j,
        ),
        taylor=_sep_taylor(_j1, _cos),
    )


def _case_jj() -> TestCase:
    # x^2 dxx + y^2 dyy + x dx + y dy + (x^2 + y^2 - 1): A = diag(x^2, y^2)
    # contributes 2x dx + 2y dy, so V = (-x, -y).
    op = OperatorSpec(
        a11=CoefficientField.polynomial({(2, 0): 1.0}, "x^2"),
        a12=ZERO_FIELD,
        a21=ZERO_FIELD,
        a22=CoefficientField.polynomial({(0, 2): 1.0}, "y^2"),
        v1=CoefficientField.polynomial({(1, 0): -1.0}, "-x"),
        v2=CoefficientField.polynomial({(0, 1): -1.0}, "-y"),
        s=CoefficientField.polynomial({(2, 0): 1.0, (0, 2): 1.0, (0, 0): -1.0}, "x^2+y^2-1"),
        label="JJ",
    )
    return TestCase(
        label="JJ",
        operator=op,
        domain=(1.0, 3.0, 0.0, 3.0),
        description="x^2 dxx + y^2 dyy + x dx + y dy + (x^2 + y^2 - 1)",
        solution="J0(x) J1(y)",
        value=lambda x, y: bessel_j0(x) * bessel_j1(y) + 0j,
        gradient=lambda x, y: (
            -bessel_j1(x) * bessel_j1(y) + 0j,
            bessel_j0(x) * bessel_j1_prime(y) + 0j,
        ),
        taylor=_sep_taylor(_j0, _j1),
    )


_BUILDERS = {
    "Ae": _case_ae,
    "Ac": _case_ac,
    "A+": _case_aplus,
    "cs": _case_cs,
    "ey": _case_ey,
    "Jc": _case_jc,
    "JJ": _case_jj,
}


def builtin_test_cases() -> list[TestCase]:
    """The seven built-in problems, in registry order."""
    return [build() for build in _BUILDERS.values()]


def case_labels() -> list[str]:
    return list(_BUILDERS.keys())


def get_case(label: str) -> TestCase:
    try:
        return _BUILDERS[label]()
    except KeyError:
        raise GPWError(
            f"unknown test case {label!r}; valid labels: {', '.join(_BUILDERS)}"
        ) from None
