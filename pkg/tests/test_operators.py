import numpy as np
import pytest

from gpwaves.cases import builtin_test_cases, case_labels, get_case
from gpwaves.errors import GPWError
from gpwaves.operators import (
    CoefficientField,
    OperatorSpec,
    apply_operator_taylor,
    conjugated_amplitude_operator,
    conjugated_phase_operator,
)
from gpwaves.series import (
    TaylorPoly2,
    differentiate,
    elementary_series,
    exp_jet,
    exp_of_poly,
    truncated_multiply,
    univariate_to_bivariate,
)

from .helpers import random_poly, rel_diff

LAPLACE = OperatorSpec.helmholtz(CoefficientField.constant(0.0), "laplace")


def random_operator(rng, degree=2):
    """Polynomial-coefficient operator with complex entries (no symmetry needed
    for the conjugation identities)."""

    def rand_field():
        terms = {}
        for i in range(degree + 1):
            for j in range(degree + 1 - i):
                terms[(i, j)] = complex(rng.normal(), rng.normal())
        return CoefficientField.polynomial(terms)

    return OperatorSpec(
        a11=rand_field(),
        a12=rand_field(),
        a21=rand_field(),
        a22=rand_field(),
        v1=rand_field(),
        v2=rand_field(),
        s=rand_field(),
        label="random",
    )


def test_coefficient_field_consistency():
    f = CoefficientField.polynomial({(0, 0): 2.0, (1, 1): -3.0, (2, 0): 1.0})
    center = (0.7, -0.4)
    assert f.value_at(center) == pytest.approx(2.0 - 3.0 * 0.7 * (-0.4) + 0.49)
    lo = f.taylor_at(center, 1)
    hi = f.taylor_at(center, 2)
    assert np.allclose(hi.coeffs[: lo.coeffs.size], lo.coeffs)
    assert hi.homogeneous(0)[0] == pytest.approx(f.value_at(center))


def test_field_algebra():
    f = CoefficientField.constant(2.0) + 3.0 * CoefficientField.polynomial({(1, 0): 1.0})
    assert f.value_at((0.5, 0.0)) == pytest.approx(3.5)
    g = CoefficientField.polynomial({(1, 0): 1.0}) * CoefficientField.polynomial({(0, 1): 1.0})
    jet = g.taylor_at((0.0, 0.0), 2)
    assert jet[1, 1] == 1.0 and jet.max_abs() == 1.0


def test_apply_laplacian_to_quadratic():
    u = TaylorPoly2.from_terms((0.0, 0.0), 2, {(2, 0): 1.0, (0, 2): 1.0})
    out = apply_operator_taylor(LAPLACE, u, 0)
    assert out[0, 0] == pytest.approx(4.0)


def test_apply_helmholtz_to_cosine_jet():
    # (Laplacian + 1) applied to the order-2 jet of cos(y) vanishes at order 0
    ey = get_case("ey").operator
    u = univariate_to_bivariate(elementary_series("cos", 0.0, 2), "y", 2)
    out = apply_operator_taylor(ey, u, 0)
    assert abs(out[0, 0]) < 1e-15


def test_apply_airy_case_annihilates():
    case = get_case("Ae")
    jet = case.exact_taylor((0.0, 0.0), 6)
    out = apply_operator_taylor(case.operator, jet, 4)
    assert out.max_abs() <= 1e-10


def test_apply_insufficient_jet_order():
    u = TaylorPoly2.constant(1.0, (0.0, 0.0), 2)
    with pytest.raises(GPWError, match="insufficient jet order"):
        apply_operator_taylor(LAPLACE, u, 1)


@pytest.mark.parametrize("opname", ["random", "cs", "JJ"])
def test_amplitude_conjugation_identity(opname):
    rng = np.random.default_rng(5)
    out = 3
    K = out + 2
    for trial in range(10):
        if opname == "random":
            op = random_operator(rng)
            center = (float(rng.normal()), float(rng.normal()))
        else:
            case = get_case(opname)
            x0, x1, y0, y1 = case.domain
            op = case.operator
            center = (float(rng.uniform(x0, x1)), float(rng.uniform(y0, y1)))
        Q = random_poly(rng, center, 5)
        d = (complex(rng.normal(), rng.normal()), complex(rng.normal(), rng.normal()))
        direct = conjugated_amplitude_operator(op, Q, d, out)
        E = exp_jet(d[0], d[1], center, K)
        brute = truncated_multiply(
            apply_operator_taylor(op, truncated_multiply(Q, E, K), out),
            exp_jet(-d[0], -d[1], center, out),
            out,
        )
        assert rel_diff(direct.coeffs, brute.coeffs) < 1e-11


@pytest.mark.parametrize("opname", ["random", "cs", "Jc"])
def test_phase_conjugation_identity(opname):
    rng = np.random.default_rng(6)
    out = 3
    K = out + 2
    for trial in range(10):
        if opname == "random":
            op = random_operator(rng)
            center = (float(rng.normal()), float(rng.normal()))
        else:
            case = get_case(opname)
            x0, x1, y0, y1 = case.domain
            op = case.operator
            center = (float(rng.uniform(x0, x1)), float(rng.uniform(y0, y1)))
        P = random_poly(rng, center, K)
        P.coeffs[0] = 0.0
        direct = conjugated_phase_operator(op, P, out)
        brute = truncated_multiply(
            apply_operator_taylor(op, exp_of_poly(P, K), out),
            exp_of_poly(-P, out),
            out,
        )
        assert rel_diff(direct.coeffs, brute.coeffs) < 1e-10


def test_amplitude_conjugation_reduces_to_helmholtz_form():
    # for A = I, V = 0, s = k^2 the conjugated operator must equal
    # Lap Q + 2 grad Q . d + (d.d + k^2) Q, the (sign-flipped) classical form
    rng = np.random.default_rng(9)
    case = get_case("Ae")
    op = case.operator
    center = (0.4, -1.2)
    Q = random_poly(rng, center, 5)
    d = (0.3 - 0.2j, 1.0 + 0.5j)
    out = 3
    got = conjugated_amplitude_operator(op, Q, d, out)
    qx = differentiate(Q, "x")
    qy = differentiate(Q, "y")
    lap = differentiate(qx, "x") + differentiate(qy, "y")
    kt = op.s.taylor_at(center, out)
    kt.coeffs[0] += d[0] * d[0] + d[1] * d[1]
    expected = (
        (lap + qx * (2 * d[0]) + qy * (2 * d[1]))
        + truncated_multiply(kt, Q, out)
    )
    n = expected.coeffs.size
    assert rel_diff(got.coeffs[:n], expected.coeffs) < 1e-13


def test_amplitude_conjugation_examples():
    # constant k^2 with a normalized direction and Q = 1 gives the zero polynomial
    op = OperatorSpec.helmholtz(CoefficientField.constant(4.0))
    Q = TaylorPoly2.constant(1.0, (0.0, 0.0), 3)
    out = conjugated_amplitude_operator(op, Q, (2j, 0.0), 1)
    assert out.max_abs() < 1e-15
    # Q = x, Laplace, d = (1, 0): 2 grad Q . d = 2
    Qx = TaylorPoly2.from_terms((0.0, 0.0), 3, {(1, 0): 1.0})
    out2 = conjugated_amplitude_operator(LAPLACE, Qx, (1.0, 0.0), 1)
    assert out2[0, 0] == pytest.approx(2.0) and out2.max_abs() == pytest.approx(2.0)


def test_phase_conjugation_examples():
    op = OperatorSpec.helmholtz(CoefficientField.constant(4.0))
    P = TaylorPoly2.from_terms((0.0, 0.0), 3, {(1, 0): 2j})
    assert conjugated_phase_operator(op, P, 1).max_abs() < 1e-15
    P2 = TaylorPoly2.from_terms((0.0, 0.0), 4, {(2, 0): 1.0})
    out = conjugated_phase_operator(LAPLACE, P2, 2)
    assert out[0, 0] == pytest.approx(2.0)
    assert out[2, 0] == pytest.approx(4.0)
    assert abs(out[1, 0]) + abs(out[0, 1]) + abs(out[0, 2]) + abs(out[1, 1]) < 1e-15
    with pytest.raises(GPWError, match="vanish at the center"):
        conjugated_phase_operator(LAPLACE, TaylorPoly2.constant(1.0, (0.0, 0.0), 3), 1)


def test_builtin_case_values():
    assert case_labels() == ["Ae", "Ac", "A+", "cs", "ey", "Jc", "JJ"]
    ey = get_case("ey")
    assert ey.exact_value(0.3, np.pi / 2) == pytest.approx(1j)
    cs = get_case("cs")
    assert cs.exact_value(0.0, 0.0) == pytest.approx(0.0)
    with pytest.raises(GPWError, match="valid labels"):
        get_case("nope")


def test_jj_annihilation_at_reference_center():
    jj = get_case("JJ")
    jet = jj.exact_taylor((2.0, 1.5), 5)
    out = apply_operator_taylor(jj.operator, jet, 3)
    assert out.max_abs() <= 1e-9


@pytest.mark.parametrize("case", builtin_test_cases(), ids=lambda c: c.label)
def test_all_cases_annihilate_operator(case):
    rng = np.random.default_rng(17)
    x0, x1, y0, y1 = case.domain
    n = 8
    for _ in range(10):
        c = (float(rng.uniform(x0, x1)), float(rng.uniform(y0, y1)))
        u = case.exact_taylor(c, n)
        res = apply_operator_taylor(case.operator, u, n - 2)
        assert res.max_abs() <= 1e-9 * max(u.max_abs(), 1e-30)
        v = case.exact_value(*c)
        assert abs(u.coeffs[0] - v) <= 1e-12 * (1.0 + abs(v))


@pytest.mark.parametrize("case", builtin_test_cases(), ids=lambda c: c.label)
def test_gradients_match_taylor(case):
    # first-order jet coefficients equal the analytic gradient
    rng = np.random.default_rng(23)
    x0, x1, y0, y1 = case.domain
    for _ in range(5):
        c = (float(rng.uniform(x0, x1)), float(rng.uniform(y0, y1)))
        u = case.exact_taylor(c, 2)
        gx, gy = case.exact_gradient(*c)
        assert abs(u[1, 0] - gx) < 1e-11 * (1.0 + abs(gx))
        assert abs(u[0, 1] - gy) < 1e-11 * (1.0 + abs(gy))
