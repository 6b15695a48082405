import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gpwaves.errors import GPWError
from gpwaves.series import (
    MultiIndex2,
    TaylorPoly2,
    UniSeries,
    differentiate,
    elementary_series,
    exp_jet,
    exp_of_poly,
    homogeneous_part,
    scaled_exp_series,
    tri_index,
    tri_len,
    truncated_multiply,
    univariate_along_line,
    univariate_to_bivariate,
)

from .helpers import (
    random_poly,
    rel_diff,
    run_derivative_properties,
    run_homogeneous_roundtrip,
    run_multiplication_properties,
)

C0 = (0.0, 0.0)


def poly(degree, terms, center=C0):
    return TaylorPoly2.from_terms(center, degree, terms)


def test_index_bijection():
    seen = set()
    for d in range(8):
        for iy in range(d + 1):
            seen.add(tri_index(d - iy, iy))
    assert seen == set(range(tri_len(7)))
    assert MultiIndex2(3, 2).position == tri_index(3, 2)
    assert MultiIndex2(3, 2).degree == 5


def test_multiply_one_plus_x_times_one_plus_y():
    a = poly(1, {(0, 0): 1, (1, 0): 1})
    b = poly(1, {(0, 0): 1, (0, 1): 1})
    p = truncated_multiply(a, b, 2)
    assert p[0, 0] == 1 and p[1, 0] == 1 and p[0, 1] == 1
    assert p[1, 1] == 1 and p[2, 0] == 0 and p[0, 2] == 0


def test_multiply_by_one_is_identity():
    rng = np.random.default_rng(0)
    a = random_poly(rng, C0, 4)
    one = TaylorPoly2.constant(1.0, C0)
    p = truncated_multiply(a, one, 4)
    assert np.array_equal(p.coeffs, a.coeffs)


def test_multiply_binomial_square():
    xy = poly(1, {(1, 0): 1, (0, 1): 1})
    p = truncated_multiply(xy, xy, 2)
    assert p[2, 0] == 1 and p[1, 1] == 2 and p[0, 2] == 1


def test_multiply_center_mismatch():
    a = TaylorPoly2.constant(1.0, (0.0, 0.0))
    b = TaylorPoly2.constant(1.0, (1.0, 0.0))
    with pytest.raises(GPWError, match="center mismatch"):
        truncated_multiply(a, b, 0)


def test_differentiate_power_rule():
    p = poly(3, {(2, 1): 1})  # x^2 y
    dx = differentiate(p, "x")
    assert dx[1, 1] == 2 and dx.max_abs() == 2
    dy = differentiate(TaylorPoly2.constant(5.0, C0), "y")
    assert dy.degree == 0 and dy.max_abs() == 0
    x3 = poly(3, {(3, 0): 1.0 / 6.0})
    assert differentiate(x3, "x")[2, 0] == pytest.approx(0.5)


def test_homogeneous_part_readout():
    a = poly(1, {(0, 0): 1, (1, 0): 2, (0, 1): 3})
    assert np.array_equal(homogeneous_part(a, 1), np.array([3, 2], dtype=complex))
    assert np.array_equal(homogeneous_part(a, 0), np.array([1], dtype=complex))
    b = poly(2, {(2, 0): 1, (0, 2): -1})
    assert np.array_equal(homogeneous_part(b, 2), np.array([-1, 0, 1], dtype=complex))
    with pytest.raises(GPWError):
        homogeneous_part(a, 2)


def test_univariate_to_bivariate():
    u = UniSeries(0.5, 1, np.array([1.0, 1.0]))
    p = univariate_to_bivariate(u, "x", 1, other=2.0)
    assert p.center == (0.5, 2.0)
    assert p[0, 0] == 1 and p[1, 0] == 1 and p[0, 1] == 0
    z = univariate_to_bivariate(UniSeries.zero(0.0, 3), "y", 3)
    assert z.max_abs() == 0
    cos2 = univariate_to_bivariate(elementary_series("cos", 0.0, 2), "y", 2)
    assert cos2[0, 0] == 1 and cos2[0, 1] == 0 and cos2[0, 2] == pytest.approx(-0.5)
    with pytest.raises(GPWError):
        univariate_to_bivariate(u, "x", 2)


def test_elementary_series_values():
    e = elementary_series("exp", 0.0, 3)
    assert np.allclose(e.coeffs, [1, 1, 0.5, 1.0 / 6.0])
    c = elementary_series("cos", 0.0, 2)
    assert np.allclose(c.coeffs, [1, 0, -0.5], atol=1e-16)
    s = elementary_series("sin", math.pi / 2.0, 2)
    assert np.allclose(s.coeffs, [1, 0, -0.5], atol=1e-15)
    with pytest.raises(GPWError, match="unknown elementary series"):
        elementary_series("tan", 0.0, 2)


def test_scaled_exp_series_matches_exp():
    s = scaled_exp_series(1.0, 0.3, 6)
    e = elementary_series("exp", 0.3, 6)
    assert rel_diff(s.coeffs, e.coeffs) < 1e-15
    si = scaled_exp_series(1j, 0.0, 4)
    assert si.coeffs[1] == 1j and si.coeffs[2] == pytest.approx(-0.5)


def test_univariate_along_line_airy_style():
    # f(x + y) with f = exp about the matching center
    center = (0.25, 0.5)
    u = elementary_series("exp", 0.75, 4)
    p = univariate_along_line(u, 1.0, 1.0, center, 4)
    # coefficient of t^i s^j is exp(0.75) / (i! j!)
    for ix in range(3):
        for iy in range(3 - ix):
            expected = math.exp(0.75) / (math.factorial(ix) * math.factorial(iy))
            assert p[ix, iy] == pytest.approx(expected, rel=1e-14)
    with pytest.raises(GPWError):
        univariate_along_line(u, 1.0, 1.0, (0.0, 0.0), 2)


def test_exp_jet_matches_exp_of_poly():
    center = (0.1, -0.2)
    lin = TaylorPoly2.from_terms(center, 1, {(1, 0): 0.3 - 0.7j, (0, 1): 1.1j})
    a = exp_jet(0.3 - 0.7j, 1.1j, center, 5)
    b = exp_of_poly(lin, 5)
    assert rel_diff(a.coeffs, b.coeffs) < 1e-14


def test_evaluate_and_uniseries():
    p = poly(2, {(0, 0): 1, (1, 0): 2, (0, 2): -1}, center=(1.0, 2.0))
    assert p.evaluate(1.5, 2.5) == pytest.approx(1 + 2 * 0.5 - 0.25)
    pts = p.evaluate(np.array([1.0, 1.5]), np.array([2.0, 2.5]))
    assert pts.shape == (2,) and pts[0] == pytest.approx(1.0)
    u = UniSeries(1.0, 2, np.array([1.0, 0.0, 3.0]))
    assert u.evaluate(1.5) == pytest.approx(1 + 3 * 0.25)
    assert u.derivative().coeffs[1] == pytest.approx(6.0)


def test_multiplication_properties():
    run_multiplication_properties()


def test_derivative_properties():
    run_derivative_properties()


def test_homogeneous_roundtrip():
    run_homogeneous_roundtrip()


@settings(max_examples=25, deadline=None)
@given(
    da=st.integers(0, 5),
    db=st.integers(0, 5),
    data=st.data(),
)
def test_multiply_commutes_hypothesis(da, db, data):
    bound = data.draw(st.integers(0, da + db))
    seed = data.draw(st.integers(0, 2**31 - 1))
    rng = np.random.default_rng(seed)
    a = random_poly(rng, C0, da)
    b = random_poly(rng, C0, db)
    ab = truncated_multiply(a, b, bound)
    ba = truncated_multiply(b, a, bound)
    assert rel_diff(ab.coeffs, ba.coeffs) < 1e-14
