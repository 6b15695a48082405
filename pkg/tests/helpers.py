"""Shared oracles and property bundles.

The brute-force routines here deliberately avoid the package's storage scheme
and algorithms so they stay independent of the code they check.  The
``run_*_properties`` bundles are reused by the timed acceptance test.
"""

import numpy as np

from gpwaves.series import TaylorPoly2, differentiate, homogeneous_part, truncated_multiply
from gpwaves.specialfn import airy_taylor, bessel_taylor


def naive_multiply(a: TaylorPoly2, b: TaylorPoly2, bound: int) -> TaylorPoly2:
    """Dict-based full product, then truncation; independent oracle."""
    terms = {}
    for da in range(a.degree + 1):
        for iya in range(da + 1):
            ca = a[da - iya, iya]
            if ca == 0:
                continue
            for db in range(b.degree + 1):
                for iyb in range(db + 1):
                    cb = b[db - iyb, iyb]
                    if cb == 0:
                        continue
                    key = (da - iya + db - iyb, iya + iyb)
                    terms[key] = terms.get(key, 0j) + ca * cb
    out = TaylorPoly2.zero(a.center, bound)
    for (ix, iy), c in terms.items():
        if ix + iy <= bound:
            out[ix, iy] = c
    return out


def random_poly(rng, center, degree, complex_coeffs=True) -> TaylorPoly2:
    n = (degree + 1) * (degree + 2) // 2
    c = rng.normal(size=n)
    if complex_coeffs:
        c = c + 1j * rng.normal(size=n)
    return TaylorPoly2(center, degree, c)


def rel_diff(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(float(np.max(np.abs(a))), float(np.max(np.abs(b))), 1e-300)
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) / scale


def uni_multiply(a, b, bound):
    """Plain convolution of univariate coefficient arrays, truncated."""
    out = np.zeros(bound + 1, dtype=complex)
    for i, ca in enumerate(np.asarray(a)):
        for j, cb in enumerate(np.asarray(b)):
            if i + j <= bound:
                out[i + j] += ca * cb
    return out


def run_multiplication_properties(seed=0, trials=30):
    """Commutativity, associativity and naive-product equivalence to 1e-14."""
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        da, db = rng.integers(0, 7), rng.integers(0, 7)
        bound = int(rng.integers(0, da + db + 1))
        center = (rng.normal(), rng.normal())
        a = random_poly(rng, center, int(da))
        b = random_poly(rng, center, int(db))
        ab = truncated_multiply(a, b, bound)
        ba = truncated_multiply(b, a, bound)
        assert rel_diff(ab.coeffs, ba.coeffs) < 1e-14
        assert rel_diff(ab.coeffs, naive_multiply(a, b, bound).coeffs) < 1e-14
        c = random_poly(rng, center, int(rng.integers(0, 5)))
        ab_c = truncated_multiply(ab, c, bound)
        a_bc = truncated_multiply(a, truncated_multiply(b, c, bound), bound)
        assert rel_diff(ab_c.coeffs, a_bc.coeffs) < 1e-14


def run_derivative_properties(seed=1, trials=30):
    """Mixed partials commute coefficientwise to 1e-14."""
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        a = random_poly(rng, (rng.normal(), rng.normal()), int(rng.integers(2, 9)))
        dxy = differentiate(differentiate(a, "x"), "y")
        dyx = differentiate(differentiate(a, "y"), "x")
        assert rel_diff(dxy.coeffs, dyx.coeffs) < 1e-14


def run_homogeneous_roundtrip(seed=2, trials=20):
    """Reassembling all homogeneous parts reproduces the coefficients exactly."""
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        a = random_poly(rng, (0.0, 0.0), int(rng.integers(0, 9)))
        rebuilt = TaylorPoly2.zero(a.center, a.degree)
        for ell in range(a.degree + 1):
            part = homogeneous_part(a, ell)
            for ix in range(ell + 1):
                rebuilt[ix, ell - ix] = part[ix]
        assert np.array_equal(rebuilt.coeffs, a.coeffs)


def _uni_ode_residual_airy(series):
    """Coefficients of y'' - (c + t) y for a series about c."""
    a = series.coeffs
    c = series.center
    n = series.degree
    res = np.zeros(n - 1, dtype=complex)
    for k in range(n - 1):
        res[k] = (k + 2) * (k + 1) * a[k + 2] - c * a[k] - (a[k - 1] if k >= 1 else 0.0)
    return res


def _uni_ode_residual_bessel(series, nu):
    """Coefficients of x^2 y'' + x y' + (x^2 - nu^2) y about x = c + t."""
    a = series.coeffs
    c = series.center
    n = series.degree
    ypp = np.array([(k + 2) * (k + 1) * a[k + 2] for k in range(n - 1)])
    yp = np.array([(k + 1) * a[k + 1] for k in range(n)])
    x2 = np.array([c * c, 2 * c, 1.0])
    x1 = np.array([c, 1.0])
    x2nu = np.array([c * c - nu * nu, 2 * c, 1.0])
    m = n - 1
    total = uni_multiply(x2, ypp, m) + uni_multiply(x1, yp, m) + uni_multiply(x2nu, a, m)
    return total


def run_ode_residual_properties(seed=3, centers=6):
    """Generated series satisfy their defining ODEs through degree 10 to 1e-11."""
    rng = np.random.default_rng(seed)
    for _ in range(centers):
        c = rng.uniform(-4.0, 4.0)
        s = airy_taylor(c, 12)
        res = _uni_ode_residual_airy(s)[:11]
        assert np.max(np.abs(res)) <= 1e-11 * max(np.max(np.abs(s.coeffs)), 1e-30)
    for nu in (0, 1):
        for _ in range(centers):
            c = rng.uniform(0.5, 6.0)
            s = bessel_taylor(nu, c, 12)
            res = _uni_ode_residual_bessel(s, nu)[:11]
            assert np.max(np.abs(res)) <= 1e-11 * max(np.max(np.abs(s.coeffs)), 1e-30)


def admissible_centers(case, rng, num, min_s=0.1):
    """Random centers where |s(center)| stays away from the cut-off."""
    x0, x1, y0, y1 = case.domain
    out = []
    while len(out) < num:
        c = (float(rng.uniform(x0, x1)), float(rng.uniform(y0, y1)))
        if abs(case.operator.s.value_at(c)) >= min_s:
            out.append(c)
    return out
