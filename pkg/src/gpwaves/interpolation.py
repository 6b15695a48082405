"""Taylor-coefficient matrices and local matching of PDE solutions.

For a family of functions f_1..f_p about a common center, the matrix M_n
holds in column k the normalized Taylor coefficients of f_k through total
order n: entry (row, k) is  d_x^jx d_y^jy f_k (center) / (jx! jy!), with the
row of (jx, jy) at position (jx+jy)(jx+jy+1)/2 + jy (zero-based).  A smooth
function u is matched by the least-squares solution of  M X = U, where U is
the vector of u's normalized Taylor coefficients in the same row order; when
u solves the PDE the residual vanishes up to conditioning.

Rank facts used as diagnostics: with p = 2n+1 distinct angles and a nonzero
zeroth-order coefficient at the center, both the constructed-wave matrix and
the plane-wave reference matrix have numerical rank 2n+1, and the former
equals a lower-unitriangular multiple of the latter (checked row by row by
:func:`unitriangular_relation_check`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .construct import AmplitudeGPW, Direction, PhaseGPW
from .errors import GPWError
from .series import exp_jet, exp_of_poly, resized, tri_len, truncated_multiply


@dataclass(frozen=True)
class TaylorMatrix:
    """(n+1)(n+2)/2 x p matrix of normalized Taylor coefficients."""

    n: int
    entries: np.ndarray

    @property
    def p(self) -> int:
        return int(self.entries.shape[1])

    def __post_init__(self):
        rows = tri_len(self.n)
        if self.entries.ndim != 2 or self.entries.shape[0] != rows:
            raise GPWError(f"matrix must have {rows} rows for order {self.n}")


def gpw_taylor_column(g, n: int) -> np.ndarray:
    """Normalized Taylor coefficients of one constructed wave through order n.

    Amplitude waves multiply the amplitude polynomial by the exponential jet
    of the direction; phase waves exponentiate the phase jet.  Valid for
    n <= q+1 (beyond that the polynomial no longer determines the jet).
    """
    if n < 0:
        raise GPWError("n must be nonnegative")
    if n > g.q + 1:
        raise GPWError(f"order {n} out of range: need n <= q+1 = {g.q + 1}")
    if isinstance(g, AmplitudeGPW):
        ej = exp_jet(g.direction.lambda10, g.direction.lambda01, g.center, n)
        return truncated_multiply(g.Q, ej, n).coeffs.copy()
    if isinstance(g, PhaseGPW):
        return exp_of_poly(resized(g.P, n) if g.P.degree > n else g.P, n).coeffs.copy()
    raise GPWError("expected an AmplitudeGPW or PhaseGPW")


def classical_pw_column(d: Direction, center, n: int) -> np.ndarray:
    """Column of a pure exponential exp(d . r): coefficients l10^jx l01^jy/(jx! jy!)."""
    return exp_jet(d.lambda10, d.lambda01, center, n).coeffs.copy()


def build_matrix(columns, n: int) -> TaylorMatrix:
    """Stack per-member coefficient columns into a TaylorMatrix."""
    rows = tri_len(n)
    cols = []
    for c in columns:
        c = np.asarray(c, dtype=np.complex128)
        if c.shape != (rows,):
            raise GPWError(f"ragged input: every column must have length {rows}")
        cols.append(c)
    if not cols:
        raise GPWError("at least one column is required")
    return TaylorMatrix(n, np.stack(cols, axis=1))


def numerical_rank(M: TaylorMatrix, tol: float = 1e-10) -> int:
    """Count of singular values above tol times the largest."""
    if tol <= 0:
        raise GPWError("tol must be positive")
    sv = np.linalg.svd(M.entries, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


def condition_number(M: TaylorMatrix) -> float:
    """Ratio of the largest to the smallest nonzero singular value."""
    sv = np.linalg.svd(M.entries, compute_uv=False)
    nz = sv[sv > 0.0]
    if nz.size == 0:
        return float("inf")
    return float(nz[0] / nz[-1])


def unitriangular_relation_check(MG: TaylorMatrix, MC: TaylorMatrix) -> float:
    """Relative residual of the best lower-unitriangular relation MG = L MC.

    Row i of MG is regressed on rows 0..i of MC with the diagonal coefficient
    fixed at one, in increasing row order; returns ||MG - L MC||_F / ||MG||_F.
    Rank-deficient leading rows only inflate the returned diagnostic, they do
    not raise.
    """
    if MG.entries.shape != MC.entries.shape:
        raise GPWError("matrices must have the same shape")
    G = MG.entries
    C = MC.entries
    total = 0.0
    for i in range(G.shape[0]):
        target = G[i] - C[i]
        if i == 0:
            resid = target
        else:
            basis = C[:i].T  # p x i
            coef, *_ = np.linalg.lstsq(basis, target, rcond=None)
            resid = target - basis @ coef
        total += float(np.sum(np.abs(resid) ** 2))
    denom = float(np.linalg.norm(G))
    if denom == 0.0:
        return 0.0
    return float(np.sqrt(total)) / denom


@dataclass(frozen=True)
class MatchResult:
    """Least-squares Taylor match of a target jet against a family matrix."""

    x: np.ndarray
    residual: float
    ok: bool
    rank: int
    cond: float
    message: str = ""


def match_solution(MG: TaylorMatrix, U: np.ndarray, tol: float = 1e-8) -> MatchResult:
    """Minimize ||MG x - U|| by SVD-based least squares.

    A PDE-solution jet lies in the family's range analytically, so the
    relative residual should sit at the conditioning floor; a residual above
    ``tol`` is reported (not raised) as a failed match.
    """
    U = np.asarray(U, dtype=np.complex128)
    rows = MG.entries.shape[0]
    if U.shape != (rows,):
        raise GPWError(f"right-hand side must have length {rows}")
    x, _, rank, sv = np.linalg.lstsq(MG.entries, U, rcond=None)
    unorm = float(np.linalg.norm(U))
    if unorm == 0.0:
        residual = 0.0
    else:
        residual = float(np.linalg.norm(MG.entries @ x - U)) / unorm
    ok = residual <= tol
    message = "" if ok else "matching failed: U outside range or ill-conditioning"
    cond = float(sv[0] / sv[-1]) if sv.size and sv[-1] > 0 else float("inf")
    return MatchResult(x=x, residual=residual, ok=ok, rank=int(rank), cond=cond, message=message)
