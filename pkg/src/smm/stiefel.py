"""Cholesky models of the Stiefel manifold and the Cartan manifold of SPD matrices.

``V_A(k, n)`` is the set of ``n x k`` matrices ``Y`` with ``Y^T Y = A`` for a
fixed SPD matrix ``A``; ``A = I`` is the usual orthonormal-frame model.  The
parameter ``A`` moves along Cartan geodesics ``A #_t B``.
"""

import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import null_space

from .errors import (
    DimensionMismatch,
    IllConditioned,
    InvalidDimensions,
    MembershipFailed,
    NonSymmetricTangent,
    NotRotation,
    ShapeMismatch,
)
from .linalg import (
    MEMB_TOL,
    ORTHO_TOL,
    check_spd,
    cholesky_upper,
    is_symmetric,
    spd_power,
    symmetrize,
)
from .report import MembershipReport

COND_WARN = 1e8
COND_MAX = 1e12


@dataclass(frozen=True, eq=False)
class CholeskyStiefelPoint:
    Y: np.ndarray
    A: np.ndarray

    @property
    def n(self):
        return self.Y.shape[0]

    @property
    def k(self):
        return self.Y.shape[1]


class Factors(NamedTuple):
    """``Y = Q [R; 0]`` with ``Q`` orthogonal and ``R`` upper triangular."""

    Q: np.ndarray
    R: np.ndarray


def _guard_condition(*mats):
    for M in mats:
        w = np.linalg.eigvalsh(M)
        cond = w[-1] / w[0]
        if cond > COND_MAX:
            raise IllConditioned(f"condition number {cond:.3e} exceeds {COND_MAX:.0e}")
        if cond > COND_WARN:
            warnings.warn(
                f"condition number {cond:.3e}: fractional powers lose accuracy",
                RuntimeWarning,
                stacklevel=3,
            )


def st_construct(Q, A):
    """``Q [R; 0]`` with ``R`` the upper Cholesky factor of ``A``.

    ``Q`` is either ``n x n`` orthogonal or ``n x k`` with orthonormal
    columns; only its first ``k`` columns are used.
    """
    A = check_spd(A)
    k = A.shape[0]
    Q = np.asarray(Q, dtype=float)
    if Q.ndim != 2 or Q.shape[1] < k:
        raise InvalidDimensions(f"need at least {k} columns, got shape {Q.shape}")
    U = Q[:, :k]
    if np.linalg.norm(U.T @ U - np.eye(k)) > ORTHO_TOL:
        raise NotRotation("columns are not orthonormal")
    R = cholesky_upper(A)
    return CholeskyStiefelPoint(U @ R, A)


def st_membership(Y, A, tol=MEMB_TOL):
    Y = np.asarray(Y, dtype=float)
    A = np.asarray(A, dtype=float)
    if Y.ndim != 2 or A.shape != (Y.shape[1], Y.shape[1]):
        raise ShapeMismatch(f"Y {Y.shape} and A {A.shape} do not match")
    residuals = {"gram": float(np.linalg.norm(Y.T @ Y - A))}
    return MembershipReport(residuals, {"gram": tol * (1.0 + np.linalg.norm(A))})


def st_factors(P):
    """Orthogonal ``Q`` (``n x n``) and Cholesky factor ``R`` with ``Y = Q [R; 0]``."""
    R = cholesky_upper(P.A)
    U = np.linalg.solve(R.T, P.Y.T).T  # Y R^{-1}, orthonormal columns
    Q = np.hstack([U, null_space(U.T)])
    if P.n > P.k and np.linalg.det(Q) < 0:
        Q[:, -1] *= -1
    return Factors(Q, R)


def geometric_mean_t(A, B, t=0.5):
    """Weighted geometric mean ``A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}``.

    ``t = 1/2`` is the matrix geometric mean; ``t`` outside ``[0, 1]``
    extrapolates the geodesic and triggers a warning.
    """
    A = check_spd(A, "A")
    B = check_spd(B, "B")
    if A.shape != B.shape:
        raise DimensionMismatch(f"A is {A.shape}, B is {B.shape}")
    if not 0.0 <= t <= 1.0:
        warnings.warn(f"t = {t!r} extrapolates beyond [0, 1]", RuntimeWarning, stacklevel=2)
    _guard_condition(A, B)
    sqrtA = spd_power(A, 0.5)
    isqrtA = spd_power(A, -0.5)
    M = symmetrize(isqrtA @ B @ isqrtA)
    return symmetrize(sqrtA @ spd_power(M, t) @ sqrtA)


def cartan_geodesic(A, B, t):
    """Point at time ``t`` on the Cartan geodesic from ``A`` to ``B``."""
    return geometric_mean_t(A, B, t)


def cartan_metric(A, X, Y):
    """``tr(A^{-1} X A^{-1} Y)`` for symmetric tangents ``X, Y`` at ``A``."""
    A = check_spd(A)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    for name, T in (("X", X), ("Y", Y)):
        if T.shape != A.shape:
            raise DimensionMismatch(f"{name} is {T.shape}, A is {A.shape}")
        if not is_symmetric(T):
            raise NonSymmetricTangent(f"{name} is not symmetric")
    return float(np.trace(np.linalg.solve(A, X) @ np.linalg.solve(A, Y)))


def homotopy_factor(A, B, t):
    """Right factor ``A^{-1/2} (A^{-1/2} B A^{-1/2})^{t/2} A^{1/2}`` of the conversion."""
    A = check_spd(A, "A")
    B = check_spd(B, "B")
    if A.shape != B.shape:
        raise DimensionMismatch(f"A is {A.shape}, B is {B.shape}")
    _guard_condition(A, B)
    isqrtA = spd_power(A, -0.5)
    M = symmetrize(isqrtA @ B @ isqrtA)
    return isqrtA @ spd_power(M, t / 2) @ spd_power(A, 0.5)


def st_convert_homotopy(P, B, t=1.0, tol=MEMB_TOL):
    """Move ``Y in V_A`` to ``V_{A #_t B}``; ``t = 1`` converts to ``V_B``."""
    report = st_membership(P.Y, P.A, tol)
    if not report:
        raise MembershipFailed(f"failed checks: {report.failures()}")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t = {t!r} outside [0, 1]")
    F = homotopy_factor(P.A, B, t)
    return CholeskyStiefelPoint(P.Y @ F, geometric_mean_t(P.A, B, t))
