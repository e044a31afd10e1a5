"""Dense linear-algebra primitives with explicit tolerance contracts.

Everything else in the package routes its eigendecompositions, QR and
Cholesky factorizations and SPD fractional powers through this module so
that tolerances and sign conventions live in one place.
"""

import numpy as np

from .errors import (
    MultiplicityMismatch,
    NoConvergence,
    NonSymmetric,
    NotPositiveDefinite,
    NotRotation,
    RankDeficient,
    UnresolvedCluster,
)

# Relative tolerances, sized for binary64 backward error at n <= 200.
SYM_TOL = 1e-12
ORTHO_TOL = 1e-10
EIGH_TOL = 1e-10
CHOL_TOL = 1e-12
RANK_TOL = 1e-10
CLAMP_EPS = 1e-14
SPD_TOL = 1e-14
# Minimum separation between distinct model parameters.
PARAM_TOL = 1e-12
# Default relative tolerance of the membership validators.
MEMB_TOL = 1e-10

# Gaussian source behind haar_rotation; written into model files.
PRNG_ID = "numpy-pcg64-standard_normal-v1"


def as_square(S, name="matrix"):
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise NonSymmetric(f"{name} must be square, got shape {S.shape}")
    if not np.all(np.isfinite(S)):
        raise NonSymmetric(f"{name} has non-finite entries")
    return S


def symmetrize(M):
    return 0.5 * (M + M.T)


def is_symmetric(S, tol=SYM_TOL):
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        return False
    return np.linalg.norm(S - S.T) <= tol * max(np.linalg.norm(S), 1e-300)


def sym_eigh(S):
    """Eigendecomposition of a symmetric matrix.

    Parameters
    ----------
    S : ndarray, shape (n, n)
        Symmetric matrix; ``||S - S^T||_F <= SYM_TOL * ||S||_F``.

    Returns
    -------
    w : ndarray, shape (n,)
        Eigenvalues in ascending order.
    Q : ndarray, shape (n, n)
        Orthogonal matrix of eigenvectors, ``S = Q diag(w) Q^T``.
    """
    S = as_square(S)
    if S.size and not is_symmetric(S):
        raise NonSymmetric(
            f"asymmetry {np.linalg.norm(S - S.T):.3e} exceeds tolerance"
        )
    try:
        w, Q = np.linalg.eigh(symmetrize(S))
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return w, Q


def qr_positive(M):
    """Thin QR factorization with a positive diagonal in ``R``.

    Column signs of ``Q`` are flipped so that ``R[i, i] > 0``; for a full
    column rank input the pair is then unique.

    Parameters
    ----------
    M : ndarray, shape (n, k), n >= k

    Returns
    -------
    Q : ndarray, shape (n, k)
    R : ndarray, shape (k, k)
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2:
        raise RankDeficient(f"expected a 2-D array, got shape {M.shape}")
    n, k = M.shape
    if n < k:
        raise RankDeficient(f"{n}x{k} matrix cannot have full column rank")
    sv = np.linalg.svd(M, compute_uv=False)
    if k == 0 or sv[-1] <= RANK_TOL * sv[0] or sv[0] == 0.0:
        raise RankDeficient("matrix is numerically rank deficient")
    Q, R = np.linalg.qr(M)
    signs = np.where(np.diag(R) < 0, -1.0, 1.0)
    return Q * signs, R * signs[:, None]


def check_spd(A, name="A"):
    """Return a symmetrized copy of ``A`` after checking positive definiteness."""
    A = as_square(A, name)
    if not is_symmetric(A):
        raise NotPositiveDefinite(f"{name} is not symmetric")
    A = symmetrize(A)
    w = np.linalg.eigvalsh(A)
    if w[0] <= SPD_TOL * max(abs(w[-1]), 1.0) or w[0] <= 0:
        raise NotPositiveDefinite(
            f"{name} has smallest eigenvalue {w[0]:.3e}"
        )
    return A


def check_rotation(Q, tol=ORTHO_TOL, proper=True):
    Q = np.asarray(Q, dtype=float)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
        raise NotRotation(f"rotation must be square, got shape {Q.shape}")
    n = Q.shape[0]
    if np.linalg.norm(Q.T @ Q - np.eye(n)) > tol:
        raise NotRotation("matrix is not orthogonal")
    if proper and np.linalg.det(Q) < 0:
        raise NotRotation("orthogonal matrix has determinant -1")
    return Q


def cholesky_upper(A):
    """Upper-triangular Cholesky factor ``R`` with ``A = R^T R``."""
    A = check_spd(A)
    try:
        L = np.linalg.cholesky(A)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    return np.triu(L.T)


def spd_power(A, t):
    """Fractional power ``A^t`` of an SPD matrix via its eigendecomposition.

    Eigenvalues are clamped below at ``CLAMP_EPS * max(eigenvalue)`` before
    powering so rounding cannot push them through zero.
    """
    A = check_spd(A)
    w, Q = sym_eigh(A)
    w = np.maximum(w, CLAMP_EPS * w[-1])
    return symmetrize((Q * w**t) @ Q.T)


def haar_rotation(n, seed):
    """Haar-distributed sample from SO(n), deterministic in ``seed``.

    A standard Gaussian ``n x n`` matrix drawn from a PCG64 generator is
    orthogonalized with :func:`qr_positive`; the last column is negated if
    the determinant is negative.
    """
    if n < 1:
        raise ValueError("n must be positive")
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    rng = np.random.Generator(np.random.PCG64(seed))
    G = rng.standard_normal((n, n))
    Q, _ = qr_positive(G)
    if np.linalg.det(Q) < 0:
        Q[:, -1] = -Q[:, -1]
    return Q


def cluster_eigenvalues(values, targets, tol, expected=None):
    """Assign each value to its nearest target.

    Parameters
    ----------
    values : array_like
        Computed eigenvalues.
    targets : array_like
        Pairwise distinct reference values.
    tol : float
        Largest accepted distance between a value and its target.
    expected : array_like of int, optional
        Required count of values per target.

    Returns
    -------
    labels : ndarray of int
        ``labels[i]`` is the index into ``targets`` for ``values[i]``.
    """
    values = np.asarray(values, dtype=float).ravel()
    targets = np.asarray(targets, dtype=float).ravel()
    if len(set(targets.tolist())) != len(targets):
        raise ValueError("targets must be pairwise distinct")
    dist = np.abs(values[:, None] - targets[None, :])
    labels = np.argmin(dist, axis=1)
    gap = dist[np.arange(len(values)), labels]
    bad = np.flatnonzero(gap > tol)
    if bad.size:
        i = bad[0]
        raise UnresolvedCluster(
            f"value {values[i]!r} is {gap[i]:.3e} from the nearest target"
        )
    if expected is not None:
        counts = np.bincount(labels, minlength=len(targets))
        if not np.array_equal(counts, np.asarray(expected)):
            raise MultiplicityMismatch(
                f"multiplicities {counts.tolist()} != {list(expected)}"
            )
    return labels
