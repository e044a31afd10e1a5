"""Quadratic models of the Grassmannian.

A point of ``Gr_{a,b}(k, n)`` is a symmetric matrix with eigenvalue ``a`` of
multiplicity ``k`` and eigenvalue ``b`` of multiplicity ``n - k``.  The
projection model is ``(a, b) = (1, 0)`` and the involution model, the only
perfectly conditioned one up to scale, is ``(1, -1)``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateParams,
    InvalidDimensions,
    MembershipFailed,
    NotRotation,
    ShapeMismatch,
    ZeroVector,
)
from .flag import FlagSignature, IsospectralParams, IsospectralPoint
from .linalg import (
    MEMB_TOL,
    PARAM_TOL,
    check_rotation,
    cluster_eigenvalues,
    qr_positive,
    sym_eigh,
    symmetrize,
)
from .report import MembershipReport


@dataclass(frozen=True)
class QuadraticParams:
    a: float
    b: float

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        if not abs(self.a - self.b) > PARAM_TOL:
            raise DegenerateParams(f"a = {self.a!r} and b = {self.b!r} coincide")

    def __iter__(self):
        return iter((self.a, self.b))


PROJECTION = QuadraticParams(1.0, 0.0)
INVOLUTION = QuadraticParams(1.0, -1.0)


@dataclass(frozen=True, eq=False)
class GrassmannPoint:
    X: np.ndarray
    params: QuadraticParams
    k: int

    @property
    def n(self):
        return self.X.shape[0]


def _check_k(k, n):
    if not 0 < k < n:
        raise InvalidDimensions(f"need 0 < k < n, got k={k}, n={n}")


def _as_params(params):
    if isinstance(params, QuadraticParams):
        return params
    return QuadraticParams(*params)


def gr_scale(params, n):
    return max(1.0, max(abs(params.a), abs(params.b)) ** 2 * n)


def gr_construct(Q, k, params):
    """``Q diag(a I_k, b I_{n-k}) Q^T`` for an orthogonal ``Q``."""
    params = _as_params(params)
    Q = check_rotation(Q, proper=False)
    n = Q.shape[0]
    _check_k(k, n)
    d = np.r_[np.full(k, params.a), np.full(n - k, params.b)]
    return GrassmannPoint(symmetrize((Q * d) @ Q.T), params, k)


def gr_from_basis(B, params):
    """Model point of the column span of ``B``: ``a P + b (I - P)``."""
    params = _as_params(params)
    B = np.asarray(B, dtype=float)
    if B.ndim == 1:
        B = B[:, None]
    n, k = B.shape
    _check_k(k, n)
    U, _ = qr_positive(B)
    P = U @ U.T
    X = params.b * np.eye(n) + (params.a - params.b) * P
    return GrassmannPoint(symmetrize(X), params, k)


def gr_membership(X, k, params, tol=MEMB_TOL):
    """Check ``(X - aI)(X - bI) = 0``, ``tr X = ak + b(n-k)`` and symmetry.

    Each residual is compared with ``tol * max(1, max(|a|, |b|)^2 n)``.
    """
    params = _as_params(params)
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ShapeMismatch(f"X must be square, got shape {X.shape}")
    n = X.shape[0]
    _check_k(k, n)
    a, b = params
    eye = np.eye(n)
    bound = tol * gr_scale(params, n)
    residuals = {
        "symmetry": float(np.linalg.norm(X - X.T)),
        "quadratic": float(np.linalg.norm((X - a * eye) @ (X - b * eye))),
        "trace": float(abs(np.trace(X) - (a * k + b * (n - k)))),
    }
    return MembershipReport(residuals, dict.fromkeys(residuals, bound))


def gr_extract(Xp, tol=MEMB_TOL):
    """Orthonormal basis (``n x k``) of the ``a``-eigenspace of a model point."""
    report = gr_membership(Xp.X, Xp.k, Xp.params, tol)
    if not report:
        raise MembershipFailed(f"failed checks: {report.failures()}")
    a, b = Xp.params
    w, Q = sym_eigh(Xp.X)
    ctol = min(1e-6 * max(1.0, abs(a), abs(b)), 0.25 * abs(a - b))
    labels = cluster_eigenvalues(w, [a, b], ctol, expected=[Xp.k, Xp.n - Xp.k])
    return Q[:, labels == 0]


def gr_convert_affine(Xp, target):
    """Change of model ``Gr_{a,b} -> Gr_{c,d}`` by the affine map sending a to c, b to d."""
    target = _as_params(target)
    a, b = Xp.params
    c, d = target
    n = Xp.n
    X = d * np.eye(n) + ((c - d) / (a - b)) * (Xp.X - b * np.eye(n))
    return GrassmannPoint(X, target, Xp.k)


def gr_traceless_params(k, n):
    """Parameters ``(n - k, -k)`` of the traceless quadratic model."""
    _check_k(k, n)
    return QuadraticParams(n - k, -k)


def rp1_embed(x, y, r=1.0, c=1.0, s=0.0):
    """Equivariant-family embedding of the line through ``(x, y)`` into 2x2
    traceless symmetric matrices.

    The closed form is odd in ``(x, y)``, so the spanning vector is first
    normalized to the representative with ``x > 0`` (or ``x == 0, y > 0``);
    ``(x, y)`` and ``(-x, -y)`` then give the same matrix.
    """
    if r <= 0:
        raise ValueError("r must be positive")
    if abs(c * c + s * s - 1.0) > PARAM_TOL * 1e3:
        raise NotRotation(f"c^2 + s^2 = {c * c + s * s!r} != 1")
    norm = np.hypot(x, y)
    if norm == 0:
        raise ZeroVector("(x, y) does not span a line")
    x, y = x / norm, y / norm
    if x < 0 or (x == 0 and y < 0):
        x, y = -x, -y
    u = c * x - s * y
    v = s * x + c * y
    return r * np.array([[u, v], [v, -u]])


def gr_to_isospectral(Xp):
    """The same matrix viewed as a ``p = 1`` isospectral point."""
    sig = FlagSignature(Xp.n, (Xp.k,))
    return IsospectralPoint(Xp.X, sig, IsospectralParams(tuple(Xp.params)))


def gr_from_isospectral(Yp):
    if Yp.sig.p != 1:
        raise InvalidDimensions(f"signature {Yp.sig.k} is not a Grassmannian")
    return GrassmannPoint(Yp.X, QuadraticParams(*Yp.params), Yp.sig.k[0])
