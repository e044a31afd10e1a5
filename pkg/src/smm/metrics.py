"""Invariant Riemannian metrics on the isospectral, quadratic and Cholesky models.

Tangent vectors at the base point are skew matrices in the complement
``m`` of the isotropy algebra (zero diagonal blocks).  The weighted inner
products on ``m`` and their push-forwards into the embedded tangent spaces
agree with the Euclidean trace inner product of the ambient matrix space.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, ShapeMismatch
from .flag import FlagSignature, block_diagonal, flag_extract
from .linalg import is_symmetric


@dataclass(frozen=True, eq=False)
class FlagMTangent:
    """Skew tangent with blocks ``B_ij`` (``n_i x n_j``) for ``i < j``.

    Lower blocks are ``-B_ij^T``; diagonal blocks vanish.  Indices are 0-based.
    """

    sig: FlagSignature
    blocks: dict

    def __post_init__(self):
        mult = self.sig.multiplicities
        blocks = {}
        for i, j in itertools.combinations(range(len(mult)), 2):
            Bij = np.asarray(self.blocks.get((i, j), np.zeros((mult[i], mult[j]))), dtype=float)
            if Bij.shape != (mult[i], mult[j]):
                raise ShapeMismatch(f"block {(i, j)} has shape {Bij.shape}")
            blocks[(i, j)] = Bij
        extra = set(self.blocks) - set(blocks)
        if extra:
            raise ShapeMismatch(f"unexpected blocks {sorted(extra)}")
        object.__setattr__(self, "blocks", blocks)

    def assemble(self):
        n = self.sig.n
        sl = self.sig.block_slices()
        B = np.zeros((n, n))
        for (i, j), Bij in self.blocks.items():
            B[sl[i], sl[j]] = Bij
            B[sl[j], sl[i]] = -Bij.T
        return B

    @classmethod
    def from_matrix(cls, sig, B):
        """Upper off-diagonal blocks of a skew matrix."""
        B = np.asarray(B, dtype=float)
        if B.shape != (sig.n, sig.n):
            raise ShapeMismatch(f"expected {sig.n}x{sig.n}, got {B.shape}")
        sl = sig.block_slices()
        return cls(
            sig,
            {(i, j): B[sl[i], sl[j]].copy() for i, j in itertools.combinations(range(sig.p + 1), 2)},
        )


@dataclass(frozen=True, eq=False)
class StiefelMTangent:
    """Tangent ``[[B1, -B2^T], [B2, 0]]`` with ``B1`` skew ``k x k``."""

    B1: np.ndarray
    B2: np.ndarray

    def __post_init__(self):
        B1 = np.asarray(self.B1, dtype=float)
        B2 = np.asarray(self.B2, dtype=float)
        if B1.ndim != 2 or B1.shape[0] != B1.shape[1]:
            raise ShapeMismatch(f"B1 must be square, got {B1.shape}")
        if B2.ndim != 2 or B2.shape[1] != B1.shape[0]:
            raise ShapeMismatch(f"B2 must have {B1.shape[0]} columns, got {B2.shape}")
        if np.linalg.norm(B1 + B1.T) > 1e-12 * max(1.0, np.linalg.norm(B1)):
            raise ShapeMismatch("B1 is not skew-symmetric")
        object.__setattr__(self, "B1", B1)
        object.__setattr__(self, "B2", B2)

    @property
    def k(self):
        return self.B1.shape[0]

    @property
    def n(self):
        return self.B1.shape[0] + self.B2.shape[0]

    def assemble(self):
        k = self.k
        B = np.zeros((self.n, self.n))
        B[:k, :k] = self.B1
        B[k:, :k] = self.B2
        B[:k, k:] = -self.B2.T
        return B


def random_flag_tangent(sig, rng):
    mult = sig.multiplicities
    return FlagMTangent(
        sig,
        {(i, j): rng.standard_normal((mult[i], mult[j]))
         for i, j in itertools.combinations(range(len(mult)), 2)},
    )


def random_stiefel_tangent(n, k, rng):
    G = rng.standard_normal((k, k))
    return StiefelMTangent(G - G.T, rng.standard_normal((n - k, k)))


def _check_flag_pair(B, C, params):
    if B.sig != C.sig:
        raise ShapeMismatch(f"signatures differ: {B.sig} vs {C.sig}")
    if len(params) != B.sig.p + 1:
        raise LengthMismatch(f"need {B.sig.p + 1} parameters, got {len(params)}")


def flag_m_metric(B, C, params):
    """``2 sum_{i<j} (a_i - a_j)^2 tr(B_ij^T C_ij)``."""
    _check_flag_pair(B, C, params)
    a = list(params)
    return float(2.0 * sum(
        (a[i] - a[j]) ** 2 * np.sum(B.blocks[(i, j)] * C.blocks[(i, j)])
        for (i, j) in B.blocks
    ))


def stiefel_m_metric(B, C, R):
    """``tr(R^T (B1^T C1 + B2^T C2) R)`` with ``R`` the Cholesky factor of the parameter."""
    R = np.asarray(R, dtype=float)
    if B.B1.shape != C.B1.shape or B.B2.shape != C.B2.shape:
        raise ShapeMismatch("tangents have different shapes")
    if R.shape != B.B1.shape:
        raise ShapeMismatch(f"R is {R.shape}, expected {B.B1.shape}")
    return float(np.trace(R.T @ (B.B1.T @ C.B1 + B.B2.T @ C.B2) @ R))


def tangent_push_flag(B, params):
    """Differential of ``Q -> Q Lambda_a Q^T`` at the identity: ``B Lambda + Lambda B^T``.

    Block ``(i, j)`` of the result is ``(a_j - a_i) B_ij``.  For ``p = 1``
    it is ``(b - a)`` times ``[[0, B0], [B0^T, 0]]``.
    """
    if len(params) != B.sig.p + 1:
        raise ShapeMismatch(f"need {B.sig.p + 1} parameters, got {len(params)}")
    lam = block_diagonal(B.sig, params)
    M = B.assemble()
    return M * lam[None, :] + lam[:, None] * M.T


def tangent_push_stiefel(B, R):
    """Differential of ``Q -> Q [R; 0]`` at the identity: ``[B1 R; B2 R]``."""
    R = np.asarray(R, dtype=float)
    if R.shape != (B.k, B.k):
        raise ShapeMismatch(f"R is {R.shape}, expected {(B.k, B.k)}")
    base = np.zeros((B.n, B.k))
    base[: B.k] = R
    return B.assemble() @ base


def embedded_metric(U, V, kind="symmetric"):
    """Euclidean inner product: ``tr(UV)`` on symmetric, ``tr(U^T V)`` on rectangular matrices."""
    U = np.asarray(U, dtype=float)
    V = np.asarray(V, dtype=float)
    if U.shape != V.shape:
        raise ShapeMismatch(f"{U.shape} vs {V.shape}")
    if kind == "symmetric":
        if not (is_symmetric(U) and is_symmetric(V)):
            raise ShapeMismatch("symmetric kind needs symmetric inputs")
        return float(np.trace(U @ V))
    if kind == "rectangular":
        return float(np.trace(U.T @ V))
    raise ValueError(f"unknown kind {kind!r}")


def _eigenframe(Xp):
    flag = flag_extract(Xp)
    return flag.rotation, Xp.sig.block_slices()


def tangent_project_flag(Z, Xp):
    """Orthogonal projection of a symmetric ``Z`` onto the tangent space at ``Xp``.

    In the eigenbasis of ``Xp`` the diagonal blocks of ``Z`` are removed.
    """
    Z = np.asarray(Z, dtype=float)
    if Z.shape != Xp.X.shape:
        raise ShapeMismatch(f"Z is {Z.shape}, point is {Xp.X.shape}")
    Q, sl = _eigenframe(Xp)
    W = Q.T @ Z @ Q
    for s in sl:
        W[s, s] = 0.0
    T = Q @ W @ Q.T
    return 0.5 * (T + T.T)


def tangent_pull_flag(Z, Xp):
    """The ``m``-tangent at the base point whose push-forward, conjugated by the
    eigenframe of ``Xp``, is the tangent part of ``Z``."""
    Q, sl = _eigenframe(Xp)
    W = Q.T @ np.asarray(Z, dtype=float) @ Q
    a = list(Xp.params)
    return FlagMTangent(
        Xp.sig,
        {(i, j): W[sl[i], sl[j]] / (a[j] - a[i])
         for i, j in itertools.combinations(range(len(a)), 2)},
    )
