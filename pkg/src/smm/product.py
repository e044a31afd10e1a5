"""Flags as tuples of mutually orthogonal subspaces (product of Grassmannians).

A flag ``W_1 ⊆ ... ⊆ W_p`` corresponds to ``(W_1, W_2 ⊖ W_1, ..., R^n ⊖ W_p)``;
each factor is stored as its orthogonal projector.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import NotAProduct
from .flag import AbstractFlag, FlagSignature
from .linalg import sym_eigh

PRODUCT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class GrassmannProductPoint:
    projectors: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "projectors", tuple(np.asarray(P, dtype=float) for P in self.projectors)
        )

    @property
    def n(self):
        return self.projectors[0].shape[0]

    @property
    def ranks(self):
        return tuple(int(round(np.trace(P))) for P in self.projectors)

    @property
    def signature(self):
        return FlagSignature.from_multiplicities(self.ranks)

    def nested_projectors(self):
        """Projectors onto ``W_1, ..., W_p`` (partial sums)."""
        return list(itertools.accumulate(self.projectors[:-1]))


def product_violations(G, tol=PRODUCT_TOL):
    """Residuals of the product invariants; empty when all hold."""
    Ps = G.projectors
    if len(Ps) < 2 or any(P.ndim != 2 or P.shape != Ps[0].shape or P.shape[0] != P.shape[1] for P in Ps):
        return {"shape": np.inf}
    n = Ps[0].shape[0]
    out = {}
    for i, P in enumerate(Ps):
        sym = np.linalg.norm(P - P.T)
        idem = np.linalg.norm(P @ P - P)
        tr = np.trace(P)
        if sym > tol:
            out[f"symmetry{i}"] = sym
        if idem > tol:
            out[f"idempotence{i}"] = idem
        if abs(tr - round(tr)) > 1e-6 or round(tr) < 1:
            out[f"rank{i}"] = tr
    for i, j in itertools.combinations(range(len(Ps)), 2):
        r = np.linalg.norm(Ps[i] @ Ps[j])
        if r > tol:
            out[f"orthogonality{i}{j}"] = r
    total = np.linalg.norm(sum(Ps) - np.eye(n))
    if total > tol:
        out["partition"] = total
    return out


def flag_to_product(F):
    """Projectors ``Q_i Q_i^T`` onto the blocks of the flag."""
    if not isinstance(F, AbstractFlag):
        F = AbstractFlag(tuple(F))
    return GrassmannProductPoint(tuple(0.5 * (P + P.T) for P in F.projectors()))


def product_to_flag(G, tol=PRODUCT_TOL):
    """Inverse of :func:`flag_to_product`; bases come from each projector's
    unit eigenspace."""
    bad = product_violations(G, tol)
    if bad:
        raise NotAProduct(f"invariants violated: {bad}")
    blocks = []
    for P, r in zip(G.projectors, G.ranks):
        _, V = sym_eigh(0.5 * (P + P.T))
        blocks.append(V[:, -r:])
    if np.linalg.det(np.hstack(blocks)) < 0:
        blocks[-1][:, 0] *= -1
    return AbstractFlag(tuple(blocks))
