"""Isospectral models of flag manifolds.

A flag of signature ``(k_1 < ... < k_p)`` in R^n is represented by the
symmetric matrix ``Q diag(a_1 I_{n_1}, ..., a_{p+1} I_{n_{p+1}}) Q^T`` where
``n_i = k_i - k_{i-1}`` and the ``a_i`` are distinct.  Parameter order is
semantic: ``a_i`` always labels block ``i`` and is never sorted.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from .errors import (
    DegenerateInterpolation,
    DegenerateParams,
    InfeasibleEpsilon,
    InvalidFlag,
    InvalidSignature,
    LengthMismatch,
    MembershipFailed,
    NonIntegralSolution,
    NonPositiveMultiplicity,
    NotGeneric,
    ShapeMismatch,
    SignPatternViolation,
    SingularSystem,
)
from .linalg import (
    MEMB_TOL,
    ORTHO_TOL,
    PARAM_TOL,
    check_rotation,
    cluster_eigenvalues,
    sym_eigh,
    symmetrize,
)
from .report import MembershipReport

INT_TOL = 1e-6
GENERICITY_BUDGET = 2_000_000


@dataclass(frozen=True)
class FlagSignature:
    """Dimensions ``0 < k_1 < ... < k_p < n`` of a flag in R^n."""

    n: int
    k: tuple

    def __post_init__(self):
        k = (self.k,) if np.isscalar(self.k) else tuple(self.k)
        k = tuple(int(v) for v in k)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "n", int(self.n))
        bounds = (0, *k, self.n)
        if not k or any(lo >= hi for lo, hi in zip(bounds, bounds[1:])):
            raise InvalidSignature(
                f"need 0 < k_1 < ... < k_p < n, got k={k}, n={self.n}"
            )

    @classmethod
    def from_multiplicities(cls, mult):
        mult = [int(m) for m in mult]
        if len(mult) < 2 or min(mult) < 1:
            raise InvalidSignature(f"invalid multiplicities {mult}")
        return cls(sum(mult), tuple(itertools.accumulate(mult[:-1])))

    @property
    def p(self):
        return len(self.k)

    @property
    def multiplicities(self):
        bounds = (0, *self.k, self.n)
        return tuple(hi - lo for lo, hi in zip(bounds, bounds[1:]))

    def block_slices(self):
        bounds = (0, *self.k, self.n)
        return [slice(lo, hi) for lo, hi in zip(bounds, bounds[1:])]


@dataclass(frozen=True)
class IsospectralParams:
    """Distinct eigenvalues ``(a_1, ..., a_{p+1})`` attached to the blocks."""

    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in np.ravel(self.values))
        object.__setattr__(self, "values", vals)
        if len(vals) < 2:
            raise LengthMismatch("need at least two parameters")
        if not all(math.isfinite(v) for v in vals):
            raise DegenerateParams("parameters must be finite")
        gaps = [abs(x - y) for x, y in itertools.combinations(vals, 2)]
        if min(gaps) <= PARAM_TOL:
            raise DegenerateParams(f"parameters {vals} are not pairwise distinct")

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __array__(self, dtype=None, copy=None):
        return np.array(self.values, dtype=dtype)


@dataclass(frozen=True, eq=False)
class IsospectralPoint:
    X: np.ndarray
    sig: FlagSignature
    params: IsospectralParams

    @property
    def n(self):
        return self.sig.n


@dataclass(frozen=True, eq=False)
class AbstractFlag:
    """A flag stored as orthonormal bases of its successive orthogonal pieces.

    ``blocks[j]`` spans the orthogonal complement of ``W_j`` in ``W_{j+1}``,
    so ``W_j`` is spanned by the first ``j`` blocks.
    """

    blocks: tuple

    def __post_init__(self):
        blocks = tuple(np.asarray(B, dtype=float) for B in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if len(blocks) < 2 or any(B.ndim != 2 or B.shape[1] < 1 for B in blocks):
            raise InvalidFlag("need at least two non-empty blocks")
        if len({B.shape[0] for B in blocks}) != 1:
            raise InvalidFlag("blocks have different ambient dimensions")
        Q = np.hstack(blocks)
        if Q.shape[0] != Q.shape[1]:
            raise InvalidFlag(f"blocks span {Q.shape[1]} of {Q.shape[0]} dimensions")
        if np.linalg.norm(Q.T @ Q - np.eye(Q.shape[0])) > ORTHO_TOL:
            raise InvalidFlag("concatenated blocks are not orthonormal")

    @property
    def n(self):
        return self.blocks[0].shape[0]

    @property
    def signature(self):
        return FlagSignature.from_multiplicities([B.shape[1] for B in self.blocks])

    @property
    def rotation(self):
        return np.hstack(self.blocks)

    def projectors(self):
        return [B @ B.T for B in self.blocks]

    def nested_bases(self):
        """Bases of ``W_1 ⊆ ... ⊆ W_p``."""
        return [np.hstack(self.blocks[: j + 1]) for j in range(len(self.blocks) - 1)]


def _as_sig(sig, n=None):
    if isinstance(sig, FlagSignature):
        return sig
    return FlagSignature(n, sig)


def _as_params(params):
    if isinstance(params, IsospectralParams):
        return params
    return IsospectralParams(tuple(params))


def _check_lengths(sig, params):
    if len(params) != sig.p + 1:
        raise LengthMismatch(
            f"signature has {sig.p + 1} blocks but {len(params)} parameters"
        )


def signature_multiplicities(sig):
    return _as_sig(sig).multiplicities


def block_diagonal(sig, params):
    """Diagonal of ``Lambda_a``: ``a_j`` repeated ``n_j`` times."""
    return np.repeat(np.asarray(params, dtype=float), sig.multiplicities)


def flag_construct(Q, sig, params):
    """``Q Lambda_a Q^T`` for an orthogonal ``Q``."""
    params = _as_params(params)
    Q = check_rotation(Q, proper=False)
    sig = _as_sig(sig, Q.shape[0])
    _check_lengths(sig, params)
    if Q.shape[0] != sig.n:
        raise ShapeMismatch(f"rotation is {Q.shape[0]}x{Q.shape[0]}, n = {sig.n}")
    d = block_diagonal(sig, params)
    return IsospectralPoint(symmetrize((Q * d) @ Q.T), sig, params)


def flag_scale(params, n):
    p = len(params) - 1
    return max(1.0, n * max(abs(a) for a in params) ** (p + 1))


def trace_powers(X, p):
    """``[tr X, tr X^2, ..., tr X^p]`` by repeated multiplication."""
    out = []
    P = np.eye(X.shape[0])
    for _ in range(p):
        P = P @ X
        out.append(float(np.trace(P)))
    return out


def _product_residual(X, params):
    n = X.shape[0]
    P = np.eye(n)
    for a in params:
        P = P @ (X - a * np.eye(n))
    return float(np.linalg.norm(P))


def _flag_inputs(X, sig, params):
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ShapeMismatch(f"X must be square, got shape {X.shape}")
    sig = _as_sig(sig, X.shape[0])
    params = _as_params(params)
    _check_lengths(sig, params)
    if sig.n != X.shape[0]:
        raise ShapeMismatch(f"X is {X.shape[0]}x{X.shape[0]} but n = {sig.n}")
    return X, sig, params


def flag_membership_full(X, sig, params, tol=MEMB_TOL):
    """Symmetry, product polynomial and all ``p`` trace-power conditions.

    The trace of ``X^i`` is tested against ``tol * (1 + ||X||_F^i)``; the
    symmetry and polynomial residuals against ``tol * max(1, n max|a|^(p+1))``.
    """
    X, sig, params = _flag_inputs(X, sig, params)
    n, p = sig.n, sig.p
    bound = tol * flag_scale(params, n)
    residuals = {
        "symmetry": float(np.linalg.norm(X - X.T)),
        "product": _product_residual(X, params),
    }
    bounds = dict.fromkeys(residuals, bound)
    fro = np.linalg.norm(X)
    a = np.asarray(params)
    mult = np.asarray(sig.multiplicities)
    for i, tr in enumerate(trace_powers(X, p), start=1):
        key = f"trace{i}"
        residuals[key] = abs(tr - float(mult @ a**i))
        bounds[key] = tol * (1.0 + fro**i)
    return MembershipReport(residuals, bounds)


def flag_membership_generic(X, sig, params, tol=MEMB_TOL, budget=GENERICITY_BUDGET):
    """Symmetry, product polynomial and the single condition on ``tr X``.

    Valid only for generic parameters; raises :class:`NotGeneric` otherwise
    (including when genericity cannot be decided within ``budget``).
    """
    X, sig, params = _flag_inputs(X, sig, params)
    verdict = genericity_check(params, sig.n, sig.p, budget)
    if verdict.status != "generic":
        raise NotGeneric(str(verdict))
    bound = tol * flag_scale(params, sig.n)
    mult = np.asarray(sig.multiplicities)
    residuals = {
        "symmetry": float(np.linalg.norm(X - X.T)),
        "product": _product_residual(X, params),
        "trace1": abs(float(np.trace(X)) - float(mult @ np.asarray(params))),
    }
    bounds = dict.fromkeys(residuals, bound)
    bounds["trace1"] = tol * (1.0 + np.linalg.norm(X))
    return MembershipReport(residuals, bounds)


def solve_vandermonde(nodes, rhs):
    """Solve ``sum_j nodes[j]**i * z[j] = rhs[i]`` for ``i = 0..m-1``.

    Björck–Pereyra elimination, O(m^2) operations.
    """
    x = np.asarray(nodes, dtype=float)
    z = np.array(rhs, dtype=float)
    m = len(x)
    if z.shape != (m,):
        raise LengthMismatch(f"{m} nodes but {z.size} right-hand side entries")
    if len(set(x.tolist())) != m:
        raise SingularSystem("Vandermonde nodes are not distinct")
    for k in range(m - 1):
        for i in range(m - 1, k, -1):
            z[i] -= x[k] * z[i - 1]
    for k in range(m - 2, -1, -1):
        for i in range(k + 1, m):
            z[i] /= x[i] - x[i - k - 1]
        for i in range(k, m - 1):
            z[i] -= z[i + 1]
    return z


def solve_multiplicities(traces, n, params):
    """Recover integer multiplicities from ``(tr X, ..., tr X^p)``."""
    a = [float(v) for v in params]
    if len(set(a)) != len(a):
        raise SingularSystem(f"parameters {a} are not distinct")
    traces = list(traces)
    if len(traces) != len(a) - 1:
        raise LengthMismatch(f"need {len(a) - 1} traces, got {len(traces)}")
    z = solve_vandermonde(a, [n, *traces])
    rounded = np.rint(z)
    if np.any(np.abs(z - rounded) > INT_TOL):
        raise NonIntegralSolution(f"solution {z.tolist()} is not integral")
    mult = tuple(int(v) for v in rounded)
    if min(mult) < 1:
        raise NonPositiveMultiplicity(f"multiplicities {mult} are not all positive")
    return mult


@dataclass(frozen=True)
class Genericity:
    status: str  # "generic" | "not_generic" | "undecided"
    witness: tuple = None
    count: int = 0

    def __bool__(self):
        return self.status == "generic"

    def __str__(self):
        if self.status == "not_generic":
            m, m2 = self.witness
            return f"not generic: multiplicities {m} and {m2} give the same trace"
        if self.status == "undecided":
            return f"undecided: {self.count} compositions exceed the budget"
        return "generic"


def _compositions(n, parts):
    """All ``parts``-tuples of non-negative integers summing to ``n``."""
    bars = parts - 1
    total = math.comb(n + bars, bars)
    if bars == 0:
        return np.array([[n]])
    flat = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(n + bars), bars)),
        dtype=np.int64,
        count=total * bars,
    ).reshape(total, bars)
    edges = np.hstack(
        [np.full((total, 1), -1), flat, np.full((total, 1), n + bars)]
    )
    return np.diff(edges, axis=1) - 1


def genericity_check(params, n, p, budget=GENERICITY_BUDGET):
    """Decide whether ``tr X`` alone pins down the multiplicities.

    Enumerates every way of writing ``n`` as a sum of ``p + 1`` non-negative
    integers and looks for two that give the same weighted sum ``a^T m``
    (equal within ``1e-9 ||a|| n``).  A spectrum that misses a parameter
    still satisfies the product polynomial, so zero parts are included.
    """
    a = np.asarray(params, dtype=float)
    if a.size != p + 1:
        raise LengthMismatch(f"need {p + 1} parameters, got {a.size}")
    if len(set(a.tolist())) != a.size:
        raise DegenerateParams("parameters are not distinct")
    count = math.comb(n + p, p)
    if count > budget:
        return Genericity("undecided", count=count)
    if p == 1:
        return Genericity("generic", count=count)
    M = _compositions(n, p + 1)
    t = M @ a
    order = np.argsort(t, kind="stable")
    ts = t[order]
    gen_tol = 1e-9 * np.linalg.norm(a) * n
    close = np.diff(ts) <= gen_tol
    if not close.any():
        return Genericity("generic", count=count)
    # split the sorted list into runs of mutually close values
    starts = np.flatnonzero(np.r_[True, ~close])
    ends = np.r_[starts[1:], len(ts)]
    groups = [order[s:e] for s, e in zip(starts, ends) if e - s > 1]
    fallback = None
    for g in groups:
        members = sorted(tuple(int(v) for v in M[i]) for i in g)
        positive = [m for m in members if min(m) > 0]
        if len(positive) >= 2:
            return Genericity("not_generic", (positive[0], positive[1]), count)
        if fallback is None:
            fallback = (members[0], members[1])
    return Genericity("not_generic", fallback, count)


def _cluster_tol(params):
    a = np.asarray(params)
    gap = min(abs(x - y) for x, y in itertools.combinations(a, 2))
    return min(1e-6 * max(1.0, np.abs(a).max()), 0.25 * gap)


def flag_extract(Xp, tol=MEMB_TOL):
    """Recover the flag of a model point.

    Eigenvectors are grouped by the parameter they belong to, in the order
    of ``Xp.params``.  If the concatenated basis has determinant -1, the
    first column of the last block is negated.
    """
    report = flag_membership_full(Xp.X, Xp.sig, Xp.params, tol)
    if not report:
        raise MembershipFailed(f"failed checks: {report.failures()}")
    w, Q = sym_eigh(Xp.X)
    labels = cluster_eigenvalues(
        w, list(Xp.params), _cluster_tol(Xp.params), expected=Xp.sig.multiplicities
    )
    blocks = [Q[:, labels == j] for j in range(len(Xp.params))]
    if np.linalg.det(np.hstack(blocks)) < 0:
        blocks[-1] = blocks[-1].copy()
        blocks[-1][:, 0] *= -1
    return AbstractFlag(tuple(blocks))


def sign_pattern_compatible(a, b):
    """``sign(a_i - a_j) == sign(b_i - b_j)`` for every pair ``i < j``."""
    return all(
        np.sign(a[i] - a[j]) == np.sign(b[i] - b[j])
        for i, j in itertools.combinations(range(len(a)), 2)
    )


def flag_homotopy_convert(Xp, target, t=1.0):
    """Move a model point to parameters ``(1 - t) a + t b`` keeping its flag.

    For ``0 < t < 1`` the straight segment from ``a`` to ``b`` must stay in
    the set of distinct parameters, which holds exactly when both have the
    same sign pattern; ``t = 1`` alone is a change of coordinates and needs
    no such condition.
    """
    target = _as_params(target)
    _check_lengths(Xp.sig, target)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t = {t!r} outside [0, 1]")
    a = np.asarray(Xp.params)
    b = np.asarray(target)
    if 0.0 < t < 1.0 and not sign_pattern_compatible(a, b):
        raise SignPatternViolation(
            f"{tuple(a.tolist())} and {tuple(b.tolist())} lie in different components of the parameter space"
        )
    if t == 0.0:
        return IsospectralPoint(Xp.X.copy(), Xp.sig, Xp.params)
    try:
        interp = target if t == 1.0 else IsospectralParams(tuple((1.0 - t) * a + t * b))
    except DegenerateParams as exc:
        raise DegenerateInterpolation(str(exc)) from exc
    flag = flag_extract(Xp)
    return flag_construct(flag.rotation, Xp.sig, interp)


def params_traceless(sig):
    """Consecutive parameters shifted so that ``sum_j n_j a_j = 0``."""
    mult = sig.multiplicities
    mean = Fraction(sum(m * j for j, m in enumerate(mult, start=1)), sig.n)
    return IsospectralParams(tuple(float(j - mean) for j in range(1, len(mult) + 1)))


def cond_number(params):
    """``max |a_i| / min |a_i|``, shared by every matrix of the model."""
    a = np.abs(np.asarray(list(params), dtype=float))
    if a.min() == 0:
        return math.inf
    return float(a.max() / a.min())


def _alternating_params(p, epsilon):
    m = (p + 2) // 2  # number of distinct magnitudes
    if m == 1:
        return IsospectralParams((1.0, -1.0))
    delta = epsilon / (2 * (m - 1))
    if delta <= PARAM_TOL:
        raise InfeasibleEpsilon(f"epsilon = {epsilon!r} is too small for p = {p}")
    vals = [(1.0 if j % 2 == 0 else -1.0) * (1.0 + delta * (j // 2)) for j in range(p + 1)]
    return IsospectralParams(tuple(vals))


def _traceless_lp(mult, signs, epsilon):
    """Maximize the spacing of same-sign magnitudes in ``[1, 1 + epsilon]``
    subject to ``sum n_j a_j = 0``.  Returns ``(a, gap)`` or None."""
    m = len(mult)
    # variables: a_0..a_{m-1}, g
    c = np.zeros(m + 1)
    c[-1] = -1.0
    c[:m] = 1e-3 * signs  # prefer magnitudes near 1
    A_ub, b_ub = [], []
    for sign in (1.0, -1.0):
        idx = [j for j in range(m) if signs[j] == sign]
        for i, j in zip(idx, idx[1:]):
            row = np.zeros(m + 1)
            row[i], row[j], row[-1] = sign, -sign, 1.0  # |a_j| - |a_i| >= g
            A_ub.append(row)
            b_ub.append(0.0)
    bounds = []
    for s in signs:
        bounds.append((1.0, 1.0 + epsilon) if s > 0 else (-1.0 - epsilon, -1.0))
    bounds.append((0.0, 1.0))
    A_eq = np.r_[np.asarray(mult, dtype=float), 0.0][None, :]
    res = linprog(
        c,
        A_ub=np.array(A_ub) if A_ub else None,
        b_ub=np.array(b_ub) if b_ub else None,
        A_eq=A_eq,
        b_eq=[0.0],
        bounds=bounds,
        method="highs",
    )
    if res.status != 0:
        return None
    a = res.x[:m]
    pos = signs > 0
    # restore sum n_j a_j = 0 to rounding by rescaling the negative group
    a[~pos] *= (mult[pos] @ a[pos]) / -(mult[~pos] @ a[~pos])
    return a, res.x[-1]


def params_optimize_cond(sig, epsilon, traceless=False):
    """Distinct parameters whose model has condition number at most ``1 + epsilon``.

    Without the traceless constraint the values alternate in sign with
    magnitudes ``1, 1 + d, 1 + 2d, ...``; for ``p = 1`` this is exactly
    ``(1, -1)``.  With it, each sign pattern is tried in order of weight
    balance and a small linear program spaces the magnitudes.
    """
    if not epsilon > 0:
        raise InfeasibleEpsilon("epsilon must be positive")
    p = sig.p
    if not traceless:
        return _alternating_params(p, epsilon)
    mult = np.asarray(sig.multiplicities, dtype=float)
    patterns = []
    for rest in itertools.product((1.0, -1.0), repeat=p):
        signs = np.array((1.0, *rest))
        if (signs < 0).any():
            imbalance = abs(mult[signs > 0].sum() - mult[signs < 0].sum())
            patterns.append((imbalance, tuple(-signs), signs))
    patterns.sort(key=lambda item: item[:2])
    for _, _, signs in patterns:
        for eps in (epsilon * (1 - 1e-9), epsilon):
            found = _traceless_lp(mult, signs, eps)
            if found is None:
                continue
            a, gap = found
            if gap <= 10 * PARAM_TOL or cond_number(a) > 1 + epsilon:
                continue
            return IsospectralParams(tuple(a))
    raise InfeasibleEpsilon(
        f"no traceless parameters for multiplicities {sig.multiplicities} "
        f"with condition number <= 1 + {epsilon!r}"
    )
