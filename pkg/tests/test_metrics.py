import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from smm import errors
from smm.flag import FlagSignature, IsospectralParams, flag_construct, flag_extract
from smm.linalg import cholesky_upper, haar_rotation
from smm.metrics import (
    FlagMTangent,
    StiefelMTangent,
    embedded_metric,
    flag_m_metric,
    random_flag_tangent,
    random_stiefel_tangent,
    stiefel_m_metric,
    tangent_project_flag,
    tangent_pull_flag,
    tangent_push_flag,
    tangent_push_stiefel,
)
from conftest import random_spd

GR12 = FlagSignature(2, (1,))


def test_flag_metric_p1_value():
    B = FlagMTangent(GR12, {(0, 1): [[1.0]]})
    assert flag_m_metric(B, B, (1.0, -1.0)) == 8.0


def test_flag_metric_zero(rng):
    s = FlagSignature(5, (1, 3))
    C = random_flag_tangent(s, rng)
    assert flag_m_metric(FlagMTangent(s, {}), C, (0, 1, 2)) == 0.0


def test_flag_metric_homogeneous(rng):
    s = FlagSignature(6, (2, 3, 5))
    B, C = random_flag_tangent(s, rng), random_flag_tangent(s, rng)
    a = np.array([0.3, -1.0, 2.0, 4.5])
    assert flag_m_metric(B, C, 3.0 * a) == pytest.approx(9.0 * flag_m_metric(B, C, a), rel=1e-12)


def test_flag_tangent_bad_block():
    with pytest.raises(errors.ShapeMismatch):
        FlagMTangent(GR12, {(0, 1): np.zeros((2, 1))})


def test_flag_tangent_from_matrix_roundtrip(rng):
    s = FlagSignature(5, (2, 3))
    B = random_flag_tangent(s, rng)
    again = FlagMTangent.from_matrix(s, B.assemble())
    assert all(np.array_equal(B.blocks[key], again.blocks[key]) for key in B.blocks)
    M = B.assemble()
    assert np.allclose(M, -M.T)


def test_stiefel_metric_examples():
    B = StiefelMTangent(np.zeros((1, 1)), [[1.0]])
    assert stiefel_m_metric(B, B, np.eye(1)) == 1.0
    assert stiefel_m_metric(B, B, [[2.0]]) == 4.0


def test_stiefel_metric_symmetric(rng):
    B, C = random_stiefel_tangent(6, 2, rng), random_stiefel_tangent(6, 2, rng)
    R = cholesky_upper(random_spd(rng, 2))
    assert stiefel_m_metric(B, C, R) == pytest.approx(stiefel_m_metric(C, B, R), abs=1e-12)


def test_stiefel_tangent_needs_skew():
    with pytest.raises(errors.ShapeMismatch):
        StiefelMTangent(np.eye(2), np.zeros((1, 2)))


def test_push_flag_zero():
    s = FlagSignature(4, (1, 2))
    assert not tangent_push_flag(FlagMTangent(s, {}), (0, 1, 2)).any()


def test_push_flag_p1_value():
    B = FlagMTangent(GR12, {(0, 1): [[1.0]]})
    assert np.array_equal(tangent_push_flag(B, (1.0, -1.0)), [[0.0, -2.0], [-2.0, 0.0]])


def test_push_flag_p1_closed_form(rng):
    s = FlagSignature(5, (2,))
    B = random_flag_tangent(s, rng)
    a, b = 1.5, -0.25
    B0 = B.blocks[(0, 1)]
    closed = (b - a) * np.block([[np.zeros((2, 2)), B0], [B0.T, np.zeros((3, 3))]])
    assert np.linalg.norm(tangent_push_flag(B, (a, b)) - closed) < 1e-14


def test_push_flag_is_derivative(rng):
    # central difference of Q -> Q L Q^T along exp(hB) at the identity
    from scipy.linalg import expm

    s = FlagSignature(4, (1, 3))
    a = (0.0, 1.0, 3.0)
    B = random_flag_tangent(s, rng)
    L = np.diag([0.0, 1.0, 1.0, 3.0])
    h = 1e-5
    M = B.assemble()
    fd = (expm(h * M) @ L @ expm(h * M).T - expm(-h * M) @ L @ expm(-h * M).T) / (2 * h)
    assert np.linalg.norm(fd - tangent_push_flag(B, a)) < 1e-8


def test_push_stiefel_examples():
    assert not tangent_push_stiefel(StiefelMTangent(np.zeros((1, 1)), [[0.0]]), np.eye(1)).any()
    f = tangent_push_stiefel(StiefelMTangent(np.zeros((1, 1)), [[1.0]]), np.eye(1))
    assert np.allclose(np.abs(f), [[0.0], [1.0]])
    assert embedded_metric(f, f, kind="rectangular") == 1.0


def test_embedded_metric_examples():
    assert embedded_metric(np.eye(3), np.eye(3)) == 3.0
    assert embedded_metric(np.diag([1.0, -1.0]), [[0.0, 1.0], [1.0, 0.0]]) == 0.0


@given(st.integers(0, 10**6))
@settings(max_examples=50, deadline=None)
def test_flag_isometry(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 8))
    p = int(rng.integers(1, n))
    k = tuple(sorted(rng.choice(np.arange(1, n), p, replace=False).tolist()))
    s = FlagSignature(n, k)
    a = IsospectralParams(tuple(rng.permutation(np.arange(p + 1)) + rng.uniform(0, 0.5, p + 1)))
    B, C = random_flag_tangent(s, rng), random_flag_tangent(s, rng)
    lhs = flag_m_metric(B, C, a)
    rhs = embedded_metric(tangent_push_flag(B, a), tangent_push_flag(C, a))
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


@given(st.integers(0, 10**6))
@settings(max_examples=50, deadline=None)
def test_stiefel_isometry(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 8))
    k = int(rng.integers(1, n))
    R = cholesky_upper(random_spd(rng, k))
    B, C = random_stiefel_tangent(n, k, rng), random_stiefel_tangent(n, k, rng)
    lhs = stiefel_m_metric(B, C, R)
    rhs = embedded_metric(tangent_push_stiefel(B, R), tangent_push_stiefel(C, R), kind="rectangular")
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


def test_project_idempotent_and_orthogonal(rng):
    s = FlagSignature(5, (2, 3))
    Xp = flag_construct(haar_rotation(5, 4), s, IsospectralParams((0.0, 1.0, 2.5)))
    G = rng.standard_normal((5, 5))
    Z = G + G.T
    T = tangent_project_flag(Z, Xp)
    N = Z - T
    assert np.linalg.norm(tangent_project_flag(T, Xp) - T) < 1e-12
    assert abs(np.trace(T @ N)) < 1e-12
    assert np.linalg.norm(tangent_project_flag(Xp.X, Xp)) < 1e-12
    # the normal part commutes with X, the tangent part is [X, skew]
    assert np.linalg.norm(N @ Xp.X - Xp.X @ N) < 1e-10


def test_pull_inverts_push(rng):
    s = FlagSignature(5, (1, 3))
    Q = haar_rotation(5, 9)
    a = IsospectralParams((0.0, 1.0, 2.5))
    Xp = flag_construct(Q, s, a)
    G = rng.standard_normal((5, 5))
    T = tangent_project_flag(G + G.T, Xp)
    B = tangent_pull_flag(T, Xp)
    # the pull is expressed in the extracted eigenframe, not in Q
    E = flag_extract(Xp).rotation
    assert np.linalg.norm(E @ tangent_push_flag(B, a) @ E.T - T) < 1e-10


def test_metrics_positive_definite(rng):
    for _ in range(1000):
        s = FlagSignature(5, (1, 3))
        B = random_flag_tangent(s, rng)
        assert flag_m_metric(B, B, (0.0, 1.0, -2.0)) > 0
        S = random_stiefel_tangent(5, 2, rng)
        assert stiefel_m_metric(S, S, cholesky_upper(random_spd(rng, 2))) > 0


def test_projection_self_adjoint(rng):
    s = FlagSignature(5, (2, 4))
    Xp = flag_construct(haar_rotation(5, 8), s, IsospectralParams((1.0, -1.0, 0.2)))
    G, H = rng.standard_normal((2, 5, 5))
    Z, W = G + G.T, H + H.T
    lhs = embedded_metric(tangent_project_flag(Z, Xp), W)
    rhs = embedded_metric(Z, tangent_project_flag(W, Xp))
    assert abs(lhs - rhs) < 1e-10
