import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra import numpy as hnp

from smm import errors
from smm.linalg import (
    check_rotation,
    check_spd,
    cholesky_upper,
    cluster_eigenvalues,
    haar_rotation,
    qr_positive,
    spd_power,
    sym_eigh,
)
from conftest import random_spd


def test_eigh_identity():
    w, Q = sym_eigh(np.eye(3))
    assert np.allclose(w, 1)
    assert np.allclose(Q.T @ Q, np.eye(3))


def test_eigh_diagonal_sorted():
    w, Q = sym_eigh(np.diag([2.0, -1.0]))
    assert np.array_equal(w, [-1.0, 2.0])
    assert np.allclose(np.abs(Q), [[0, 1], [1, 0]])


def test_eigh_swap_matches_analytic_pairs():
    S = np.array([[0.0, 1.0], [1.0, 0.0]])
    w, Q = sym_eigh(S)
    assert np.allclose(w, [-1, 1], atol=1e-15)
    # oracle: (1, -1)/sqrt2 for -1 and (1, 1)/sqrt2 for +1, up to sign
    oracle = np.array([[1, 1], [-1, 1]]) / np.sqrt(2)
    assert np.allclose(np.abs(Q.T @ oracle), np.eye(2), atol=1e-14)
    assert np.linalg.norm(Q @ np.diag(w) @ Q.T - S) < 1e-12


def test_eigh_rejects_nonsymmetric():
    with pytest.raises(errors.NonSymmetric):
        sym_eigh(np.array([[0.0, 1.0], [0.0, 0.0]]))


@pytest.mark.parametrize(
    "M, Q_exp, R_exp",
    [
        (np.eye(3), np.eye(3), np.eye(3)),
        (np.array([[2.0], [0.0]]), np.array([[1.0], [0.0]]), np.array([[2.0]])),
        (np.array([[-1.0], [0.0]]), np.array([[-1.0], [0.0]]), np.array([[1.0]])),
    ],
)
def test_qr_positive_examples(M, Q_exp, R_exp):
    Q, R = qr_positive(M)
    assert np.allclose(Q, Q_exp) and np.allclose(R, R_exp)


def test_qr_positive_rank_deficient():
    with pytest.raises(errors.RankDeficient):
        qr_positive(np.array([[1.0, 2.0], [2.0, 4.0], [0.0, 0.0]]))


@given(hnp.arrays(float, (5, 3), elements=st.floats(-10, 10)))
@settings(max_examples=60, deadline=None)
def test_qr_positive_property(M):
    if np.linalg.svd(M, compute_uv=False)[-1] < 1e-6:
        return
    Q, R = qr_positive(M)
    assert np.all(np.diag(R) > 0)
    assert np.allclose(Q.T @ Q, np.eye(3), atol=1e-10)
    assert np.allclose(Q @ R, M, atol=1e-9 * max(1, np.abs(M).max()))


@pytest.mark.parametrize("k", [1, 2, 4])
def test_cholesky_identity(k):
    assert np.allclose(cholesky_upper(np.eye(k)), np.eye(k))


def test_cholesky_scalar():
    assert np.allclose(cholesky_upper([[4.0]]), [[2.0]])


def test_cholesky_2x2_closed_form():
    A = np.array([[2.0, 1.0], [1.0, 2.0]])
    R = cholesky_upper(A)
    expected = np.array([[np.sqrt(2), 1 / np.sqrt(2)], [0, np.sqrt(1.5)]])
    assert np.allclose(R, expected, atol=1e-15)
    assert np.allclose(R.T @ R, A, atol=1e-14)


def test_cholesky_not_pd():
    with pytest.raises(errors.NotPositiveDefinite):
        cholesky_upper(np.diag([1.0, -1.0]))


def test_check_spd_rejects_nonsymmetric():
    with pytest.raises(errors.SmmError):
        check_spd(np.array([[1.0, 2.0], [0.0, 1.0]]))


@pytest.mark.parametrize("t", [-1.0, 0.0, 0.3, 2.5])
def test_spd_power_identity(t):
    assert np.allclose(spd_power(np.eye(4), t), np.eye(4))


def test_spd_power_diagonal():
    assert np.allclose(spd_power(np.diag([4.0, 9.0]), 0.5), np.diag([2.0, 3.0]), atol=1e-15)


def test_spd_power_inverse(rng):
    A = random_spd(rng, 5)
    assert np.linalg.norm(spd_power(A, 1) @ spd_power(A, -1) - np.eye(5)) < 1e-10


def test_spd_power_semigroup(rng):
    A = random_spd(rng, 4)
    half = spd_power(A, 0.5)
    assert np.allclose(half @ half, A, atol=1e-10)


def test_haar_trivial():
    assert np.array_equal(haar_rotation(1, 3), [[1.0]])


def test_haar_deterministic():
    assert np.array_equal(haar_rotation(6, 42), haar_rotation(6, 42))
    assert not np.array_equal(haar_rotation(6, 42), haar_rotation(6, 43))


@given(st.integers(0, 2**32), st.integers(2, 9))
@settings(max_examples=40, deadline=None)
def test_haar_in_so_n(seed, n):
    Q = haar_rotation(n, seed)
    assert np.linalg.norm(Q.T @ Q - np.eye(n)) < 1e-12
    assert abs(np.linalg.det(Q) - 1) < 1e-10


def test_haar_first_column_uniform():
    # mean of first coordinate of the first column vanishes; second moment is 1/n
    n = 4
    x = np.array([haar_rotation(n, s)[0, 0] for s in range(2000)])
    assert abs(x.mean()) < 0.06
    assert abs((x**2).mean() - 1 / n) < 0.03


def test_check_rotation_rejects_reflection():
    with pytest.raises(errors.NotRotation):
        check_rotation(np.diag([1.0, -1.0]))
    check_rotation(np.diag([1.0, -1.0]), proper=False)


def test_cluster_example():
    labels = cluster_eigenvalues([0, 1, 1, 1, 2], [0, 1, 2], 1e-8)
    assert np.bincount(labels).tolist() == [1, 3, 1]


def test_cluster_identity_assignment():
    assert cluster_eigenvalues([3.0, -1.0, 7.0], [3.0, -1.0, 7.0], 1e-12).tolist() == [0, 1, 2]


def test_cluster_unresolved():
    with pytest.raises(errors.UnresolvedCluster):
        cluster_eigenvalues([0.5], [0.0, 1.0], 0.1)


def test_cluster_multiplicity_mismatch():
    with pytest.raises(errors.MultiplicityMismatch):
        cluster_eigenvalues([0.0, 0.0, 1.0], [0.0, 1.0], 1e-8, expected=[1, 2])
