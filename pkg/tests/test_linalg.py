import numpy as np
import pytest

from invlabel.error import DimensionError, FactorizationError, SingularSystemError
from invlabel.linalg import (cho_solve_upper, cholesky, cholesky_jittered, condition_estimate,
                             dense_sym_generalized_eig, lanczos_largest, lu_solve)


def _random_spd(rng, n):
    A = rng.normal(size=(n, n))
    return A @ A.T + n * np.eye(n)


# --- LU ---

def test_lu_solve(rng):
    M = rng.normal(size=(12, 12)) + 12 * np.eye(12)
    b = rng.normal(size=12)
    np.testing.assert_allclose(M @ lu_solve(M, b), b, atol=1e-12)


def test_lu_solve_agrees_with_cholesky_on_spd_systems(rng):
    M = _random_spd(rng, 50)
    b = rng.normal(size=50)
    np.testing.assert_allclose(lu_solve(M, b), cho_solve_upper(cholesky(M), b), rtol=1e-10, atol=1e-12)


def test_lu_solve_singular_carries_condition():
    M = np.array([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(SingularSystemError) as info:
        lu_solve(M, np.ones(2))
    assert info.value.condition > 1e15
    assert info.value.details["condition"] == info.value.condition


def test_lu_solve_shape_checks():
    with pytest.raises(DimensionError):
        lu_solve(np.eye(3), np.ones(2))
    with pytest.raises(DimensionError):
        lu_solve(np.ones((2, 3)), np.ones(2))


def test_condition_estimate_of_identity():
    assert condition_estimate(np.eye(4)) == pytest.approx(1.0)


# --- Cholesky ---

def test_cholesky_round_trip(rng):
    M = _random_spd(rng, 8)
    U = cholesky(M)
    np.testing.assert_allclose(U.T @ U, M, rtol=1e-12)
    b = rng.normal(size=8)
    np.testing.assert_allclose(M @ cho_solve_upper(U, b), b, atol=1e-10)


def test_cholesky_rejects_indefinite():
    with pytest.raises(FactorizationError):
        cholesky(np.diag([1.0, -1.0]))


def test_cholesky_jittered_only_jitters_when_needed(rng):
    _, jitter = cholesky_jittered(_random_spd(rng, 6))
    assert jitter == 0.0

    rank_one = np.ones((5, 5))
    U, jitter = cholesky_jittered(rank_one)
    assert jitter > 0.0
    np.testing.assert_allclose(U.T @ U, rank_one + jitter * np.eye(5), atol=1e-12)


def test_cholesky_jittered_gives_up():
    with pytest.raises(FactorizationError) as info:
        cholesky_jittered(-np.eye(3))
    assert info.value.jitter > 0.0


# --- Lanczos ---

def test_lanczos_on_a_diagonal():
    values, vectors = lanczos_largest(np.diag(np.arange(1.0, 11.0)), 10, 2)
    np.testing.assert_allclose(values, [10.0, 9.0], rtol=1e-10)
    assert abs(vectors[9, 0]) == pytest.approx(1.0)


def test_lanczos_with_a_matvec_callable(rng):
    v = rng.normal(size=30)
    values, vectors = lanczos_largest(lambda x: v * (v @ x), 30, 1)
    assert values[0] == pytest.approx(v @ v, rel=1e-10)
    assert abs(vectors[:, 0] @ v) == pytest.approx(np.linalg.norm(v), rel=1e-8)


def test_lanczos_matches_dense_eigenvalues(rng):
    A = rng.normal(size=(40, 40))
    A = A + A.T
    values, _ = lanczos_largest(A, 40, 3)
    np.testing.assert_allclose(values, np.linalg.eigvalsh(A)[::-1][:3], rtol=1e-8)


def test_lanczos_is_repeatable(rng):
    A = _random_spd(rng, 25)
    a, _ = lanczos_largest(A, 25, 2)
    b, _ = lanczos_largest(A, 25, 2)
    np.testing.assert_array_equal(a, b)


def test_lanczos_rejects_bad_counts():
    with pytest.raises(DimensionError):
        lanczos_largest(np.eye(4), 4, 4)
    with pytest.raises(DimensionError):
        lanczos_largest(np.eye(4), 4, 0)


# --- Dense Generalized Eigenproblem ---

def test_dense_generalized_eig_with_identity(rng):
    A = rng.normal(size=(6, 6))
    A = A + A.T
    values, _ = dense_sym_generalized_eig(A, np.eye(6))
    np.testing.assert_allclose(values, np.linalg.eigvalsh(A), atol=1e-12)


def test_dense_generalized_eig_needs_spd_b():
    with pytest.raises(FactorizationError):
        dense_sym_generalized_eig(np.eye(3), -np.eye(3))
    with pytest.raises(DimensionError):
        dense_sym_generalized_eig(np.eye(3), np.eye(2))
