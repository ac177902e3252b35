# invlabel/linalg.py

"""
Dense linear-algebra substrate.

Thin wrappers over LAPACK (through `scipy.linalg`) and ARPACK (through
`scipy.sparse.linalg.eigsh`) that check their preconditions, translate
failures into the library's exceptions and log what they had to do.
"""

import logging
import warnings
from typing import Callable, Optional, Tuple, Union

import numpy as np
import scipy.linalg
from scipy.linalg import LinAlgError, LinAlgWarning, lapack
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from .constants import LANCZOS_TOL, JITTER_SCALE, JITTER_GROWTH, JITTER_MAX_TRIES
from .error import (ConvergenceError, DimensionError, FactorizationError,
                    NumericalError, SingularSystemError)

logger = logging.getLogger(__name__)

OperatorLike = Union[np.ndarray, LinearOperator, Callable[[np.ndarray], np.ndarray]]


def _square(M: np.ndarray, name: str = "matrix") -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NumericalError(f"{name} has non-finite entries")
    return M


def condition_estimate(M: np.ndarray, lu: Optional[np.ndarray] = None) -> float:
    """1-norm condition number estimate from an LU factorization (LAPACK gecon)."""
    M = _square(M)
    if lu is None:
        lu, _ = scipy.linalg.lu_factor(M, check_finite=False)
    rcond, _ = lapack.dgecon(lu, np.linalg.norm(M, 1))
    return float("inf") if rcond == 0.0 else float(1.0 / rcond)


def lu_solve(M: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """
    Solves M x = rhs by LU with partial pivoting.

    Raises:
        DimensionError: If shapes do not match.
        SingularSystemError: If a pivot is zero within n * eps * max|pivot|;
                             carries a condition estimate.
    """
    M = _square(M, "system matrix")
    rhs = np.asarray(rhs, dtype=float)
    n = M.shape[0]
    if rhs.shape[0] != n:
        raise DimensionError(f"right-hand side has length {rhs.shape[0]}, system has {n} rows")

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(M, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if pivots.min() <= n * np.finfo(float).eps * pivots.max():
        cond = condition_estimate(M, lu)
        raise SingularSystemError(
            f"Linear system is singular within pivot tolerance (condition estimate {cond:.3e})",
            condition=cond,
        )
    x = scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False)
    logger.debug(f"LU solve of {n}x{n} system, pivot range [{pivots.min():.3e}, {pivots.max():.3e}]")
    return x


def cholesky(M: np.ndarray) -> np.ndarray:
    """
    Upper Cholesky factor U with U^T U = M.

    Only the upper triangle of M is read.

    Raises:
        FactorizationError: If M is not numerically positive definite.
    """
    M = _square(M)
    try:
        return scipy.linalg.cholesky(M, lower=False, check_finite=False)
    except LinAlgError as e:
        raise FactorizationError(f"Matrix is not positive definite: {e}") from e


def cholesky_jittered(M: np.ndarray, max_tries: int = JITTER_MAX_TRIES) -> Tuple[np.ndarray, float]:
    """
    Cholesky factor of M, adding eta * I only if the plain factorization fails.

    eta starts at JITTER_SCALE * trace(M) / dim and grows by JITTER_GROWTH
    per failed attempt.

    Returns:
        The upper factor and the jitter that was added (0.0 if none).

    Raises:
        FactorizationError: If every attempt fails; carries the last jitter tried.
    """
    M = _square(M)
    try:
        return cholesky(M), 0.0
    except FactorizationError:
        pass

    n = M.shape[0]
    scale = np.trace(M) / n
    eta = JITTER_SCALE * (scale if scale > 0 else 1.0)
    eye = np.eye(n)
    for attempt in range(max_tries):
        try:
            U = cholesky(M + eta * eye)
            logger.warning(f"Cholesky needed jitter {eta:.3e} (attempt {attempt + 1}) on a {n}x{n} matrix")
            return U, eta
        except FactorizationError:
            eta *= JITTER_GROWTH
    raise FactorizationError(
        f"Cholesky failed after {max_tries} jitter escalations up to {eta / JITTER_GROWTH:.3e}; "
        "the kernel may be too wide or epsilon too small",
        jitter=eta / JITTER_GROWTH,
    )


def cho_solve_upper(U: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solves (U^T U) x = b with two triangular solves."""
    return scipy.linalg.cho_solve((U, False), b, check_finite=False)


def as_operator(op: OperatorLike, dim: int) -> LinearOperator:
    """Wraps a matrix or a matvec callable as a `LinearOperator`."""
    if isinstance(op, LinearOperator):
        return op
    if isinstance(op, np.ndarray):
        return LinearOperator((dim, dim), matvec=lambda v: op @ v, dtype=float)
    if callable(op):
        return LinearOperator((dim, dim), matvec=op, dtype=float)
    raise TypeError(f"Cannot use {type(op).__name__} as a linear operator")


def lanczos_largest(
    op: OperatorLike,
    dim: int,
    n_eigs: int,
    tol: float = LANCZOS_TOL,
    max_iter: Optional[int] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Largest eigenpairs of a symmetric operator by implicitly restarted Lanczos.

    The start vector is fixed so repeated calls give identical results.

    Args:
        op: Symmetric operator (matrix, `LinearOperator` or matvec callable).
        dim: Operator dimension.
        n_eigs: Number of pairs, 1 <= n_eigs < dim.
        tol: Relative accuracy of the Ritz values.
        max_iter: Restart cap; defaults to 10 * n_eigs + 100.

    Returns:
        Eigenvalues sorted descending and the matching unit eigenvectors as
        columns of a (dim, n_eigs) array.

    Raises:
        DimensionError: If n_eigs is out of range.
        ConvergenceError: If ARPACK does not converge within the cap.
    """
    if not 1 <= n_eigs < dim:
        raise DimensionError(f"lanczos_largest needs 1 <= n_eigs < dim, got n_eigs={n_eigs}, dim={dim}")
    A = as_operator(op, dim)
    max_iter = max_iter or 10 * n_eigs + 100
    ncv = min(dim, max(2 * n_eigs + 1, 20))
    v0 = np.random.default_rng(0).standard_normal(dim)

    try:
        values, vectors = eigsh(A, k=n_eigs, which="LA", tol=tol, maxiter=max_iter, ncv=ncv, v0=v0)
    except ArpackNoConvergence as e:
        raise ConvergenceError(
            f"Lanczos did not converge within {max_iter} restarts "
            f"({len(e.eigenvalues)} of {n_eigs} pairs converged)",
            {"converged": len(e.eigenvalues), "max_iter": max_iter},
        ) from e

    order = np.argsort(values)[::-1]
    values, vectors = values[order], vectors[:, order]

    for mu, v in zip(values, vectors.T):
        residual = np.linalg.norm(A.matvec(v) - mu * v)
        if residual > 100.0 * tol * max(abs(mu), np.finfo(float).tiny):
            logger.warning(f"Ritz pair mu={mu:.6e} has residual {residual:.3e} above tolerance")
    logger.debug(f"Lanczos: dim={dim}, n_eigs={n_eigs}, top value {values[0]:.6e}")
    return values, vectors


def dense_sym_generalized_eig(A: np.ndarray, B: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    All eigenpairs of A v = lambda B v for symmetric A and SPD B, ascending.

    Intended for small oracle problems.

    Raises:
        FactorizationError: If B is not positive definite.
    """
    A = _square(A, "A")
    B = _square(B, "B")
    if A.shape != B.shape:
        raise DimensionError(f"A {A.shape} and B {B.shape} differ in shape")
    try:
        return scipy.linalg.eigh(A, B, check_finite=False)
    except LinAlgError as e:
        raise FactorizationError(f"B is not positive definite: {e}") from e
