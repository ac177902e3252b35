# invlabel/evp.py

"""
Invariant eigenvalue problem.

Finds the smooth functions h = K c that vanish on a boundary region and
minimize the Rayleigh quotient

    RQ(c) = (|G K c|^2 + |K c|_W^2 + epsilon c^T K c) / |K c|^2.

In terms of h this is the symmetric problem (A + epsilon K^-1) h = (lambda + delta) h
with A = G^T G + W + delta I. A is 2x2-block diagonal, so A^-1 is explicit, and

    (A + epsilon K^-1)^-1 = A^-1 - A^-1 (K / epsilon + A^-1)^-1 A^-1

needs only one Cholesky factorization of K / epsilon + A^-1. The largest
eigenvalues mu of that operator give lambda = 1 / mu - delta.
"""

import logging
import math
from typing import List

import numpy as np

from .boundary import boundary_arrays
from .constants import EIGEN_CLAMP, LANCZOS_TOL
from .error import ConfigError, DegenerateError, DimensionError, NumericalError
from .kernels import check_topology, kernel_matrix, resolve_kernel
from .linalg import cho_solve_upper, cholesky_jittered, lanczos_largest
from .models import (BoundarySpec, EigenPair, EigenResult, KernelSpec, LabelModel,
                     Provenance, SampleSet, ZeroRegionBoundarySpec)
from .sampling import invariance_energy

logger = logging.getLogger(__name__)


class ShiftInvertOperator:
    """
    Matrix-free application of (A + epsilon K^-1)^-1.

    Attributes:
        N (int): Number of sample pairs; the operator acts on vectors of length 2N.
        epsilon (float): Regularization weight.
        delta (float): Shift making A invertible.
        jitter (float): Diagonal shift the Cholesky factorization needed (0 if none).
        matvecs (int): Number of applications so far.
    """

    def __init__(self, K: np.ndarray, w_bd: np.ndarray, epsilon: float, delta: float):
        n2 = K.shape[0]
        if n2 % 2 or K.shape != (n2, n2) or w_bd.shape != (n2,):
            raise DimensionError(f"operator needs a 2N x 2N kernel matrix and 2N weights, got {K.shape}, {w_bd.shape}")
        self.N = N = n2 // 2
        self.epsilon = epsilon
        self.delta = delta

        # inverse of each block [[p, -1], [-1, q]]
        p = 1.0 + w_bd[:N] + delta
        q = 1.0 + w_bd[N:] + delta
        det = p * q - 1.0
        self._a11, self._a22, self._a12 = q / det, p / det, 1.0 / det

        M = K / epsilon
        idx = np.arange(N)
        M[idx, idx] += self._a11
        M[idx + N, idx + N] += self._a22
        M[idx, idx + N] += self._a12
        M[idx + N, idx] += self._a12
        self._U, self.jitter = cholesky_jittered(M)
        self.matvecs = 0

    @property
    def dim(self) -> int:
        return 2 * self.N

    def apply_Ainv(self, v: np.ndarray) -> np.ndarray:
        """A^-1 v, applied block by block."""
        top, bot = v[:self.N], v[self.N:]
        return np.concatenate((self._a11 * top + self._a12 * bot, self._a12 * top + self._a22 * bot))

    def __call__(self, h: np.ndarray) -> np.ndarray:
        self.matvecs += 1
        u = self.apply_Ainv(np.asarray(h, dtype=float))
        return u - self.apply_Ainv(cho_solve_upper(self._U, u))

    def coefficients(self, h: np.ndarray, mu: float) -> np.ndarray:
        """c = K^-1 h for an eigenvector h with eigenvalue mu, without forming K^-1."""
        return cho_solve_upper(self._U, self.apply_Ainv(h)) / (self.epsilon * mu)

    def dense(self) -> np.ndarray:
        """The operator as an explicit matrix; for small checks only."""
        return np.column_stack([self(e) for e in np.eye(self.dim)])


def apply_eval_operator(op: ShiftInvertOperator, h: np.ndarray) -> np.ndarray:
    """Applies a prepared shift-invert operator to h."""
    return op(h)


def rayleigh_quotient(c: np.ndarray, samples: SampleSet, K: np.ndarray, w_bd: np.ndarray, epsilon: float) -> float:
    """
    (|G K c|^2 + sum w_bd (K c)^2 + epsilon c^T K c) / |K c|^2.

    Raises:
        DimensionError: If c does not have length 2N.
        DegenerateError: If K c = 0.
    """
    c = np.asarray(c, dtype=float)
    if c.shape != (2 * samples.N,):
        raise DimensionError(f"coefficient vector must have length {2 * samples.N}, got shape {c.shape}")
    h = K @ c
    denom = math.fsum(h * h)
    if denom == 0.0:
        raise DegenerateError("Rayleigh quotient is undefined for K c = 0")
    numer = invariance_energy(h) + math.fsum(w_bd * h * h) + epsilon * math.fsum(c * h)
    return numer / denom


def solve_evp(
    samples: SampleSet,
    kernel: KernelSpec,
    boundary: BoundarySpec,
    epsilon: float,
    delta: float,
    n_eigs: int = 1,
) -> EigenResult:
    """
    Smallest eigenpairs of the invariant eigenvalue problem.

    Args:
        samples: Inputs and images.
        kernel: Kernel spec; a `sigma0` width is resolved with N.
        boundary: A `zero_region` boundary; only its weights are used.
        epsilon: Regularization weight, > 0.
        delta: Shift of A, > 0.
        n_eigs: Number of eigenpairs, 1 <= n_eigs < 2N.

    Returns:
        Eigenpairs ascending in lambda, each h of unit norm with its largest
        entry positive.

    Raises:
        ConfigError: If a parameter is out of range or the boundary is not `zero_region`.
        FactorizationError: If Cholesky fails even with jitter.
        ConvergenceError: If the eigensolver does not converge.
        NumericalError: If an eigenvalue comes out clearly negative.
    """
    if not isinstance(boundary, ZeroRegionBoundarySpec):
        raise ConfigError(f"solve_evp needs a zero_region boundary, got {boundary.type!r}")
    if not epsilon > 0 or not delta > 0:
        raise ConfigError(f"solve_evp needs epsilon > 0 and delta > 0, got epsilon={epsilon}, delta={delta}")
    if not 1 <= n_eigs < 2 * samples.N:
        raise DimensionError(f"n_eigs must satisfy 1 <= n_eigs < 2N = {2 * samples.N}, got {n_eigs}")
    spec = resolve_kernel(kernel, samples.N)
    check_topology(spec, samples.topology)

    K = kernel_matrix(spec, samples.z, samples.topology)
    _, w_bd = boundary_arrays(boundary, samples.z)
    op = ShiftInvertOperator(K, w_bd, epsilon, delta)
    mus, vectors = lanczos_largest(op, op.dim, n_eigs, tol=LANCZOS_TOL, max_iter=10 * n_eigs + 100)

    # the factorization absorbed the jitter into K
    K_eff = K if op.jitter == 0.0 else K + epsilon * op.jitter * np.eye(op.dim)
    pairs: List[EigenPair] = []
    for i, (mu, h) in enumerate(zip(mus, vectors.T)):
        lam = 1.0 / mu - delta
        if lam < 0.0:
            if lam <= -EIGEN_CLAMP:
                raise NumericalError(
                    f"eigenvalue {i + 1} is {lam:.3e} < 0; the factorization is unreliable",
                    {"index": i + 1, "eigenvalue": lam, "jitter": op.jitter},
                )
            lam = 0.0
        if h[np.argmax(np.abs(h))] < 0:
            h = -h
        c = op.coefficients(h, mu)
        rq = rayleigh_quotient(c, samples, K_eff, w_bd, epsilon)
        if abs(lam - rq) > 1e-8 * max(lam, 1e-12):
            logger.warning(f"Eigenpair {i + 1}: Rayleigh quotient {rq:.6e} drifts from lambda {lam:.6e}")
        pairs.append(EigenPair(eigenvalue=lam, h=h, c=c, rayleigh=rq))

    pairs.sort(key=lambda p: p.eigenvalue)
    logger.info(
        f"EVP solved: N={samples.N}, sigma={spec.sigma:.4g}, epsilon={epsilon:.3g}, delta={delta:.3g} -> "
        f"lambda_1={pairs[0].eigenvalue:.6e} ({len(pairs)} pairs, {op.matvecs} operator applications)"
    )
    return EigenResult(
        pairs=pairs,
        shift_delta=delta,
        epsilon=epsilon,
        iterations=op.matvecs,
        jitter=op.jitter,
        kernel=spec,
    )


def eigen_models(result: EigenResult, samples: SampleSet, boundary: BoundarySpec) -> List[LabelModel]:
    """One label model per eigenpair, centred on the training samples."""
    if result.kernel is None:
        raise ConfigError("eigen result carries no resolved kernel")
    models = []
    for i, pair in enumerate(result.pairs, start=1):
        models.append(LabelModel(
            kernel=result.kernel,
            topology=samples.topology,
            centers=samples.z,
            coefficients=pair.c,
            provenance=Provenance(
                map=samples.map_used,
                domain=samples.domain,
                N=samples.N,
                epsilon=result.epsilon,
                sobol_skip=samples.sobol_skip,
                boundary=boundary,
                delta=result.shift_delta,
                eigen_index=i,
                eigenvalue=pair.eigenvalue,
            ),
        ))
    return models
