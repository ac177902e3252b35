# invlabel/bvp.py

"""
Invariant boundary value problem.

Minimizes R(h) = E_bd + E_inv + epsilon * E_K over h = K_ZZ c by solving
the nonsymmetric 2N × 2N system

    ((W_bd + G^T G) K_ZZ + epsilon I) c = W_bd h_bd

with dense LU, then recomputes the energies from the solved h.
"""

import logging
import math
from typing import Tuple

import numpy as np

from .boundary import boundary_arrays, boundary_energy
from .constants import ENERGY_CLAMP
from .error import CenterMismatchError, ConfigError, DimensionError
from .kernels import check_topology, kernel_matrix, resolve_kernel
from .linalg import lu_solve
from .models import BoundarySpec, KernelSpec, LabelModel, Provenance, ResidualReport, SampleSet
from .sampling import invariance_energy

logger = logging.getLogger(__name__)


def system_matrix(K: np.ndarray, w_bd: np.ndarray, epsilon: float) -> np.ndarray:
    """(W_bd + G^T G) K + epsilon I, with G^T G applied blockwise to the rows of K."""
    n2 = K.shape[0]
    if n2 % 2 or K.shape != (n2, n2) or w_bd.shape != (n2,):
        raise DimensionError(f"system_matrix needs a 2N x 2N kernel matrix and 2N weights, got {K.shape}, {w_bd.shape}")
    N = n2 // 2
    diff = K[:N] - K[N:]
    M = w_bd[:, None] * K + np.vstack((diff, -diff))
    M[np.diag_indices(n2)] += epsilon
    return M


def _clamp(value: float, scale: float, name: str) -> float:
    if value >= 0.0:
        return value
    if value < -ENERGY_CLAMP * max(1.0, scale):
        logger.warning(f"{name} = {value:.3e} is negative beyond rounding noise; reporting 0")
    return 0.0


def energy_report(K: np.ndarray, c: np.ndarray, h_bd: np.ndarray, w_bd: np.ndarray, epsilon: float) -> ResidualReport:
    """Energy decomposition of h = K c."""
    h = K @ c
    E_inv = invariance_energy(h)
    E_bd = boundary_energy(h, h_bd, w_bd)
    E_K = _clamp(math.fsum(c * h), math.fsum(np.abs(c * h)), "E_K")
    return ResidualReport(R=E_bd + E_inv + epsilon * E_K, E_inv=E_inv, E_bd=E_bd, E_K=E_K, epsilon=epsilon)


def bvp_objective(c: np.ndarray, K: np.ndarray, h_bd: np.ndarray, w_bd: np.ndarray, epsilon: float) -> float:
    """Unclamped objective E_bd + E_inv + epsilon c^T K c."""
    h = K @ c
    return boundary_energy(h, h_bd, w_bd) + invariance_energy(h) + epsilon * math.fsum(c * h)


def solve_bvp(
    samples: SampleSet,
    kernel: KernelSpec,
    boundary: BoundarySpec,
    epsilon: float,
) -> Tuple[LabelModel, ResidualReport]:
    """
    Fits a label function to a sample set.

    Args:
        samples: Inputs and images.
        kernel: Kernel spec; a `sigma0` width is resolved with the sample count N.
        boundary: Boundary values and weights.
        epsilon: Regularization weight, > 0.

    Returns:
        The model (centers are samples.z) and its energy report.

    Raises:
        ConfigError: If epsilon <= 0.
        TopologyMismatchError: If the kernel family does not suit the samples' topology.
        SingularSystemError: If the system matrix is singular.
    """
    if not epsilon > 0:
        raise ConfigError(f"solve_bvp needs epsilon > 0, got {epsilon}")
    spec = resolve_kernel(kernel, samples.N)
    check_topology(spec, samples.topology)

    K = kernel_matrix(spec, samples.z, samples.topology)
    h_bd, w_bd = boundary_arrays(boundary, samples.z)
    c = lu_solve(system_matrix(K, w_bd, epsilon), w_bd * h_bd)

    model = LabelModel(
        kernel=spec,
        topology=samples.topology,
        centers=samples.z,
        coefficients=c,
        provenance=Provenance(
            map=samples.map_used,
            domain=samples.domain,
            N=samples.N,
            epsilon=epsilon,
            sobol_skip=samples.sobol_skip,
            boundary=boundary,
        ),
    )
    report = energy_report(K, c, h_bd, w_bd, epsilon)
    logger.info(
        f"BVP solved: N={samples.N}, sigma={spec.sigma:.4g}, epsilon={epsilon:.3g} -> "
        f"R={report.R:.4e} (E_inv={report.E_inv:.3e}, E_bd={report.E_bd:.3e}, E_K={report.E_K:.3e})"
    )
    return model, report


def residual_components(model: LabelModel, samples: SampleSet, boundary: BoundarySpec, epsilon: float) -> ResidualReport:
    """
    Energy decomposition of a model on its own training samples.

    Raises:
        CenterMismatchError: If the model's centers are not samples.z.
    """
    if model.centers.shape != samples.z.shape or not np.array_equal(model.centers, samples.z):
        raise CenterMismatchError("model centers do not match the sample sequence")
    K = kernel_matrix(model.kernel, samples.z, samples.topology)
    h_bd, w_bd = boundary_arrays(boundary, samples.z)
    return energy_report(K, model.coefficients, h_bd, w_bd, epsilon)
