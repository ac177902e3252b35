# invlabel/kernels.py

"""
Kernel definitions, kernel-matrix assembly and the density rule for widths.

Three families are available:

- squared exponential:   exp(-|p - q|² / (2 sigma²))
- inverse multiquadric:  1 / sqrt(1 + |p - q|² / sigma²)
- periodic product:      exp(-sin²(pi dx) / (2 pi sigma²) - dy² / (2 sigma²))

The periodic product kernel is periodic in x only and is the one kernel
allowed on the cylinder. Its x term is divided by 2 pi sigma², not 2 sigma²;
that asymmetry is part of the kernel's definition and kept as is.
"""

import logging
import math
from typing import Any, Optional, Union

import numpy as np

from .constants import KernelFamily, Topology
from .error import ConfigError, DimensionError, TopologyMismatchError
from .geometry import as_points
from .models import KernelSpec

logger = logging.getLogger(__name__)


def sigma_from_density(sigma0: float, N: int) -> float:
    """Width that shrinks with the sampling density: sigma0 / sqrt(N)."""
    if N < 1 or not sigma0 > 0:
        raise ConfigError(f"sigma_from_density needs N >= 1 and sigma0 > 0, got N={N}, sigma0={sigma0}")
    return sigma0 / math.sqrt(N)


def resolve_kernel(spec: KernelSpec, N: Optional[int] = None) -> KernelSpec:
    """
    Returns a spec with an absolute width.

    A `sigma0` spec is converted with `sigma_from_density`, which needs N.
    """
    if spec.sigma is not None:
        return spec
    if N is None:
        raise ConfigError("a density-scaled kernel (sigma0) needs the sample count N to resolve its width")
    return KernelSpec(family=spec.family, sigma=sigma_from_density(spec.sigma0, N))


def check_topology(spec: KernelSpec, topology: Topology) -> None:
    """
    Raises:
        TopologyMismatchError: If a radial kernel is used on the cylinder or
                               the periodic kernel on the plane.
    """
    periodic = spec.family == KernelFamily.PERIODIC_PRODUCT
    cylinder = topology == Topology.CYLINDER
    if periodic != cylinder:
        raise TopologyMismatchError(
            f"Kernel family '{KernelFamily(spec.family).value}' cannot be used on the "
            f"{Topology(topology).value}; use 'periodic_product' exactly on the cylinder."
        )


def _width(spec: KernelSpec) -> float:
    if spec.sigma is None:
        raise ConfigError("kernel width is unresolved; call resolve_kernel(spec, N) first")
    return float(spec.sigma)


def kernel_values(spec: KernelSpec, dx: np.ndarray, dy: np.ndarray) -> np.ndarray:
    """Kernel values for broadcastable arrays of raw separations."""
    sigma = _width(spec)
    family = KernelFamily(spec.family)
    if family == KernelFamily.SQUARED_EXPONENTIAL:
        return np.exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma))
    if family == KernelFamily.INVERSE_MULTIQUADRIC:
        return 1.0 / np.sqrt(1.0 + (dx * dx + dy * dy) / (sigma * sigma))
    if family == KernelFamily.PERIODIC_PRODUCT:
        s = np.sin(np.pi * dx)
        return np.exp(-(s * s) / (2.0 * np.pi * sigma * sigma) - (dy * dy) / (2.0 * sigma * sigma))
    raise ConfigError(f"Unknown kernel family: {spec.family!r}")


def eval_kernel(spec: KernelSpec, p: Any, q: Any, topology: Topology) -> Union[float, np.ndarray]:
    """
    K(p, q). Points broadcast: two single points give a float, arrays of
    equal length give the elementwise values.
    """
    check_topology(spec, topology)
    pp, single_p = as_points(p)
    qq, single_q = as_points(q)
    values = kernel_values(spec, pp[:, 0] - qq[:, 0], pp[:, 1] - qq[:, 1])
    return float(values[0]) if single_p and single_q else values


def kernel_block(spec: KernelSpec, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Cross-kernel matrix with entries K(P_i, Q_j), shape (len P, len Q)."""
    dx = P[:, 0][:, None] - Q[:, 0][None, :]
    dy = P[:, 1][:, None] - Q[:, 1][None, :]
    return kernel_values(spec, dx, dy)


def kernel_matrix(spec: KernelSpec, points: Any, topology: Topology) -> np.ndarray:
    """
    Kernel matrix K_ZZ of a point list.

    The lower triangle is copied from the upper one so the result is
    symmetric bit for bit; the diagonal is exactly one.

    Raises:
        DimensionError: If `points` is empty.
        TopologyMismatchError: See `check_topology`.
    """
    check_topology(spec, topology)
    pts, _ = as_points(points)
    if pts.shape[0] == 0:
        raise DimensionError("kernel_matrix needs at least one point")
    K = kernel_block(spec, pts, pts)
    K = np.triu(K) + np.triu(K, 1).T
    logger.debug(f"Assembled {K.shape[0]}x{K.shape[0]} {KernelFamily(spec.family).value} kernel matrix (sigma={spec.sigma})")
    return K
