# invlabel/geometry.py

"""
Phase-space helpers: point coercion, wrapping, domain and region membership,
separations and Sobol sampling.

Point arguments may be a `State`, a length-2 sequence or an (n, 2) array.
Single points give scalar results, arrays give vectorized results.
"""

import logging
import warnings
from typing import Any, Tuple, Union

import numpy as np
from scipy.stats import qmc

from .constants import Topology, DEFAULT_SOBOL_SKIP
from .error import DimensionError, ConfigError
from .ext.regions import (BaseRegion, RectangleRegion, BelowRegion, AboveRegion,
                          ComplementRegion, UnionRegion, IntersectionRegion)
from .models import (State, Domain, RegionSpec, RectangleRegionSpec, BelowRegionSpec,
                     AboveRegionSpec, ComplementRegionSpec, UnionRegionSpec,
                     IntersectionRegionSpec, wrap_unit)

logger = logging.getLogger(__name__)

PointsLike = Union[State, np.ndarray, Tuple[float, float]]


def as_points(p: Any) -> Tuple[np.ndarray, bool]:
    """
    Coerces a point argument to a float array of shape (n, 2).

    Returns:
        The array and a flag telling whether the input was a single point.

    Raises:
        DimensionError: If the input is not a point or a list of points.
    """
    if isinstance(p, State):
        return p.as_array()[None, :], True
    arr = np.asarray(p, dtype=float)
    if arr.ndim == 1:
        if arr.shape != (2,):
            raise DimensionError(f"a point has 2 coordinates, got shape {arr.shape}")
        return arr[None, :], True
    if arr.ndim == 2 and arr.shape[1] == 2:
        return arr, False
    raise DimensionError(f"points must have shape (n, 2), got {arr.shape}")


def wrap(p: PointsLike, topology: Topology) -> Any:
    """Canonical representative on the cylinder (x in [0, 1)); identity on the plane."""
    if isinstance(p, State):
        return p.wrapped(topology)
    pts, single = as_points(p)
    if topology == Topology.CYLINDER:
        pts = np.column_stack((wrap_unit(pts[:, 0]), pts[:, 1]))
    return pts[0] if single else pts


def in_domain(p: PointsLike, d: Domain) -> Union[bool, np.ndarray]:
    """Closed-interval membership after wrapping."""
    pts, single = as_points(p)
    pts = wrap(pts, d.topology)
    x, y = pts[:, 0], pts[:, 1]
    mask = ((x >= d.x_range[0]) & (x <= d.x_range[1])
            & (y >= d.y_range[0]) & (y <= d.y_range[1]))
    return bool(mask[0]) if single else mask


def build_region(spec: Union[RegionSpec, BaseRegion]) -> BaseRegion:
    """Turns a region specification into a region predicate."""
    if isinstance(spec, BaseRegion):
        return spec
    if isinstance(spec, RectangleRegionSpec):
        return RectangleRegion(spec.x_range, spec.y_range)
    if isinstance(spec, BelowRegionSpec):
        return BelowRegion(spec.y)
    if isinstance(spec, AboveRegionSpec):
        return AboveRegion(spec.y)
    if isinstance(spec, ComplementRegionSpec):
        return ComplementRegion(build_region(spec.region))
    if isinstance(spec, (UnionRegionSpec, IntersectionRegionSpec)):
        combine = UnionRegion if isinstance(spec, UnionRegionSpec) else IntersectionRegion
        parts = [build_region(r) for r in spec.regions]
        region = parts[0]
        for part in parts[1:]:
            region = combine(region, part)
        return region
    raise ConfigError(f"Unknown region specification: {spec!r}")


def in_region(p: PointsLike, r: Union[RegionSpec, BaseRegion]) -> Union[bool, np.ndarray]:
    """Exact predicate evaluation, defined on all of phase space."""
    pts, single = as_points(p)
    mask = build_region(r)(pts)
    return bool(mask[0]) if single else mask


def separation(p: PointsLike, q: PointsLike, topology: Topology) -> Tuple[Any, Any]:
    """
    Raw componentwise difference p - q.

    On the cylinder dx is not reduced: the periodic kernel only uses it
    through sin²(pi dx), which has period 1.
    """
    pp, single_p = as_points(p)
    qq, single_q = as_points(q)
    dx = pp[:, 0] - qq[:, 0]
    dy = pp[:, 1] - qq[:, 1]
    if single_p and single_q:
        return float(dx[0]), float(dy[0])
    return dx, dy


def sobol_sample(domain: Domain, n: int, skip: int = DEFAULT_SOBOL_SKIP) -> np.ndarray:
    """
    Deterministic low-discrepancy sample of a domain.

    Takes the unscrambled two-dimensional Sobol sequence (Joe-Kuo direction
    numbers), drops its first `skip` entries and scales the rest affinely onto
    the domain rectangle.

    Args:
        domain: Target domain. On the cylinder x covers the full period.
        n: Number of points (n >= 0).
        skip: Leading sequence entries to drop. The default drops the
              all-zeros point so samples avoid the domain corner. Blocks of
              2^m points are perfectly stratified only when `skip` is a
              multiple of 2^m, so the default trades that balance away.

    Returns:
        Array of shape (n, 2).
    """
    if n < 0 or skip < 0:
        raise ConfigError(f"Sobol sampling needs n >= 0 and skip >= 0, got n={n}, skip={skip}")
    if n == 0:
        return np.empty((0, 2), dtype=float)
    sampler = qmc.Sobol(d=2, scramble=False)
    with warnings.catch_warnings():
        # balance warnings for non-power-of-two counts
        warnings.simplefilter("ignore", UserWarning)
        if skip:
            sampler.fast_forward(skip)
        unit = sampler.random(n)
    lower = np.array([domain.x_range[0], domain.y_range[0]], dtype=float)
    upper = np.array([domain.x_range[1], domain.y_range[1]], dtype=float)
    logger.debug(f"Sobol sample: n={n}, skip={skip}, box={lower.tolist()}..{upper.tolist()}")
    return qmc.scale(unit, lower, upper)
