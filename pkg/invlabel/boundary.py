# invlabel/boundary.py

"""
Boundary value and weight functions h_bd, w_bd.

- indicator strips: h_bd = ha 1{y < a + beta} + hb 1{y > b - beta}, w_bd the sum of the indicators
- smoothed strips: h_bd = (ha + hb)/2 + (hb - ha)/2 tanh((2y - a - b) / (2 alpha)),
  w_bd = sigmoid((y - b + beta) / alpha) + sigmoid(-(y - a - beta) / alpha)
- zero region: h_bd = 0, w_bd = indicator of the region

All forms are defined on the whole phase space and depend on y only for the
strip variants.
"""

import logging
import math
from typing import Any, Tuple, Union

import numpy as np
from scipy.special import expit

from .error import ConfigError, DimensionError
from .geometry import as_points, build_region
from .models import BoundarySpec, IndicatorBoundarySpec, SmoothedBoundarySpec, ZeroRegionBoundarySpec

logger = logging.getLogger(__name__)


def boundary_arrays(spec: BoundarySpec, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """h_bd and w_bd at every row of an (n, 2) array."""
    y = points[:, 1]
    if isinstance(spec, IndicatorBoundarySpec):
        lower = (y < spec.a + spec.beta).astype(float)
        upper = (y > spec.b - spec.beta).astype(float)
        return spec.ha * lower + spec.hb * upper, lower + upper
    if isinstance(spec, SmoothedBoundarySpec):
        mid = 0.5 * (spec.ha + spec.hb)
        half = 0.5 * (spec.hb - spec.ha)
        h = mid + half * np.tanh((2.0 * y - spec.a - spec.b) / (2.0 * spec.alpha))
        w = expit((y - spec.b + spec.beta) / spec.alpha) + expit(-(y - spec.a - spec.beta) / spec.alpha)
        return h, w
    if isinstance(spec, ZeroRegionBoundarySpec):
        w = build_region(spec.region)(points).astype(float)
        return np.zeros_like(w), w
    raise ConfigError(f"Unknown boundary specification: {spec!r}")


def eval_boundary(spec: BoundarySpec, p: Any) -> Tuple[Union[float, np.ndarray], Union[float, np.ndarray]]:
    """(h_bd, w_bd) at a point, or arrays of both for an (n, 2) array of points."""
    pts, single = as_points(p)
    h, w = boundary_arrays(spec, pts)
    if single:
        return float(h[0]), float(w[0])
    return h, w


def boundary_energy(h_values: np.ndarray, h_bd_values: np.ndarray, w_bd_values: np.ndarray) -> float:
    """
    E_bd = sum_n w_bd[n] (h[n] - h_bd[n])².

    Raises:
        DimensionError: If the three vectors differ in length.
    """
    h = np.asarray(h_values, dtype=float)
    hb = np.asarray(h_bd_values, dtype=float)
    w = np.asarray(w_bd_values, dtype=float)
    if not h.shape == hb.shape == w.shape or h.ndim != 1:
        raise DimensionError(f"boundary_energy needs equal-length vectors, got {h.shape}, {hb.shape}, {w.shape}")
    d = h - hb
    return math.fsum(w * d * d)
