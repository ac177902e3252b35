# invlabel/maps.py

"""
Built-in symplectic maps and the functional entry points for map evaluation
and iteration.

`build_map` turns any `MapSpec` into a callable `BaseMap`; the functional
helpers below accept either form.
"""

import logging
import math
from typing import Any, Optional, Union

import numpy as np

from .constants import Topology
from .error import ConfigError
from .ext.basemap import BaseMap
from .ext.flowmaps import (PendulumMap, PerturbedPendulumMap, FieldLineMap,
                           pendulum_hamiltonian, perturbed_pendulum_hamiltonian)
from .models import (MapSpec, StandardMapSpec, RotationMapSpec, PendulumMapSpec,
                     PerturbedPendulumMapSpec, OdeFieldMapSpec, IntegratorConfig)

logger = logging.getLogger(__name__)

MapLike = Union[MapSpec, BaseMap]


class StandardMap(BaseMap):
    """
    Chirikov standard map on the cylinder:
    b' = b - k/(2 pi) sin(2 pi a), a' = a + b' (mod 1). b is not wrapped.
    """
    topology = Topology.CYLINDER

    def __init__(self, k: float):
        self.k = float(k)

    def apply(self, points: np.ndarray) -> np.ndarray:
        a, b = points[:, 0], points[:, 1]
        b_new = b - self.k / (2.0 * math.pi) * np.sin(2.0 * math.pi * a)
        return np.column_stack((a + b_new, b_new))

    def __repr__(self) -> str:
        return f"StandardMap(k={self.k})"


class RotationMap(BaseMap):
    """Rigid rotation a' = a + omega (mod 1), b' = b."""
    topology = Topology.CYLINDER

    def __init__(self, omega: float = 0.0):
        self.omega = float(omega)

    def apply(self, points: np.ndarray) -> np.ndarray:
        return np.column_stack((points[:, 0] + self.omega, points[:, 1]))

    def __repr__(self) -> str:
        return f"RotationMap(omega={self.omega})"


def build_map(spec: MapLike) -> BaseMap:
    """
    Instantiates the map described by a specification.

    Args:
        spec: A map specification, or an already built map (returned as is).

    Raises:
        ConfigError: For an unknown specification type.
    """
    if isinstance(spec, BaseMap):
        return spec
    if isinstance(spec, StandardMapSpec):
        return StandardMap(spec.k)
    if isinstance(spec, RotationMapSpec):
        return RotationMap(spec.omega)
    if isinstance(spec, PendulumMapSpec):
        return PendulumMap(spec.integrator, spec.period)
    if isinstance(spec, PerturbedPendulumMapSpec):
        return PerturbedPendulumMap(spec.integrator, spec.period)
    if isinstance(spec, OdeFieldMapSpec):
        return FieldLineMap(spec.field, spec.t_span, spec.integrator, spec.topology)
    raise ConfigError(f"Unknown map specification: {spec!r}")


# --- Functional Entry Points ---

def standard_map(s: Any, k: float) -> Any:
    return StandardMap(k)(s)


def pendulum_map(s: Any, cfg: Optional[IntegratorConfig] = None) -> Any:
    return PendulumMap(cfg or IntegratorConfig())(s)


def perturbed_pendulum_map(s: Any, cfg: Optional[IntegratorConfig] = None) -> Any:
    return PerturbedPendulumMap(cfg or IntegratorConfig())(s)


def iterate(map_: MapLike, s0: Any, T: int) -> np.ndarray:
    """[s0, F(s0), ..., F^T(s0)]; see `BaseMap.iterate`."""
    return build_map(map_).iterate(s0, T)
