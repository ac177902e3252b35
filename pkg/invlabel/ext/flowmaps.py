# invlabel/ext/flowmaps.py

"""
ODE-backed maps: the pendulum, the periodically perturbed pendulum and
return maps of user-supplied vector fields.
"""

import logging
import math
from typing import Callable, Tuple

import numpy as np

from .basemap import FlowMap
from ..constants import Topology, PENDULUM_PERIOD, PERTURBED_PENDULUM_PERIOD
from ..error import ConfigError, DimensionError
from ..models import IntegratorConfig

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


# --- Vector Fields ---

def pendulum_field(t: np.ndarray, y: np.ndarray) -> np.ndarray:
    """x' = y, y' = -sin(2 pi x)."""
    return np.column_stack((y[:, 1], -np.sin(TWO_PI * y[:, 0])))


def perturbed_pendulum_field(t: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    Hamilton's equations of
    H(x, y, t) = y²/2 - cos(x)/4 - (3 x y sin 2t + 0.7 x y sin 3t) / 20.
    """
    x, p = y[:, 0], y[:, 1]
    drive = (3.0 * np.sin(2.0 * t) + 0.7 * np.sin(3.0 * t)) / 20.0
    return np.column_stack((p - x * drive, -0.25 * np.sin(x) + p * drive))


def pendulum_hamiltonian(points: np.ndarray) -> np.ndarray:
    """H = y²/2 - cos(2 pi x) / (2 pi), conserved by the pendulum flow."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    return 0.5 * pts[:, 1] ** 2 - np.cos(TWO_PI * pts[:, 0]) / TWO_PI


def perturbed_pendulum_hamiltonian(points: np.ndarray, t: float = 0.0) -> np.ndarray:
    """The time-dependent perturbed-pendulum Hamiltonian at time t."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * y ** 2 - 0.25 * np.cos(x) - x * y * (3.0 * math.sin(2.0 * t) + 0.7 * math.sin(3.0 * t)) / 20.0


# --- Maps ---

class PendulumMap(FlowMap):
    """Time-sqrt(2) flow of the pendulum on the cylinder."""

    def __init__(self, integrator: IntegratorConfig, period: float = PENDULUM_PERIOD):
        super().__init__((0.0, period), integrator, Topology.CYLINDER)

    def field(self, t: np.ndarray, y: np.ndarray) -> np.ndarray:
        return pendulum_field(t, y)


class PerturbedPendulumMap(FlowMap):
    """Time-2pi return map of the perturbed pendulum on the plane."""

    def __init__(self, integrator: IntegratorConfig, period: float = PERTURBED_PENDULUM_PERIOD):
        super().__init__((0.0, period), integrator, Topology.PLANE)

    def field(self, t: np.ndarray, y: np.ndarray) -> np.ndarray:
        return perturbed_pendulum_field(t, y)


class FieldLineMap(FlowMap):
    """
    Return map of an arbitrary time-dependent planar field, for example
    field-line tracing between two toroidal cross-sections.

    Attributes:
        user_field (Callable): The vectorized field `f(t, y) -> dy`.
    """

    def __init__(
        self,
        field: Callable[[np.ndarray, np.ndarray], np.ndarray],
        t_span: Tuple[float, float],
        integrator: IntegratorConfig,
        topology: Topology = Topology.PLANE,
    ):
        if not callable(field):
            raise ConfigError("FieldLineMap 'field' must be callable.")
        super().__init__(t_span, integrator, topology)
        self.user_field = field

    def field(self, t: np.ndarray, y: np.ndarray) -> np.ndarray:
        dy = np.asarray(self.user_field(t, y), dtype=float)
        if dy.shape != y.shape:
            raise DimensionError(f"user field returned shape {dy.shape}, expected {y.shape}")
        return dy

    def __repr__(self) -> str:
        name = getattr(self.user_field, "__qualname__", repr(self.user_field))
        return f"FieldLineMap({name}, t_span={self.t_span}, topology={self.topology})"
