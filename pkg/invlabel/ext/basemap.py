# invlabel/ext/basemap.py

"""
This module defines the abstract base classes for symplectic maps.
"""

import logging
from abc import ABC, abstractmethod
from typing import Any, Tuple

import numpy as np

from ..constants import Topology
from ..error import ConfigError, IntegrationError
from ..geometry import as_points
from ..integrate import rk45_integrate
from ..models import IntegratorConfig, State, wrap_unit

logger = logging.getLogger(__name__)


# --- Base Map Class ---

class BaseMap(ABC):
    """
    Abstract base class for all maps of the phase space into itself.

    Subclasses implement `apply` on an (n, 2) array of points; the base class
    takes care of argument coercion and of wrapping x back into [0, 1) on the
    cylinder.

    Attributes:
        topology (Topology): Phase space the map acts on.
    """
    topology: Topology = Topology.PLANE

    def __call__(self, p: Any) -> Any:
        """
        Applies the map.

        Args:
            p: A `State`, a length-2 sequence or an (n, 2) array.

        Returns:
            The image in the same form as the input.
        """
        pts, single = as_points(p)
        out = self.apply(pts)
        if self.topology == Topology.CYLINDER:
            out = np.column_stack((wrap_unit(out[:, 0]), out[:, 1]))
        if isinstance(p, State):
            return State(x=out[0, 0], y=out[0, 1])
        return out[0] if single else out

    @abstractmethod
    def apply(self, points: np.ndarray) -> np.ndarray:
        """
        Maps every row of an (n, 2) array. Must not modify its input.

        Raises:
            IntegrationError: For ODE-backed maps whose integration fails;
                              `sample_index` names the failing row.
        """
        raise NotImplementedError

    def iterate(self, s0: Any, T: int) -> np.ndarray:
        """
        Orbit [s0, F(s0), ..., F^T(s0)].

        Args:
            s0: Start point(s): a single point or an (m, 2) array.
            T: Number of map applications (T >= 0).

        Returns:
            Array of shape (T + 1, 2) for a single start point, (T + 1, m, 2) for a batch.

        Raises:
            IntegrationError: With `iterate_index` set to the failing application (1-based).
        """
        if T < 0:
            raise ConfigError(f"iterate needs T >= 0, got {T}")
        pts, single = as_points(s0)
        if self.topology == Topology.CYLINDER:
            pts = np.column_stack((wrap_unit(pts[:, 0]), pts[:, 1]))
        orbit = np.empty((T + 1,) + pts.shape, dtype=float)
        orbit[0] = pts
        for t in range(1, T + 1):
            try:
                orbit[t] = self(orbit[t - 1])
            except IntegrationError as e:
                raise IntegrationError(
                    f"Map iterate {t} failed: {e}", sample_index=e.sample_index,
                    iterate_index=t, steps=e.steps,
                ) from e
        return orbit[:, 0, :] if single else orbit

    def __repr__(self) -> str:
        return f"{type(self).__name__}(topology={self.topology})"


class FlowMap(BaseMap):
    """
    Map given by the time-t1 flow of a vector field started at t0.

    Subclasses provide the vectorized field `field(t, y)`.

    Attributes:
        t_span (Tuple[float, float]): Start and end time of the flow.
        integrator (IntegratorConfig): Tolerances of the adaptive integrator.
    """

    def __init__(self, t_span: Tuple[float, float], integrator: IntegratorConfig, topology: Topology):
        if t_span[1] < t_span[0]:
            raise ConfigError(f"t_span must satisfy t0 <= t1, got {t_span}")
        self.t_span = (float(t_span[0]), float(t_span[1]))
        self.integrator = integrator
        self.topology = topology

    @abstractmethod
    def field(self, t: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Right-hand side for times of shape (m,) and states of shape (m, 2)."""
        raise NotImplementedError

    def apply(self, points: np.ndarray) -> np.ndarray:
        return rk45_integrate(self.field, points, self.t_span[0], self.t_span[1], self.integrator)
