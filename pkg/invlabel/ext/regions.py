# invlabel/ext/regions.py

"""
Defines regions of phase space used as boundary sets.

Regions are vectorized predicates: called on an (n, 2) array of points they
return a boolean mask. They are defined on the whole phase space, including
points a map has sent outside the sampling domain, and combine with
`&` (intersection), `|` (union) and `~` (complement).
"""

from typing import Tuple

import numpy as np


# --- Base Region Class and Set Operations ---

class BaseRegion:
    """
    Abstract base class for all regions.

    Subclasses implement `contains`, which receives a float array of shape
    (n, 2) and returns a boolean array of shape (n,).
    """
    def __call__(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        return np.asarray(self.contains(pts), dtype=bool)

    def contains(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError("Subclasses must implement the contains method.")

    def __and__(self, other: "BaseRegion") -> "IntersectionRegion":
        if not isinstance(other, BaseRegion):
            return NotImplemented
        return IntersectionRegion(self, other)

    def __or__(self, other: "BaseRegion") -> "UnionRegion":
        if not isinstance(other, BaseRegion):
            return NotImplemented
        return UnionRegion(self, other)

    def __invert__(self) -> "ComplementRegion":
        return ComplementRegion(self)


class IntersectionRegion(BaseRegion):
    def __init__(self, r1: BaseRegion, r2: BaseRegion):
        self.r1 = r1
        self.r2 = r2

    def contains(self, points: np.ndarray) -> np.ndarray:
        return self.r1(points) & self.r2(points)

    def __repr__(self) -> str:
        return f"({self.r1!r} & {self.r2!r})"


class UnionRegion(BaseRegion):
    def __init__(self, r1: BaseRegion, r2: BaseRegion):
        self.r1 = r1
        self.r2 = r2

    def contains(self, points: np.ndarray) -> np.ndarray:
        return self.r1(points) | self.r2(points)

    def __repr__(self) -> str:
        return f"({self.r1!r} | {self.r2!r})"


class ComplementRegion(BaseRegion):
    def __init__(self, r: BaseRegion):
        self.r = r

    def contains(self, points: np.ndarray) -> np.ndarray:
        return ~self.r(points)

    def __repr__(self) -> str:
        return f"~{self.r!r}"


# --- Concrete Regions ---

class EverywhereRegion(BaseRegion):
    """The whole phase space."""
    def contains(self, points: np.ndarray) -> np.ndarray:
        return np.ones(points.shape[0], dtype=bool)

    def __repr__(self) -> str:
        return "Everywhere"


class RectangleRegion(BaseRegion):
    """Closed box x_range × y_range. Coordinates are tested as given (no wrapping)."""
    def __init__(self, x_range: Tuple[float, float], y_range: Tuple[float, float]):
        self.x_range = (float(x_range[0]), float(x_range[1]))
        self.y_range = (float(y_range[0]), float(y_range[1]))

    def contains(self, points: np.ndarray) -> np.ndarray:
        x, y = points[:, 0], points[:, 1]
        return ((x >= self.x_range[0]) & (x <= self.x_range[1])
                & (y >= self.y_range[0]) & (y <= self.y_range[1]))

    def __repr__(self) -> str:
        return f"Rectangle({self.x_range}, {self.y_range})"


class BelowRegion(BaseRegion):
    """Open half-plane y < level."""
    def __init__(self, level: float):
        self.level = float(level)

    def contains(self, points: np.ndarray) -> np.ndarray:
        return points[:, 1] < self.level

    def __repr__(self) -> str:
        return f"Below({self.level})"


class AboveRegion(BaseRegion):
    """Open half-plane y > level."""
    def __init__(self, level: float):
        self.level = float(level)

    def contains(self, points: np.ndarray) -> np.ndarray:
        return points[:, 1] > self.level

    def __repr__(self) -> str:
        return f"Above({self.level})"


# --- Regions Object ---

class Regions:
    """
    Collection of region classes and common constructions.

    Usage:
        from invlabel.ext.regions import regions

        gamma = ~regions.Rectangle((-0.75, 0.75), (-0.75, 0.75))
        strips = regions.strips(a=0.0, b=1.0, beta=0.01)
    """
    EVERYWHERE = EverywhereRegion()

    Rectangle = RectangleRegion
    Below = BelowRegion
    Above = AboveRegion

    @staticmethod
    def outside_box(x_range: Tuple[float, float], y_range: Tuple[float, float]) -> BaseRegion:
        """The complement of a closed box."""
        return ComplementRegion(RectangleRegion(x_range, y_range))

    @staticmethod
    def strips(a: float, b: float, beta: float) -> BaseRegion:
        """Union of the half-strips y < a + beta and y > b - beta."""
        return UnionRegion(BelowRegion(a + beta), AboveRegion(b - beta))


regions = Regions()
