# invlabel/validation.py

"""
Weighted Birkhoff averages and the normalized sum-of-squares validation score.

For an exactly invariant h the weighted Birkhoff average WB[h](x) equals
h(x), so

    S = sum_j (h(x_j) - WB[h](x_j))^2 / sum_j (h(x_j) - mean h)^2

is 0 for a perfect label and about 1 when the averages collapse to the mean.
"""

import logging
import math
from typing import Any, Callable, Union

import numpy as np

from .constants import DEFAULT_VALIDATION_SKIP
from .error import ConfigError, DegenerateError, DimensionError
from .geometry import as_points, sobol_sample
from .label import eval_label
from .maps import MapLike, build_map
from .models import BirkhoffConfig, Domain, LabelModel, ValidationReport

logger = logging.getLogger(__name__)

Observable = Union[LabelModel, Callable[[np.ndarray], np.ndarray]]


def _as_callable(f: Observable) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(f, LabelModel):
        return lambda pts: eval_label(f, pts)
    if callable(f):
        return f
    raise ConfigError(f"Cannot use {type(f).__name__} as an observable")


def birkhoff_weights(T: int) -> np.ndarray:
    """
    Normalized bump weights w_t = g(s_t) / sum g, s_t = (t + 1) / (T + 1), t = 0..T-1,
    with g(s) = exp(-1 / (s (1 - s))).

    The weights are symmetric in t and sum to 1.
    """
    if T < 1:
        raise ConfigError(f"Birkhoff averages need T >= 1, got {T}")
    s = (np.arange(T) + 1.0) / (T + 1.0)
    g = np.exp(-1.0 / (s * (1.0 - s)))
    # (t + 1)/(T + 1) and 1 - that round differently; average the mirror images
    g = 0.5 * (g + g[::-1])
    return g / math.fsum(g)


def weighted_birkhoff(map_: MapLike, f: Observable, x0: Any, cfg: BirkhoffConfig) -> Union[float, np.ndarray]:
    """
    sum_t w_t f(F^t(x0)) over t = 0..T-1, using T - 1 map applications.

    Args:
        map_: The map F.
        f: Observable taking an (n, 2) array, or a label model.
        x0: A start point, or an (m, 2) array of start points averaged in one batch.
        cfg: Average length and weight kind.

    Returns:
        A float for a single start point, an (m,) array otherwise.
    """
    fn = _as_callable(f)
    pts, single = as_points(x0)
    w = birkhoff_weights(cfg.T)
    orbit = build_map(map_).iterate(pts, cfg.T - 1)
    values = np.asarray(fn(orbit.reshape(-1, 2)), dtype=float).reshape(cfg.T, pts.shape[0])
    averages = w @ values
    return float(averages[0]) if single else averages


def score_from_pairs(h: np.ndarray, wb: np.ndarray) -> float:
    """
    S from precomputed (h, WB[h]) pairs.

    Raises:
        DimensionError: If the arrays differ in length or hold fewer than 2 values.
        DegenerateError: If h is constant over the points.
    """
    h = np.asarray(h, dtype=float)
    wb = np.asarray(wb, dtype=float)
    if h.shape != wb.shape or h.ndim != 1 or h.shape[0] < 2:
        raise DimensionError(f"score needs two equal-length vectors of >= 2 values, got {h.shape}, {wb.shape}")
    mean = math.fsum(h) / h.shape[0]
    denom = math.fsum((h - mean) ** 2)
    if denom == 0.0:
        raise DegenerateError("validation score is undefined for a label that is constant on the validation points")
    return math.fsum((h - wb) ** 2) / denom


def validation_score(
    label: Observable,
    map_: MapLike,
    domain: Domain,
    J: int,
    cfg: BirkhoffConfig,
    skip: int = DEFAULT_VALIDATION_SKIP,
) -> ValidationReport:
    """
    Scores a label on J Sobol points drawn from a stream independent of the training points.

    Args:
        label: A label model or any observable.
        map_: The map the label should be invariant under.
        domain: Where the validation points are drawn.
        J: Number of validation points (>= 2).
        cfg: Birkhoff average settings.
        skip: Sobol skip of the validation stream.

    Raises:
        ConfigError: If J < 2 or the map's topology differs from the domain's.
        DegenerateError: If the label is constant on the validation points.
    """
    if J < 2:
        raise ConfigError(f"validation needs J >= 2, got {J}")
    fmap = build_map(map_)
    if fmap.topology != domain.topology:
        raise ConfigError(f"Map {fmap!r} does not act on the {domain.topology} domain it is validated on")
    fn = _as_callable(label)
    x = sobol_sample(domain, J, skip)
    h = np.asarray(fn(x), dtype=float)
    wb = weighted_birkhoff(fmap, fn, x, cfg)
    S = score_from_pairs(h, wb)
    logger.info(f"Validation score S={S:.4e} over J={J} points, T={cfg.T}")
    return ValidationReport(S=S, pairs=[(float(a), float(b)) for a, b in zip(h, wb)], J=J, T=cfg.T)
