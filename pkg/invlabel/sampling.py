# invlabel/sampling.py

"""
Sample sets and the invariance difference operator.

A `SampleSet` holds z = [x_1..x_N, F(x_1)..F(x_N)]. The operator
G = (I | -I) compares every input with its image; it is never stored, and
G^T G is applied in its 2x2 block form [[I, -I], [-I, I]].
"""

import logging
import math
from typing import Optional

import numpy as np
from pydantic import ValidationError

from .constants import DEFAULT_SOBOL_SKIP, Topology
from .error import ConfigError, DimensionError, FileIOError
from .ext.basemap import BaseMap
from .files import read_csv, read_json, write_csv, write_json
from .geometry import sobol_sample
from .maps import MapLike, build_map
from .models import Domain, MapSpec, SampleCacheInfo, SampleSet

logger = logging.getLogger(__name__)

SAMPLES_HEADER = ["index", "x", "y", "image_x", "image_y"]


def build_samples(map_: MapLike, domain: Domain, N: int, skip: int = DEFAULT_SOBOL_SKIP) -> SampleSet:
    """
    Sobol-samples N inputs and applies the map once to each.

    All N map evaluations run as one vectorized batch; the image of input n
    is stored at index N + n.

    Raises:
        ConfigError: If N < 1 or the map's topology differs from the domain's.
        IntegrationError: If a map evaluation fails; `sample_index` is the
                          0-based index of the offending input.
    """
    if N < 1:
        raise ConfigError(f"build_samples needs N >= 1, got {N}")
    fmap = build_map(map_)
    if fmap.topology != domain.topology:
        raise ConfigError(
            f"Map {fmap!r} acts on the {Topology(fmap.topology).value} but the domain is a "
            f"{Topology(domain.topology).value} domain"
        )
    inputs = sobol_sample(domain, N, skip)
    images = fmap(inputs)
    logger.info(f"Built {N} samples of {fmap!r} (Sobol skip {skip})")
    return SampleSet(
        z=np.vstack((inputs, images)),
        N=N,
        domain=domain,
        map_used=None if isinstance(map_, BaseMap) else map_,
        sobol_skip=skip,
    )


def verify_samples(samples: SampleSet, map_: MapLike, atol: float = 0.0) -> bool:
    """True if every stored image equals the map applied to its input (within atol)."""
    images = build_map(map_)(samples.inputs)
    return bool(np.all(np.abs(images - samples.images) <= atol))


# --- Invariance Operator ---

def _half(v: np.ndarray, what: str) -> int:
    if v.ndim != 1 or v.shape[0] % 2:
        raise DimensionError(f"{what} must be a vector of even length 2N, got shape {v.shape}")
    return v.shape[0] // 2


def apply_GInv(v: np.ndarray) -> np.ndarray:
    """G v = v[:N] - v[N:] for a vector of length 2N."""
    v = np.asarray(v, dtype=float)
    N = _half(v, "apply_GInv input")
    return v[:N] - v[N:]


def apply_GInvT(w: np.ndarray) -> np.ndarray:
    """G^T w = (w; -w) for a vector of length N."""
    w = np.asarray(w, dtype=float)
    if w.ndim != 1:
        raise DimensionError(f"apply_GInvT input must be a vector, got shape {w.shape}")
    return np.concatenate((w, -w))


def apply_GtG(v: np.ndarray) -> np.ndarray:
    """G^T G v = (v[:N] - v[N:]; v[N:] - v[:N])."""
    d = apply_GInv(v)
    return np.concatenate((d, -d))


def invariance_energy(h_values: np.ndarray) -> float:
    """E_inv = sum_n (h[n] - h[N + n])²."""
    d = apply_GInv(h_values)
    return math.fsum(d * d)


# --- CSV Cache ---

def cache_info_path(path: str) -> str:
    return path + ".meta.json"


def save_samples(samples: SampleSet, path: str) -> None:
    """
    Writes a sample set as CSV rows (index, x, y, image_x, image_y).

    When the samples know their map spec, a `<path>.meta.json` file records
    the map, domain, N and Sobol skip so a later run can tell whether the
    cache still fits its config.
    """
    rows = [
        (n, float(x[0]), float(x[1]), float(fx[0]), float(fx[1]))
        for n, (x, fx) in enumerate(zip(samples.inputs, samples.images))
    ]
    write_csv(path, SAMPLES_HEADER, rows)
    if samples.map_used is not None:
        info = SampleCacheInfo(map=samples.map_used, domain=samples.domain, N=samples.N,
                               sobol_skip=samples.sobol_skip)
        write_json(cache_info_path(path), info.model_dump(mode="json"))


def cache_matches(path: str, map_: MapSpec, domain: Domain, N: int, skip: int) -> bool:
    """True if the cache at `path` was written for exactly this map, domain, N and skip."""
    try:
        raw = read_json(cache_info_path(path))
        info = SampleCacheInfo.model_validate(raw)
    except (FileIOError, ValueError, ValidationError) as e:
        logger.info(f"No usable metadata for sample cache {path}: {e}")
        return False
    expected = SampleCacheInfo(map=map_, domain=domain, N=N, sobol_skip=skip)
    return info == expected


def load_samples(
    path: str,
    domain: Domain,
    map_used: Optional[MapSpec] = None,
    sobol_skip: int = DEFAULT_SOBOL_SKIP,
) -> SampleSet:
    """
    Reads a sample set written by `save_samples`.

    The file stores points only; the caller supplies the domain and map the
    samples belong to.

    Raises:
        FileIOError: If the file cannot be read or its rows are malformed.
    """
    header, rows = read_csv(path, SAMPLES_HEADER)
    try:
        table = np.array([[float(v) for v in row] for row in rows], dtype=float).reshape(-1, 5)
    except ValueError as e:
        raise FileIOError(f"Malformed sample cache {path}: {e}", path=path) from e
    table = table[np.argsort(table[:, 0], kind="stable")]
    N = table.shape[0]
    if N == 0:
        raise FileIOError(f"Sample cache {path} has no rows", path=path)
    z = np.vstack((table[:, 1:3], table[:, 3:5]))
    logger.info(f"Loaded {N} cached samples from {path}")
    return SampleSet(z=z, N=N, domain=domain, map_used=map_used, sobol_skip=sobol_skip)
