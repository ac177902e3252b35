# invlabel/label.py

"""
Label-function evaluation, normalization, grid export and persistence.

Model files are versioned JSON documents:

    {"schema": "label-model/1", "kernel": {...}, "topology": "...",
     "centers": [[x, y], ...], "coefficients": [...], "normalization": 1.0,
     "provenance": {"map": ..., "domain": ..., "N": ..., "epsilon": ..., "sobol_skip": ...}}

Floats are written in their shortest round-trip form, so a saved model
reloads with bit-identical coefficients.
"""

import logging
from typing import Any, Callable, Optional, Tuple, Union

import numpy as np
from pydantic import ValidationError

from .constants import KERNEL_CHUNK_ROWS, MODEL_SCHEMA, PROBE_GRID_SIZE
from .error import ConfigError, DegenerateError, ModelFileError, SchemaVersionError
from .files import read_json, write_csv, write_json
from .geometry import as_points
from .kernels import check_topology, kernel_block
from .maps import MapLike, build_map
from .models import Domain, LabelModel, LabelModelDocument, SampleSet

logger = logging.getLogger(__name__)


# --- Evaluation ---

def _raw_values(model: LabelModel, pts: np.ndarray) -> np.ndarray:
    """sum_n c_n K(p, z_n) without the normalization factor, in row chunks."""
    out = np.empty(pts.shape[0], dtype=float)
    for start in range(0, pts.shape[0], KERNEL_CHUNK_ROWS):
        stop = start + KERNEL_CHUNK_ROWS
        out[start:stop] = kernel_block(model.kernel, pts[start:stop], model.centers) @ model.coefficients
    return out


def eval_label(model: LabelModel, p: Any) -> Union[float, np.ndarray]:
    """h(p) = normalization * sum_n c_n K(p, z_n) for a point or an (n, 2) array."""
    check_topology(model.kernel, model.topology)
    pts, single = as_points(p)
    values = _raw_values(model, pts)
    if model.normalization != 1.0:
        values = model.normalization * values
    return float(values[0]) if single else values


def grid_nodes(domain: Domain, nx: int, ny: int) -> np.ndarray:
    """
    Cell-centre nodes of a uniform nx × ny grid, row-major with y outer.

    Cell centres keep a cylinder grid from duplicating the x = 0 ≡ 1 column.
    """
    if nx < 2 or ny < 2:
        raise ConfigError(f"grids need nx, ny >= 2, got nx={nx}, ny={ny}")
    (x0, x1), (y0, y1) = domain.x_range, domain.y_range
    xs = x0 + (np.arange(nx) + 0.5) * (x1 - x0) / nx
    ys = y0 + (np.arange(ny) + 0.5) * (y1 - y0) / ny
    X, Y = np.meshgrid(xs, ys)
    return np.column_stack((X.ravel(), Y.ravel()))


def _model_domain(model: LabelModel, domain: Optional[Domain]) -> Domain:
    if domain is not None:
        return domain
    if model.provenance is not None and model.provenance.domain is not None:
        return model.provenance.domain
    raise ConfigError("no domain given and the model carries none in its provenance")


def normalize_maxabs(model: LabelModel, domain: Optional[Domain] = None,
                     resolution: int = PROBE_GRID_SIZE) -> LabelModel:
    """
    Sets the normalization so max |h| over a reference grid of the domain is 1.

    The scale is computed from the unnormalized sum, so normalizing twice
    gives the same model as normalizing once.

    Raises:
        DegenerateError: If the model vanishes on the whole reference grid.
    """
    check_topology(model.kernel, model.topology)
    nodes = grid_nodes(_model_domain(model, domain), resolution, resolution)
    peak = float(np.max(np.abs(_raw_values(model, nodes))))
    if peak == 0.0:
        raise DegenerateError("cannot normalize a label model that is identically zero on the reference grid")
    logger.debug(f"Max-abs normalization: peak {peak:.6e} on a {resolution}x{resolution} grid")
    return model.model_copy(update={"normalization": 1.0 / peak})


def eval_grid(
    model: LabelModel,
    domain: Optional[Domain] = None,
    nx: int = PROBE_GRID_SIZE,
    ny: int = PROBE_GRID_SIZE,
    path: Optional[str] = None,
    advect: Optional[Tuple[MapLike, int]] = None,
) -> np.ndarray:
    """
    Label values on cell-centre grid nodes, optionally written as CSV (x, y, h).

    Args:
        model: The label model.
        domain: Grid domain; defaults to the model's training domain.
        nx, ny: Grid resolution (>= 2 each).
        path: If given, CSV destination. Rows are row-major with y outer.
        advect: Optional (map, T): evaluate h(F^T(node)) instead of h(node),
                showing how far the label is from invariant on the grid.

    Returns:
        Array of shape (ny, nx).
    """
    nodes = grid_nodes(_model_domain(model, domain), nx, ny)
    where = nodes
    if advect is not None:
        map_, T = advect
        where = build_map(map_).iterate(nodes, T)[-1]
    values = eval_label(model, where)
    if path is not None:
        write_csv(path, ["x", "y", "h"], zip(nodes[:, 0], nodes[:, 1], values))
    return values.reshape(ny, nx)


def export_sample_values(
    model: LabelModel,
    samples: SampleSet,
    path: str,
    observable: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> None:
    """
    Writes h at the training inputs (columns index, x, y, h), plus a reference
    observable such as a Hamiltonian when given.
    """
    pts = samples.inputs
    h = eval_label(model, pts)
    header = ["index", "x", "y", "h"]
    columns = [np.arange(samples.N), pts[:, 0], pts[:, 1], h]
    if observable is not None:
        header.append("observable")
        columns.append(np.asarray(observable(pts), dtype=float))
    write_csv(path, header, zip(*columns))


# --- Persistence ---

def save_model(model: LabelModel, path: str) -> None:
    """Writes a model file (schema `label-model/1`)."""
    doc = LabelModelDocument(
        schema=MODEL_SCHEMA,
        kernel=model.kernel,
        topology=model.topology,
        centers=model.centers.tolist(),
        coefficients=model.coefficients.tolist(),
        normalization=float(model.normalization),
        provenance=model.provenance,
    )
    write_json(path, doc.model_dump(mode="json", by_alias=True, exclude_none=True))
    logger.info(f"Saved label model ({model.coefficients.shape[0]} centers) to {path}")


def load_model(path: str) -> LabelModel:
    """
    Reads a model file.

    Raises:
        FileIOError: If the file cannot be read.
        SchemaVersionError: If the schema string is not `label-model/1`.
        ModelFileError: If the file is truncated or malformed.
    """
    try:
        raw = read_json(path)
    except ValueError as e:
        raise ModelFileError(f"Model file {path} is not valid UTF-8 JSON: {e}", path=path) from e
    if not isinstance(raw, dict):
        raise ModelFileError(f"Model file {path} does not contain a JSON object", path=path)
    schema = raw.get("schema")
    if schema != MODEL_SCHEMA:
        raise SchemaVersionError(f"Model file {path} has schema {schema!r}, expected {MODEL_SCHEMA!r}", path=path)
    try:
        doc = LabelModelDocument.model_validate(raw)
        model = LabelModel(
            kernel=doc.kernel,
            topology=doc.topology,
            centers=np.array(doc.centers, dtype=float).reshape(-1, 2),
            coefficients=np.array(doc.coefficients, dtype=float),
            normalization=doc.normalization,
            provenance=doc.provenance,
        )
    except ValidationError as e:
        raise ModelFileError(f"Model file {path} is malformed: {e}", path=path) from e
    logger.info(f"Loaded label model ({model.coefficients.shape[0]} centers) from {path}")
    return model
