import json
import math

import numpy as np
import pytest
from pydantic import ValidationError

from invlabel.bvp import solve_bvp
from invlabel.error import (ConfigError, DegenerateError, FileIOError, ModelFileError,
                            SchemaVersionError, TopologyMismatchError)
from invlabel.files import read_csv
from invlabel.label import eval_grid, eval_label, export_sample_values, grid_nodes, load_model, normalize_maxabs, save_model
from invlabel.models import KernelSpec, LabelModel, LabelModelDocument, RotationMapSpec

SE = KernelSpec(family="squared_exponential", sigma=1.0)


def _model(centers, coefficients, kernel=SE, topology="plane"):
    return LabelModel(kernel=kernel, topology=topology, centers=centers, coefficients=coefficients)


@pytest.fixture
def fitted(standard_samples, periodic_kernel, strip_boundary):
    model, _ = solve_bvp(standard_samples, periodic_kernel, strip_boundary, 1e-3)
    return model


# --- Evaluation ---

def test_single_center():
    model = _model([[0.0, 0.0]], [2.0])
    assert eval_label(model, (0.0, 0.0)) == 2.0
    assert eval_label(model, (1.0, 0.0)) == pytest.approx(2.0 * math.exp(-0.5))
    assert eval_label(model, np.array([[0.0, 0.0], [0.0, 1.0]])).shape == (2,)


def test_evaluation_is_linear_in_the_coefficients(rng):
    centers = rng.uniform(-1.0, 1.0, size=(6, 2))
    c1, c2 = rng.normal(size=(2, 6))
    pts = rng.uniform(-1.0, 1.0, size=(9, 2))
    combined = eval_label(_model(centers, 2.0 * c1 + c2), pts)
    np.testing.assert_allclose(combined, 2.0 * eval_label(_model(centers, c1), pts) + eval_label(_model(centers, c2), pts),
                               atol=1e-12)


def test_zero_model(plane_domain):
    model = _model([[0.0, 0.0], [0.5, 0.5]], [0.0, 0.0])
    assert eval_label(model, (0.3, 0.1)) == 0.0
    with pytest.raises(DegenerateError):
        normalize_maxabs(model, plane_domain)


def test_label_model_validation():
    with pytest.raises(ValidationError):
        _model([[0.0, 0.0]], [1.0, 2.0])
    with pytest.raises(ValidationError):
        _model([[0.0, 0.0]], [1.0], kernel=KernelSpec(family="squared_exponential", sigma0=1.0))


def test_topology_mismatch():
    model = _model([[0.0, 0.0]], [1.0], kernel=KernelSpec(family="periodic_product", sigma=0.2))
    with pytest.raises(TopologyMismatchError):
        eval_label(model, (0.1, 0.1))


# --- Normalization ---

def test_normalize_scales_peak_to_one(plane_domain):
    model = _model([[0.0, 0.0]], [-4.0])
    normalized = normalize_maxabs(model, plane_domain, resolution=20)
    values = eval_grid(normalized, plane_domain, 20, 20)
    assert np.abs(values).max() == pytest.approx(1.0, rel=1e-12)


def test_normalize_is_idempotent(plane_domain):
    once = normalize_maxabs(_model([[0.2, 0.1]], [3.0]), plane_domain, resolution=20)
    twice = normalize_maxabs(once, plane_domain, resolution=20)
    assert twice.normalization == once.normalization


def test_normalize_needs_a_domain():
    with pytest.raises(ConfigError):
        normalize_maxabs(_model([[0.0, 0.0]], [1.0]))


# --- Grids ---

def test_grid_nodes_are_cell_centres(plane_domain):
    nodes = grid_nodes(plane_domain, 2, 2)
    np.testing.assert_array_equal(nodes, [[-0.5, -0.5], [0.5, -0.5], [-0.5, 0.5], [0.5, 0.5]])
    with pytest.raises(ConfigError):
        grid_nodes(plane_domain, 1, 5)


def test_eval_grid_writes_csv(tmp_path, plane_domain):
    model = _model([[0.0, 0.0]], [1.0])
    path = str(tmp_path / "grid.csv")
    values = eval_grid(model, plane_domain, 2, 2, path=path)
    assert values.shape == (2, 2)
    np.testing.assert_allclose(values, math.exp(-0.25))
    header, rows = read_csv(path)
    assert header == ["x", "y", "h"]
    assert len(rows) == 4
    assert [float(v) for v in rows[1][:2]] == [0.5, -0.5]


def test_advecting_with_the_identity_changes_nothing(fitted, cylinder_domain):
    plain = eval_grid(fitted, cylinder_domain, 8, 6)
    advected = eval_grid(fitted, cylinder_domain, 8, 6, advect=(RotationMapSpec(omega=0.0), 3))
    np.testing.assert_array_equal(plain, advected)


def test_grid_defaults_to_training_domain(fitted):
    assert eval_grid(fitted, nx=4, ny=3).shape == (3, 4)


def test_export_sample_values(tmp_path, fitted, standard_samples):
    path = str(tmp_path / "samples.csv")
    export_sample_values(fitted, standard_samples, path, observable=lambda pts: pts[:, 1])
    header, rows = read_csv(path)
    assert header == ["index", "x", "y", "h", "observable"]
    assert len(rows) == standard_samples.N
    assert float(rows[3][4]) == standard_samples.inputs[3, 1]


# --- Persistence ---

def test_save_and_load_are_bit_exact(tmp_path, fitted):
    path = str(tmp_path / "model.json")
    save_model(fitted, path)
    loaded = load_model(path)
    np.testing.assert_array_equal(loaded.coefficients, fitted.coefficients)
    np.testing.assert_array_equal(loaded.centers, fitted.centers)
    assert loaded.kernel == fitted.kernel
    assert loaded.provenance == fitted.provenance
    assert loaded.normalization == fitted.normalization


def test_load_rejects_other_schemas(tmp_path, fitted):
    path = tmp_path / "model.json"
    save_model(fitted, str(path))
    doc = json.loads(path.read_text(encoding="utf-8"))
    doc["schema"] = "label-model/2"
    path.write_text(json.dumps(doc), encoding="utf-8")
    with pytest.raises(SchemaVersionError):
        load_model(str(path))


def test_load_rejects_broken_files(tmp_path, fitted):
    path = tmp_path / "model.json"
    save_model(fitted, str(path))
    text = path.read_text(encoding="utf-8")

    truncated = tmp_path / "truncated.json"
    truncated.write_text(text[: len(text) // 2], encoding="utf-8")
    with pytest.raises(ModelFileError):
        load_model(str(truncated))

    doc = json.loads(text)
    del doc["coefficients"]
    missing = tmp_path / "missing_field.json"
    missing.write_text(json.dumps(doc), encoding="utf-8")
    with pytest.raises(ModelFileError):
        load_model(str(missing))

    with pytest.raises(FileIOError):
        load_model(str(tmp_path / "absent.json"))


def test_model_file_follows_the_document_schema(tmp_path, fitted):
    path = tmp_path / "model.json"
    save_model(fitted, str(path))
    doc = json.loads(path.read_text(encoding="utf-8"))
    assert doc["schema"] == "label-model/1"
    assert "sigma0" not in doc["kernel"]
    assert LabelModelDocument.model_validate(doc).provenance == fitted.provenance


def test_load_rejects_invalid_utf8(tmp_path):
    path = tmp_path / "model.json"
    path.write_bytes(b'{"schema": "label-model/1", "kernel": "\xff\xfe"}')
    with pytest.raises(ModelFileError):
        load_model(str(path))
