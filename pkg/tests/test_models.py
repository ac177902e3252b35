import numpy as np
import pytest
from pydantic import ValidationError

from invlabel.ext.flowmaps import pendulum_field
from invlabel.models import (EigenPair, EigenResult, LabelModel, OdeFieldMapSpec, RunConfig,
                             SmoothedBoundarySpec, StandardMapSpec, ZeroRegionBoundarySpec)

MINIMAL = {
    "map": {"type": "standard", "k": 0.5},
    "domain": {"topology": "cylinder", "y_range": [0.0, 1.0]},
}


def test_minimal_run_config_takes_defaults():
    cfg = RunConfig.model_validate(MINIMAL)
    assert cfg.map == StandardMapSpec(k=0.5)
    assert cfg.domain.x_range == (0.0, 1.0)
    assert cfg.N == 100
    assert cfg.epsilon == 1e-8
    assert cfg.delta == 1e-8
    assert cfg.sobol_skip == 1
    assert cfg.validation.sobol_skip == 65536
    assert cfg.validation.T == 100
    assert cfg.kernel is None and cfg.boundary is None and cfg.scan is None


def test_unknown_keys_are_rejected():
    with pytest.raises(ValidationError):
        RunConfig.model_validate({**MINIMAL, "epsilonn": 1e-3})
    with pytest.raises(ValidationError):
        RunConfig.model_validate({**MINIMAL, "map": {"type": "standard", "k": 0.5, "omega": 0.1}})


def test_discriminated_unions():
    cfg = RunConfig.model_validate({
        **MINIMAL,
        "boundary": {"type": "zero_region", "region": {
            "type": "complement",
            "region": {"type": "rectangle", "x_range": [-0.75, 0.75], "y_range": [-0.75, 0.75]},
        }},
    })
    assert isinstance(cfg.boundary, ZeroRegionBoundarySpec)
    assert cfg.boundary.region.region.x_range == (-0.75, 0.75)

    cfg = RunConfig.model_validate({**MINIMAL, "boundary": {"type": "smoothed", "a": 0.0, "b": 1.0}})
    assert isinstance(cfg.boundary, SmoothedBoundarySpec)

    with pytest.raises(ValidationError):
        RunConfig.model_validate({**MINIMAL, "map": {"type": "henon"}})


def test_enum_fields_hold_plain_strings():
    cfg = RunConfig.model_validate({**MINIMAL, "kernel": {"family": "periodic_product", "sigma": 0.1}})
    assert cfg.kernel.family == "periodic_product"
    assert cfg.domain.topology == "cylinder"
    assert cfg.model_dump(mode="json")["kernel"]["family"] == "periodic_product"


def test_ode_field_spec_imports_the_field():
    spec = OdeFieldMapSpec(field="invlabel.ext.flowmaps:pendulum_field", t_span=(0.0, 1.0))
    assert spec.field is pendulum_field
    with pytest.raises(ValidationError):
        OdeFieldMapSpec(field="invlabel.ext.flowmaps:no_such_field", t_span=(0.0, 1.0))
    with pytest.raises(ValidationError):
        OdeFieldMapSpec(field="invlabel.ext.flowmaps:pendulum_field", t_span=(1.0, 0.0))


def test_scan_needs_two_values():
    with pytest.raises(ValidationError):
        RunConfig.model_validate({**MINIMAL, "scan": {"parameter": "k", "values": [0.5]}})
    cfg = RunConfig.model_validate({**MINIMAL, "scan": {"parameter": "k", "values": [0.1, 0.2], "workers": 2}})
    assert cfg.scan.solver == "bvp"


def test_cylinder_domain_spans_the_period():
    with pytest.raises(ValidationError):
        RunConfig.model_validate({**MINIMAL, "domain": {"topology": "cylinder", "x_range": [0, 2], "y_range": [0, 1]}})
    with pytest.raises(ValidationError):
        RunConfig.model_validate({**MINIMAL, "domain": {"y_range": [0, 1]}})


def test_result_arrays_are_frozen():
    model = LabelModel(kernel={"family": "squared_exponential", "sigma": 1.0}, topology="plane",
                       centers=[[0.0, 0.0]], coefficients=[1.0])
    with pytest.raises(ValueError):
        model.coefficients[0] = 2.0
    with pytest.raises(ValidationError):
        LabelModel(kernel={"family": "squared_exponential", "sigma": 1.0}, topology="plane",
                   centers=[[0.0, 0.0]], coefficients=[float("nan")])


def test_eigen_result_lists_eigenvalues():
    pairs = [EigenPair(eigenvalue=v, h=np.ones(2), c=np.ones(2), rayleigh=v) for v in (0.1, 0.3)]
    result = EigenResult(pairs=pairs, shift_delta=1e-8, epsilon=1e-6, iterations=12)
    np.testing.assert_array_equal(result.eigenvalues, [0.1, 0.3])
    with pytest.raises(ValidationError):
        EigenPair(eigenvalue=-1.0, h=np.ones(2), c=np.ones(2), rayleigh=0.0)


def test_scan_secondary_axis():
    cfg = RunConfig.model_validate({**MINIMAL, "scan": {
        "parameter": "sigma0", "values": [1.0, 2.0], "secondary": {"parameter": "N", "values": [100]},
    }})
    assert cfg.scan.secondary.parameter == "N"
    for other in ("sigma0", "sigma"):
        with pytest.raises(ValidationError):
            RunConfig.model_validate({**MINIMAL, "scan": {
                "parameter": "sigma0", "values": [1.0, 2.0], "secondary": {"parameter": other, "values": [0.1]},
            }})
