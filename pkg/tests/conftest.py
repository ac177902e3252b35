import json

import numpy as np
import pytest

from invlabel.models import (Domain, KernelSpec, RotationMapSpec, SmoothedBoundarySpec,
                             StandardMapSpec, ZeroRegionBoundarySpec)
from invlabel.sampling import build_samples


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def cylinder_domain():
    return Domain(topology="cylinder", y_range=(0.0, 1.0))


@pytest.fixture
def plane_domain():
    return Domain(x_range=(-1.0, 1.0), y_range=(-1.0, 1.0))


@pytest.fixture
def periodic_kernel():
    return KernelSpec(family="periodic_product", sigma=0.1)


@pytest.fixture
def strip_boundary():
    return SmoothedBoundarySpec(a=0.0, b=1.0)


@pytest.fixture
def strip_zero_region():
    return ZeroRegionBoundarySpec(region={
        "type": "union",
        "regions": [{"type": "below", "y": 0.15}, {"type": "above", "y": 0.85}],
    })


@pytest.fixture
def standard_samples(cylinder_domain):
    return build_samples(StandardMapSpec(k=0.5), cylinder_domain, N=40)


@pytest.fixture
def identity_samples(cylinder_domain):
    return build_samples(RotationMapSpec(omega=0.0), cylinder_domain, N=20)


@pytest.fixture
def write_config(tmp_path):
    """Writes a run config dict to a JSON file and returns its path."""
    def _write(doc, name="run.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc), encoding="utf-8")
        return str(path)
    return _write
