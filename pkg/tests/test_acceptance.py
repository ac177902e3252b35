"""
End-to-end runs of the built-in workflows at their published settings.

These take seconds to minutes each; deselect them with `-m "not slow"`.
"""
import numpy as np
import pytest

from invlabel.bvp import solve_bvp
from invlabel.boundary import boundary_arrays
from invlabel.cli import load_config, run_scan
from invlabel.constants import PENDULUM_ALPHA, PENDULUM_BETA
from invlabel.evp import solve_evp
from invlabel.models import (BirkhoffConfig, Domain, KernelSpec, PendulumMapSpec, PerturbedPendulumMapSpec,
                             SmoothedBoundarySpec, StandardMapSpec, ZeroRegionBoundarySpec)
from invlabel.sampling import build_samples
from invlabel.validation import validation_score

pytestmark = pytest.mark.slow

PENDULUM_DOMAIN = Domain(topology="cylinder", y_range=(-2.1, 2.1))
SINE = KernelSpec(family="periodic_product", sigma=0.5)


@pytest.fixture(scope="module")
def pendulum_samples():
    return build_samples(PendulumMapSpec(), PENDULUM_DOMAIN, N=100)


def test_pendulum_bvp(pendulum_samples):
    boundary = SmoothedBoundarySpec(a=-2.1, b=2.1, alpha=PENDULUM_ALPHA, beta=PENDULUM_BETA)
    _, report = solve_bvp(pendulum_samples, SINE, boundary, 1e-8)
    assert report.R <= 2.6e-5
    assert report.E_inv <= 1e-6


def test_pendulum_evp(pendulum_samples):
    boundary = ZeroRegionBoundarySpec(region={
        "type": "union",
        "regions": [{"type": "below", "y": -2.0}, {"type": "above", "y": 2.0}],
    })
    result = solve_evp(pendulum_samples, SINE, boundary, 1e-8, 1e-8)
    assert result.eigenvalues[0] <= 1e-8


def test_perturbed_pendulum_higher_eigenfunctions():
    domain = Domain(x_range=(-0.79, 0.79), y_range=(-0.79, 0.79))
    samples = build_samples(PerturbedPendulumMapSpec(), domain, N=1000)
    boundary = ZeroRegionBoundarySpec(region={
        "type": "complement",
        "region": {"type": "rectangle", "x_range": [-0.75, 0.75], "y_range": [-0.75, 0.75]},
    })
    result = solve_evp(samples, KernelSpec(family="inverse_multiquadric", sigma=0.25), boundary, 1e-8, 1e-8, n_eigs=8)

    lams = result.eigenvalues
    assert np.all(np.diff(lams) >= 0)
    assert lams[0] <= 1e-7
    assert lams[7] <= 1e-4

    kernel_energy = [float(p.c @ p.h) for p in result.pairs]
    assert kernel_energy[7] > kernel_energy[0]

    # the boundary term of each quotient is bounded by its eigenvalue
    _, w_bd = boundary_arrays(boundary, samples.z)
    for pair in result.pairs:
        assert float(np.sum(w_bd * pair.h ** 2)) <= pair.eigenvalue * (1.0 + 1e-6) + 1e-12

    # the first eigenfunction vanishes on the zero region
    on_gamma = w_bd > 0
    h1 = np.abs(result.pairs[0].h)
    assert h1[on_gamma].mean() <= 1e-2 * h1[~on_gamma].mean()


def test_standard_map_residual_grows_with_k(write_config):
    path = write_config({
        "map": {"type": "standard", "k": 0.0},
        "domain": {"topology": "cylinder", "y_range": [0.0, 1.0]},
        "kernel": {"family": "periodic_product", "sigma": 0.1},
        "boundary": {"type": "smoothed", "a": 0.0, "b": 1.0, "alpha": 0.01, "beta": 0.01},
        "N": 500,
        "epsilon": 1e-5,
        "scan": {"parameter": "k", "values": [round(0.1 * i, 1) for i in range(21)], "workers": 4},
    })
    cfg = load_config(path)
    rows = np.array(run_scan(cfg), dtype=float)
    k, R, E_inv, E_K = rows[:, 0], rows[:, 1], rows[:, 2], rows[:, 4]

    assert np.all(np.diff(k) > 0)
    assert np.all(np.diff(R) >= -0.05 * R.max())
    assert R[k == 2.0][0] >= 100.0 * R[k == 0.2][0]
    # smoothness dominates the residual without a kick, invariance with a strong one
    assert cfg.epsilon * E_K[0] > E_inv[0]
    assert E_inv[-1] > cfg.epsilon * E_K[-1]


def test_validation_score_improves_with_more_samples():
    domain = Domain(topology="cylinder", y_range=(0.0, 1.0))
    # orbits from the central band stay inside the training strip; the
    # k = 0.7 island around y = 0 reaches below it
    band = Domain(topology="cylinder", y_range=(0.3, 0.7))
    map_spec = StandardMapSpec(k=0.7)
    kernel = KernelSpec(family="periodic_product", sigma0=4.0)
    boundary = SmoothedBoundarySpec(a=0.0, b=1.0)

    scores = []
    for N in (100, 400, 1600):
        samples = build_samples(map_spec, domain, N=N)
        model, _ = solve_bvp(samples, kernel, boundary, 1e-5)
        scores.append(validation_score(model, map_spec, band, J=500, cfg=BirkhoffConfig(T=100)).S)
    assert scores[0] > scores[1] > scores[2]
