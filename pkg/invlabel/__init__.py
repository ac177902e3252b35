# invlabel/__init__.py

"""
invlabel

Learns smooth, approximately invariant label functions of 2D symplectic maps
from a few map evaluations: a kernel least-squares boundary value problem, a
kernel Rayleigh-quotient eigenproblem, and a weighted-Birkhoff validation
score, with a command-line interface for the standard workflows.
"""

__version__ = "0.1.0"

import logging

# Library code never prints unless the application configures logging.
logging.getLogger(__name__).addHandler(logging.NullHandler())

# --- Maps ---
from .maps import (
    StandardMap, RotationMap, build_map, standard_map, pendulum_map,
    perturbed_pendulum_map, iterate,
)
from .ext.basemap import BaseMap, FlowMap
from .ext.flowmaps import (
    PendulumMap, PerturbedPendulumMap, FieldLineMap,
    pendulum_hamiltonian, perturbed_pendulum_hamiltonian,
)
from .ext.regions import regions

# --- Core Operations ---
from .geometry import wrap, in_domain, in_region, separation, sobol_sample
from .kernels import eval_kernel, kernel_matrix, sigma_from_density, check_topology
from .sampling import (
    build_samples, apply_GInv, apply_GInvT, apply_GtG, invariance_energy,
    save_samples, load_samples, cache_matches,
)
from .boundary import eval_boundary, boundary_energy
from .bvp import solve_bvp, residual_components
from .evp import solve_evp, rayleigh_quotient, apply_eval_operator, eigen_models, ShiftInvertOperator
from .validation import weighted_birkhoff, validation_score, score_from_pairs, birkhoff_weights
from .label import (
    eval_label, normalize_maxabs, eval_grid, export_sample_values, save_model, load_model,
)
from .runner import ScanRunner

# --- Models ---
from .models import (
    # Phase space
    State, Domain,
    # Specifications
    MapSpec, StandardMapSpec, RotationMapSpec, PendulumMapSpec, PerturbedPendulumMapSpec,
    OdeFieldMapSpec, IntegratorConfig, KernelSpec, RegionSpec, BoundarySpec,
    IndicatorBoundarySpec, SmoothedBoundarySpec, ZeroRegionBoundarySpec, BirkhoffConfig,
    # Results
    SampleSet, SampleCacheInfo, LabelModel, Provenance, ResidualReport, EigenPair, EigenResult, ValidationReport,
    # Run configuration
    RunConfig, ScanConfig, ScanAxis,
)

# --- Exceptions ---
from .error import (
    LabelError, ConfigError, TopologyMismatchError, DimensionError, CenterMismatchError,
    NumericalError, IntegrationError, SingularSystemError, FactorizationError,
    ConvergenceError, DegenerateError, FileIOError, ModelFileError, SchemaVersionError,
)

# --- Constants / Enums ---
from .constants import Topology, KernelFamily, ScanParameter, ScanSolver, ExitCode

__all__ = [
    # Maps
    "StandardMap", "RotationMap", "PendulumMap", "PerturbedPendulumMap", "FieldLineMap",
    "BaseMap", "FlowMap", "build_map", "standard_map", "pendulum_map",
    "perturbed_pendulum_map", "iterate", "pendulum_hamiltonian",
    "perturbed_pendulum_hamiltonian", "regions",

    # Core Operations
    "wrap", "in_domain", "in_region", "separation", "sobol_sample",
    "eval_kernel", "kernel_matrix", "sigma_from_density", "check_topology",
    "build_samples", "apply_GInv", "apply_GInvT", "apply_GtG", "invariance_energy",
    "save_samples", "load_samples", "cache_matches",
    "eval_boundary", "boundary_energy",
    "solve_bvp", "residual_components",
    "solve_evp", "rayleigh_quotient", "apply_eval_operator", "eigen_models", "ShiftInvertOperator",
    "weighted_birkhoff", "validation_score", "score_from_pairs", "birkhoff_weights",
    "eval_label", "normalize_maxabs", "eval_grid", "export_sample_values", "save_model", "load_model",
    "ScanRunner",

    # Models
    "State", "Domain", "MapSpec", "StandardMapSpec", "RotationMapSpec", "PendulumMapSpec",
    "PerturbedPendulumMapSpec", "OdeFieldMapSpec", "IntegratorConfig", "KernelSpec",
    "RegionSpec", "BoundarySpec", "IndicatorBoundarySpec", "SmoothedBoundarySpec",
    "ZeroRegionBoundarySpec", "BirkhoffConfig", "SampleSet", "SampleCacheInfo", "LabelModel", "Provenance",
    "ResidualReport", "EigenPair", "EigenResult", "ValidationReport", "RunConfig",
    "ScanConfig", "ScanAxis",

    # Exceptions
    "LabelError", "ConfigError", "TopologyMismatchError", "DimensionError", "CenterMismatchError",
    "NumericalError", "IntegrationError", "SingularSystemError", "FactorizationError",
    "ConvergenceError", "DegenerateError", "FileIOError", "ModelFileError", "SchemaVersionError",

    # Enums
    "Topology", "KernelFamily", "ScanParameter", "ScanSolver", "ExitCode",

    # Version
    "__version__",
]
