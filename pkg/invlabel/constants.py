# invlabel/constants.py

"""
Defines constants and enumerations used throughout the invlabel library.

Includes integrator and solver defaults, boundary defaults for the built-in
workflows, Sobol stream offsets, the model file schema and CLI exit codes.
"""

import math
from enum import Enum, IntEnum


# --- Enumerations ---

class Topology(str, Enum):
    """Phase-space topology. On the cylinder x is an angle with period 1."""
    PLANE = "plane"
    CYLINDER = "cylinder"


class KernelFamily(str, Enum):
    """Kernel families available for label functions."""
    SQUARED_EXPONENTIAL = "squared_exponential"
    INVERSE_MULTIQUADRIC = "inverse_multiquadric"
    PERIODIC_PRODUCT = "periodic_product"  # sin² in x, squared exponential in y


class MapType(str, Enum):
    """The `type` tag of a map specification."""
    STANDARD = "standard"
    ROTATION = "rotation"
    PENDULUM = "pendulum"
    PERTURBED_PENDULUM = "perturbed_pendulum"
    ODE_FIELD = "ode_field"


class BoundaryType(str, Enum):
    """The `type` tag of a boundary specification."""
    INDICATOR = "indicator"
    SMOOTHED = "smoothed"
    ZERO_REGION = "zero_region"


class RegionType(str, Enum):
    """The `type` tag of a region specification."""
    RECTANGLE = "rectangle"
    BELOW = "below"
    ABOVE = "above"
    COMPLEMENT = "complement"
    UNION = "union"
    INTERSECTION = "intersection"


class ScanParameter(str, Enum):
    """Parameters a scan may sweep."""
    K = "k"
    OMEGA = "omega"
    SIGMA = "sigma"
    SIGMA0 = "sigma0"
    EPSILON = "epsilon"
    N = "N"


class ScanSolver(str, Enum):
    """What a scan computes at every parameter value."""
    BVP = "bvp"
    EVP = "evp"
    VALIDATE = "validate"


class ExitCode(IntEnum):
    """Process exit codes of the command-line interface."""
    OK = 0
    CONFIG = 2
    NUMERICAL = 3
    IO = 4


# --- Integrator Defaults ---
# Integration error has to sit well below the regularization scale (epsilon ~ 1e-8).
DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12
DEFAULT_MAX_STEPS = 100_000
DEFAULT_INITIAL_STEP = 1e-2

# Step-size controller of the 4(5) pair
STEP_SAFETY = 0.9
STEP_MIN_FACTOR = 0.2
STEP_MAX_FACTOR = 5.0

# Return times of the built-in flows
PENDULUM_PERIOD = math.sqrt(2.0)
PERTURBED_PENDULUM_PERIOD = 2.0 * math.pi


# --- Solver Defaults ---
DEFAULT_EPSILON = 1e-8
DEFAULT_DELTA = 1e-8
DEFAULT_N_EIGS = 1
LANCZOS_TOL = 1e-10

# Cholesky jitter floor: eta = JITTER_SCALE * trace(M) / dim, grown by
# JITTER_GROWTH per failed attempt.
JITTER_SCALE = 1e-12
JITTER_GROWTH = 10.0
JITTER_MAX_TRIES = 7

# Computed eigenvalues in (-EIGEN_CLAMP, 0) are noise and reported as 0.
EIGEN_CLAMP = 1e-12
# Energies in (-ENERGY_CLAMP * scale, 0) are noise and reported as 0.
ENERGY_CLAMP = 1e-14

# Rows of points per block when evaluating kernels against many centers.
KERNEL_CHUNK_ROWS = 2048


# --- Boundary Defaults ---
DEFAULT_HA = -1.0
DEFAULT_HB = 1.0
# Standard-map workflow
DEFAULT_ALPHA = 0.01
DEFAULT_BETA = 0.01
# Pendulum workflow
PENDULUM_ALPHA = 0.02
PENDULUM_BETA = 0.1


# --- Sampling Defaults ---
# Skip the all-zeros Sobol point so samples avoid the domain corner.
DEFAULT_SOBOL_SKIP = 1
# Validation points come from a disjoint stretch of the same sequence.
DEFAULT_VALIDATION_SKIP = 65536
DEFAULT_N = 100


# --- Validation Defaults ---
DEFAULT_VALIDATION_J = 1000
DEFAULT_BIRKHOFF_T = 100


# --- Model Files and Grids ---
MODEL_SCHEMA = "label-model/1"
PROBE_GRID_SIZE = 200
DEFAULT_GRID_SIZE = 200


# --- Poincaré Defaults ---
DEFAULT_POINCARE_SEEDS = 20
DEFAULT_POINCARE_STEPS = 200
