# invlabel/models.py

"""
Pydantic models for phase-space data, map/kernel/boundary specifications,
solver results and run configuration.

Specification models are plain JSON-compatible documents with a `type`
discriminator where several variants exist, so a run config can be written
by hand and validated in one call. Result models that carry numpy arrays
(`SampleSet`, `LabelModel`, `EigenPair`, `EigenResult`) share a base that
allows arbitrary types and freezes the arrays they hold.
"""
from __future__ import annotations

import logging
from typing import Annotated, Any, Callable, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import (BaseModel, ConfigDict, Field, ImportString,
                      field_validator, model_validator)

from .constants import (
    # Enums
    Topology, KernelFamily, ScanParameter, ScanSolver,
    # Defaults
    DEFAULT_RTOL, DEFAULT_ATOL, DEFAULT_MAX_STEPS, DEFAULT_INITIAL_STEP,
    DEFAULT_ALPHA, DEFAULT_BETA, DEFAULT_HA, DEFAULT_HB,
    DEFAULT_EPSILON, DEFAULT_DELTA, DEFAULT_N, DEFAULT_N_EIGS,
    DEFAULT_SOBOL_SKIP, DEFAULT_VALIDATION_SKIP, DEFAULT_VALIDATION_J,
    DEFAULT_BIRKHOFF_T, DEFAULT_POINCARE_SEEDS, DEFAULT_POINCARE_STEPS,
    DEFAULT_GRID_SIZE, PENDULUM_PERIOD, PERTURBED_PENDULUM_PERIOD,
)

logger = logging.getLogger(__name__)


# --- Base Model Configuration ---

class BaseModelIL(BaseModel):
    """
    Base Pydantic model for all specification and report objects.

    - `extra = 'forbid'`: unknown keys in a config are errors, not silently ignored.
    - `use_enum_values = True`: enum fields hold (and serialize as) their string values.
    - `frozen = True`: specs are immutable once validated.
    """
    model_config = ConfigDict(extra="forbid", populate_by_name=True, use_enum_values=True, frozen=True)


class ArrayModel(BaseModel):
    """Base for result objects holding numpy arrays."""
    model_config = ConfigDict(extra="forbid", use_enum_values=True, frozen=True, arbitrary_types_allowed=True)


def wrap_unit(x: Any) -> Any:
    """Reduces angle coordinates into [0, 1). Works on floats and arrays."""
    r = np.mod(x, 1.0)
    # np.mod can round a tiny negative input up to exactly 1.0
    return np.where(r >= 1.0, 0.0, r) if isinstance(r, np.ndarray) else (0.0 if r >= 1.0 else float(r))


def _frozen_array(value: Any, ndim: int) -> np.ndarray:
    arr = np.array(value, dtype=float)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-dimensional array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("array contains non-finite entries")
    arr.setflags(write=False)
    return arr


def _check_range(value: Tuple[float, float], name: str) -> Tuple[float, float]:
    lo, hi = value
    if not lo < hi:
        raise ValueError(f"{name} must satisfy lo < hi, got {value}")
    return value


# --- Phase Space ---

class State(BaseModelIL):
    """A phase-space point. On the cylinder `x` is the angle coordinate (period 1)."""
    x: float
    y: float

    def wrapped(self, topology: Topology) -> State:
        """Returns the canonical representative (x in [0, 1)) on the cylinder, self on the plane."""
        if topology == Topology.CYLINDER:
            return State(x=wrap_unit(self.x), y=self.y)
        return self

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)


class Domain(BaseModelIL):
    """
    Sampling domain: a rectangle on the plane or an annulus on the cylinder.

    On the cylinder `x_range` may be omitted and always covers the full period.
    """
    topology: Topology = Topology.PLANE
    x_range: Tuple[float, float]
    y_range: Tuple[float, float]

    @model_validator(mode="before")
    @classmethod
    def fill_period(cls, values: Any) -> Any:
        if isinstance(values, dict) and values.get("x_range") is None:
            if values.get("topology") in (Topology.CYLINDER, Topology.CYLINDER.value):
                values = {**values, "x_range": (0.0, 1.0)}
        return values

    @model_validator(mode="after")
    def check_ranges(self) -> Domain:
        _check_range(self.x_range, "x_range")
        _check_range(self.y_range, "y_range")
        if self.topology == Topology.CYLINDER and tuple(self.x_range) != (0.0, 1.0):
            raise ValueError("cylinder domains span the full period: x_range must be (0, 1)")
        return self


# --- Integrator and Maps ---

class IntegratorConfig(BaseModelIL):
    """Tolerances and limits of the adaptive Dormand-Prince integrator."""
    rtol: float = Field(default=DEFAULT_RTOL, gt=0)
    atol: float = Field(default=DEFAULT_ATOL, gt=0)
    max_steps: int = Field(default=DEFAULT_MAX_STEPS, gt=0)
    initial_step: float = Field(default=DEFAULT_INITIAL_STEP, gt=0)


class StandardMapSpec(BaseModelIL):
    """Chirikov standard map on the cylinder with kick strength `k`."""
    type: Literal["standard"] = "standard"
    k: float


class RotationMapSpec(BaseModelIL):
    """Rigid rotation a -> a + omega on the cylinder; omega = 0 is the identity."""
    type: Literal["rotation"] = "rotation"
    omega: float = 0.0


class PendulumMapSpec(BaseModelIL):
    """Time-sqrt(2) flow of the pendulum on the cylinder."""
    type: Literal["pendulum"] = "pendulum"
    period: float = Field(default=PENDULUM_PERIOD, gt=0)
    integrator: IntegratorConfig = Field(default_factory=IntegratorConfig)


class PerturbedPendulumMapSpec(BaseModelIL):
    """Time-2pi return map of the periodically perturbed pendulum on the plane."""
    type: Literal["perturbed_pendulum"] = "perturbed_pendulum"
    period: float = Field(default=PERTURBED_PENDULUM_PERIOD, gt=0)
    integrator: IntegratorConfig = Field(default_factory=IntegratorConfig)


class OdeFieldMapSpec(BaseModelIL):
    """
    Return map of a user-supplied time-dependent planar vector field.

    `field` is an import path ("package.module:function") or a callable with
    signature `f(t, y) -> dy` where `t` has shape (m,) and `y`, `dy` (m, 2).
    """
    type: Literal["ode_field"] = "ode_field"
    field: ImportString[Callable[..., Any]]
    t_span: Tuple[float, float]
    topology: Topology = Topology.PLANE
    integrator: IntegratorConfig = Field(default_factory=IntegratorConfig)

    @field_validator("t_span")
    @classmethod
    def check_span(cls, v: Tuple[float, float]) -> Tuple[float, float]:
        if v[1] < v[0]:
            raise ValueError(f"t_span must satisfy t0 <= t1, got {v}")
        return v


MapSpec = Annotated[
    Union[StandardMapSpec, RotationMapSpec, PendulumMapSpec, PerturbedPendulumMapSpec, OdeFieldMapSpec],
    Field(discriminator="type"),
]


# --- Kernels ---

class KernelSpec(BaseModelIL):
    """
    Kernel family and width.

    Exactly one of `sigma` (absolute width) or `sigma0` (density-scaled width,
    sigma = sigma0 / sqrt(N)) is given.
    """
    family: KernelFamily
    sigma: Optional[float] = Field(default=None, gt=0)
    sigma0: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def check_width(self) -> KernelSpec:
        if (self.sigma is None) == (self.sigma0 is None):
            raise ValueError("give exactly one of 'sigma' or 'sigma0'")
        return self


# --- Regions ---

class RectangleRegionSpec(BaseModelIL):
    type: Literal["rectangle"] = "rectangle"
    x_range: Tuple[float, float]
    y_range: Tuple[float, float]

    @model_validator(mode="after")
    def check_ranges(self) -> RectangleRegionSpec:
        _check_range(self.x_range, "x_range")
        _check_range(self.y_range, "y_range")
        return self


class BelowRegionSpec(BaseModelIL):
    """Half-plane y < `y`."""
    type: Literal["below"] = "below"
    y: float


class AboveRegionSpec(BaseModelIL):
    """Half-plane y > `y`."""
    type: Literal["above"] = "above"
    y: float


class ComplementRegionSpec(BaseModelIL):
    type: Literal["complement"] = "complement"
    region: RegionSpec


class UnionRegionSpec(BaseModelIL):
    type: Literal["union"] = "union"
    regions: List[RegionSpec] = Field(min_length=1)


class IntersectionRegionSpec(BaseModelIL):
    type: Literal["intersection"] = "intersection"
    regions: List[RegionSpec] = Field(min_length=1)


RegionSpec = Annotated[
    Union[RectangleRegionSpec, BelowRegionSpec, AboveRegionSpec,
          ComplementRegionSpec, UnionRegionSpec, IntersectionRegionSpec],
    Field(discriminator="type"),
]

ComplementRegionSpec.model_rebuild()
UnionRegionSpec.model_rebuild()
IntersectionRegionSpec.model_rebuild()


# --- Boundary Conditions ---

class _StripBoundary(BaseModelIL):
    """Shared fields of the two strip boundaries: h = ha near y = a, h = hb near y = b."""
    a: float
    b: float
    beta: float = Field(default=DEFAULT_BETA, ge=0)
    ha: float = DEFAULT_HA
    hb: float = DEFAULT_HB

    @model_validator(mode="after")
    def check_strips(self) -> _StripBoundary:
        if not self.a < self.b:
            raise ValueError(f"boundary strips need a < b, got a={self.a}, b={self.b}")
        if self.ha == self.hb:
            raise ValueError("boundary values ha and hb must differ")
        return self


class IndicatorBoundarySpec(_StripBoundary):
    """Sharp strips y < a + beta (value ha) and y > b - beta (value hb)."""
    type: Literal["indicator"] = "indicator"


class SmoothedBoundarySpec(_StripBoundary):
    """Sigmoid-smoothed strips of width alpha; smooth in the sample positions."""
    type: Literal["smoothed"] = "smoothed"
    alpha: float = Field(default=DEFAULT_ALPHA, gt=0)


class ZeroRegionBoundarySpec(BaseModelIL):
    """Zero Dirichlet data on a region: h_bd = 0, w_bd = indicator of the region."""
    type: Literal["zero_region"] = "zero_region"
    region: RegionSpec


BoundarySpec = Annotated[
    Union[IndicatorBoundarySpec, SmoothedBoundarySpec, ZeroRegionBoundarySpec],
    Field(discriminator="type"),
]


# --- Validation ---

class BirkhoffConfig(BaseModelIL):
    """Weighted Birkhoff average over T observable samples (T - 1 map calls)."""
    T: int = Field(default=DEFAULT_BIRKHOFF_T, ge=1)
    weight_kind: Literal["exponential_bump"] = "exponential_bump"


class ValidationReport(BaseModelIL):
    """Normalized sum-of-squares score S with the (h, WB[h]) pairs it was computed from."""
    S: float = Field(ge=0)
    pairs: List[Tuple[float, float]]
    J: int
    T: int


# --- Samples and Models ---

class SampleSet(ArrayModel):
    """
    The 2N-point sequence [x_1..x_N, F(x_1)..F(x_N)].

    Images may lie outside the domain; they are kept as they are.
    """
    z: np.ndarray
    N: int = Field(ge=1)
    domain: Domain
    map_used: Optional[MapSpec] = None
    sobol_skip: int = Field(default=DEFAULT_SOBOL_SKIP, ge=0)

    @field_validator("z", mode="before")
    @classmethod
    def freeze_points(cls, v: Any) -> np.ndarray:
        return _frozen_array(v, 2)

    @model_validator(mode="after")
    def check_shape(self) -> SampleSet:
        if self.z.shape != (2 * self.N, 2):
            raise ValueError(f"z must have shape (2N, 2) = ({2 * self.N}, 2), got {self.z.shape}")
        return self

    @property
    def topology(self) -> Topology:
        return self.domain.topology

    @property
    def inputs(self) -> np.ndarray:
        return self.z[:self.N]

    @property
    def images(self) -> np.ndarray:
        return self.z[self.N:]


class SampleCacheInfo(BaseModelIL):
    """What a cached sample file was built from; stored next to the CSV."""
    map: MapSpec
    domain: Domain
    N: int = Field(ge=1)
    sobol_skip: int = Field(ge=0)


class Provenance(BaseModelIL):
    """Everything needed to reproduce a model file."""
    map: Optional[MapSpec] = None
    domain: Optional[Domain] = None
    N: int
    epsilon: float
    sobol_skip: int
    boundary: Optional[BoundarySpec] = None
    delta: Optional[float] = None
    eigen_index: Optional[int] = None
    eigenvalue: Optional[float] = None


class LabelModel(ArrayModel):
    """
    A label function h(z) = normalization * sum_n c_n K(z, z_n).

    Attributes:
        kernel (KernelSpec): Kernel with a resolved absolute width.
        topology (Topology): Phase-space topology the kernel is evaluated on.
        centers (np.ndarray): (M, 2) kernel centers, the training sequence z.
        coefficients (np.ndarray): (M,) coefficients c.
        normalization (float): Post-hoc output scale.
        provenance (Optional[Provenance]): How the model was produced.
    """
    kernel: KernelSpec
    topology: Topology
    centers: np.ndarray
    coefficients: np.ndarray
    normalization: float = 1.0
    provenance: Optional[Provenance] = None

    @field_validator("centers", mode="before")
    @classmethod
    def freeze_centers(cls, v: Any) -> np.ndarray:
        return _frozen_array(v, 2)

    @field_validator("coefficients", mode="before")
    @classmethod
    def freeze_coefficients(cls, v: Any) -> np.ndarray:
        return _frozen_array(v, 1)

    @model_validator(mode="after")
    def check_lengths(self) -> LabelModel:
        if self.centers.shape[1:] != (2,):
            raise ValueError(f"centers must have shape (M, 2), got {self.centers.shape}")
        if self.centers.shape[0] != self.coefficients.shape[0] or self.centers.shape[0] == 0:
            raise ValueError(
                f"centers ({self.centers.shape[0]}) and coefficients ({self.coefficients.shape[0]}) "
                "must have equal nonzero length"
            )
        if self.kernel.sigma is None:
            raise ValueError("a label model needs a kernel with a resolved 'sigma'")
        return self


class LabelModelDocument(BaseModelIL):
    """On-disk JSON layout of a `LabelModel`."""
    schema_: str = Field(alias="schema")
    kernel: KernelSpec
    topology: Topology
    centers: List[Tuple[float, float]]
    coefficients: List[float]
    normalization: float
    provenance: Optional[Provenance] = None


# --- Solver Results ---

class ResidualReport(BaseModelIL):
    """Energy decomposition R = E_bd + E_inv + epsilon * E_K of a label function."""
    R: float = Field(ge=0)
    E_inv: float = Field(ge=0)
    E_bd: float = Field(ge=0)
    E_K: float = Field(ge=0)
    epsilon: float = Field(gt=0)


class EigenPair(ArrayModel):
    """One eigenpair: eigenvalue, sampled values h (unit norm) and coefficients c with K c = h."""
    eigenvalue: float = Field(ge=0)
    h: np.ndarray
    c: np.ndarray
    rayleigh: float

    @field_validator("h", "c", mode="before")
    @classmethod
    def freeze_vectors(cls, v: Any) -> np.ndarray:
        return _frozen_array(v, 1)


class EigenResult(ArrayModel):
    """
    Eigenpairs sorted ascending by eigenvalue.

    `iterations` counts operator applications; `jitter` is the diagonal shift the
    Cholesky factorization needed (0 if none), `kernel` the resolved kernel.
    """
    pairs: List[EigenPair]
    shift_delta: float
    epsilon: float
    iterations: int
    jitter: float = 0.0
    kernel: Optional[KernelSpec] = None

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([p.eigenvalue for p in self.pairs])


# --- Run Configuration ---

class OutputConfig(BaseModelIL):
    directory: str = "out"
    samples_cache: Optional[str] = None  # CSV of a SampleSet, read if present, written otherwise


class ValidationConfig(BaseModelIL):
    """`domain` restricts where validation points are drawn; it defaults to the training domain."""
    J: int = Field(default=DEFAULT_VALIDATION_J, ge=2)
    T: int = Field(default=DEFAULT_BIRKHOFF_T, ge=1)
    sobol_skip: int = Field(default=DEFAULT_VALIDATION_SKIP, ge=0)
    domain: Optional[Domain] = None

    def birkhoff(self) -> BirkhoffConfig:
        return BirkhoffConfig(T=self.T)


class PoincareConfig(BaseModelIL):
    """Seeds are Sobol points of the domain unless listed explicitly."""
    n_seeds: int = Field(default=DEFAULT_POINCARE_SEEDS, ge=1)
    steps: int = Field(default=DEFAULT_POINCARE_STEPS, ge=0)
    seeds: Optional[List[State]] = None
    sobol_skip: int = Field(default=DEFAULT_SOBOL_SKIP, ge=0)


class GridConfig(BaseModelIL):
    nx: int = Field(default=DEFAULT_GRID_SIZE, ge=2)
    ny: int = Field(default=DEFAULT_GRID_SIZE, ge=2)
    advect: int = Field(default=0, ge=0)  # evaluate h after this many map iterations


class ScanAxis(BaseModelIL):
    """A second swept parameter; every primary value is run against every value here."""
    parameter: ScanParameter
    values: List[float] = Field(min_length=1)


class ScanConfig(BaseModelIL):
    parameter: ScanParameter
    values: List[float] = Field(min_length=2)
    secondary: Optional[ScanAxis] = None
    solver: ScanSolver = ScanSolver.BVP
    workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def check_axes(self) -> ScanConfig:
        if self.secondary is not None:
            pair = {self.parameter, self.secondary.parameter}
            if len(pair) == 1 or pair == {ScanParameter.SIGMA.value, ScanParameter.SIGMA0.value}:
                raise ValueError(f"cannot scan {self.parameter} against {self.secondary.parameter}")
        return self


class RunConfig(BaseModelIL):
    """A complete run: one JSON document, defaults documented in `invlabel.constants`."""
    map: MapSpec
    domain: Domain
    kernel: Optional[KernelSpec] = None
    boundary: Optional[BoundarySpec] = None
    N: int = Field(default=DEFAULT_N, ge=1)
    epsilon: float = Field(default=DEFAULT_EPSILON, gt=0)
    delta: float = Field(default=DEFAULT_DELTA, gt=0)
    n_eigs: int = Field(default=DEFAULT_N_EIGS, ge=1)
    sobol_skip: int = Field(default=DEFAULT_SOBOL_SKIP, ge=0)
    normalize: bool = False
    output: OutputConfig = Field(default_factory=OutputConfig)
    validation: ValidationConfig = Field(default_factory=ValidationConfig)
    poincare: PoincareConfig = Field(default_factory=PoincareConfig)
    grid: GridConfig = Field(default_factory=GridConfig)
    scan: Optional[ScanConfig] = None
