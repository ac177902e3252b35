# invlabel/error.py

"""
Custom exception classes used by the invlabel library.

Every error raised on purpose by the library derives from `LabelError`.
The three direct families map onto the CLI exit codes: configuration
problems, numerical failures and file I/O failures.
"""

from typing import Any, Dict, Optional


class LabelError(Exception):
    """Base exception class for all custom errors raised by the invlabel library."""
    pass


# --- Configuration ---

class ConfigError(LabelError):
    """
    Indicates an invalid, missing or inconsistent configuration value.

    Raised for bad run configs, bad CLI overrides and argument errors such as
    requesting more eigenpairs than the problem has dimensions.
    """
    pass

class TopologyMismatchError(ConfigError):
    """The kernel family cannot be used with the phase-space topology of the samples."""
    pass

class DimensionError(ConfigError):
    """Vectors or matrices handed to an operation have inconsistent lengths."""
    pass

class CenterMismatchError(ConfigError):
    """A label model's centers are not the sample sequence it is evaluated against."""
    pass


# --- Numerical Failures ---

class NumericalError(LabelError):
    """
    Indicates that a numerical procedure could not produce a trustworthy result.

    Attributes:
        message (str): Description of the failure.
        details (Dict[str, Any]): Diagnostic values (condition estimates, step
                                  counts, jitter levels) useful in logs and reports.
    """
    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.details: Dict[str, Any] = details or {}

class IntegrationError(NumericalError):
    """
    The adaptive integrator could not reach the end of the time span.

    Attributes:
        sample_index (Optional[int]): Row of the batch whose trajectory failed.
        iterate_index (Optional[int]): Map iterate during which it failed, when
                                       raised from an iteration.
        steps (Optional[int]): Steps taken by the failing trajectory.
    """
    def __init__(
        self,
        message: str,
        sample_index: Optional[int] = None,
        iterate_index: Optional[int] = None,
        steps: Optional[int] = None,
    ):
        super().__init__(message, {"sample_index": sample_index, "iterate_index": iterate_index, "steps": steps})
        self.sample_index = sample_index
        self.iterate_index = iterate_index
        self.steps = steps

class SingularSystemError(NumericalError):
    """
    A dense linear system is singular within the pivot tolerance.

    Attributes:
        condition (float): 1-norm condition estimate of the system matrix.
    """
    def __init__(self, message: str, condition: float):
        super().__init__(message, {"condition": condition})
        self.condition = condition

class FactorizationError(NumericalError):
    """Cholesky factorization failed even after jitter escalation."""
    def __init__(self, message: str, jitter: float = 0.0):
        super().__init__(message, {"jitter": jitter})
        self.jitter = jitter

class ConvergenceError(NumericalError):
    """An iterative eigensolver did not converge within its iteration cap."""
    pass

class DegenerateError(NumericalError):
    """
    A quantity that must be nonzero vanished: a zero-norm direction in a
    Rayleigh quotient, a constant label in a validation score, or an
    identically-zero model being normalized.
    """
    pass


# --- File I/O ---

class FileIOError(LabelError):
    """
    Reading or writing a data file failed.

    Attributes:
        path (str): The file involved.
    """
    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message)
        self.path = path

class ModelFileError(FileIOError):
    """A model file is malformed or truncated; no partial model is returned."""
    pass

class SchemaVersionError(ModelFileError):
    """A model file declares a schema string this version cannot read."""
    pass
