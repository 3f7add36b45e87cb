"""
Custom exception classes for the Hadamard duality tools.
Provides consistent error handling across all modules.
"""

from typing import List, Optional, Sequence, Tuple


class HadamardToolsError(Exception):
    """Base exception for all Hadamard duality tools errors."""
    pass


# Algebra

class AlgebraError(HadamardToolsError):
    """Base exception for exact linear algebra operations."""
    pass


class SingularMatrixError(AlgebraError):
    """Raised when a matrix inverse is requested for a singular matrix."""
    pass


class NonIntegerMatrixError(AlgebraError):
    """Raised when an operation requires an integer matrix."""
    pass


class NotExpansiveError(AlgebraError):
    """Raised when an operation requires an expansive matrix."""
    pass


class ExpansivenessUndecidedError(AlgebraError):
    """Raised when the norm-decay test and the eigenvalue test cannot agree."""
    pass


class IterationCapError(AlgebraError):
    """Raised when a finite-state iteration exceeds its sanity cap."""
    pass


# Systems

class HadamardSystemError(HadamardToolsError):
    """Base exception for Hadamard system construction."""
    pass


class MalformedSystemError(HadamardSystemError):
    """Raised when the triple (R, B, L) has inconsistent dimensions."""
    pass


class InvalidSystemError(HadamardSystemError):
    """Raised when a triple that failed validation is used as a system."""

    def __init__(self, message: str, failures: Optional[Sequence] = None):
        super().__init__(message)
        self.failures = list(failures or [])


class SystemFileError(HadamardSystemError):
    """Raised when a system description file cannot be read or parsed."""
    pass


# Fourier data

class FourierError(HadamardToolsError):
    """Base exception for Fourier transform and spectral function evaluation."""
    pass


class TruncationError(FourierError):
    """Raised when a tolerance cannot be certified within the iteration cap."""
    pass


class GammaCapExceededError(FourierError):
    """Raised when a Gamma level would exceed the configured point cap."""

    def __init__(self, message: str, requested: int = 0, cap: int = 0):
        super().__init__(message)
        self.requested = requested
        self.cap = cap


class GammaCollisionError(FourierError):
    """Raised when two distinct digit words produce the same Gamma point."""

    def __init__(self, message: str, words: Tuple[Tuple[int, ...], Tuple[int, ...]] = ((), ())):
        super().__init__(message)
        self.words = words


class DualityHypothesisError(FourierError):
    """Raised when the hypotheses of the duality transform do not hold."""

    def __init__(self, message: str, violations: Optional[List[str]] = None):
        super().__init__(message)
        self.violations = list(violations or [])


# Cycles

class CycleSearchError(HadamardToolsError):
    """Base exception for extreme-cycle searches."""
    pass


class NodeCapExceededError(CycleSearchError):
    """Raised when the lattice graph has more candidate nodes than allowed."""

    def __init__(self, message: str, node_count: int = 0, cap: int = 0):
        super().__init__(message)
        self.node_count = node_count
        self.cap = cap


class WordCapExceededError(CycleSearchError):
    """Raised when word enumeration would exceed the configured cap."""
    pass


class CycleVerificationError(CycleSearchError):
    """Raised when a cycle fails exact closure or extremality checks."""
    pass


class UnsupportedDimensionError(CycleSearchError):
    """Raised when a search mode is used outside the dimensions it supports."""
    pass


# Density

class DensityError(HadamardToolsError):
    """Base exception for window counting and density estimation."""
    pass


class InsufficientLevelError(DensityError):
    """Raised when a Gamma level is too shallow to cover a counting window."""

    def __init__(self, message: str, required_level: int = 0):
        super().__init__(message)
        self.required_level = required_level


# Configuration and input

class ConfigurationError(HadamardToolsError):
    """Raised when there is a configuration error."""
    pass


class ValidationError(HadamardToolsError):
    """Raised when input validation fails."""
    pass
