"""
Result containers shared by the fourier, cycles and density modules.
Each container knows how to serialize itself for the CLI's JSON output.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from backend.core.algebra import RMatrix, RVector
from backend.utils.config import (
    DEFAULT_MAX_WORD_LENGTH, DEFAULT_NODE_CAP, DEFAULT_SIMPLE_CYCLE_CAP, DEFAULT_WORD_CAP
)
from backend.utils.exceptions import CycleVerificationError, ValidationError
from backend.utils.formatting import format_complex, format_float, format_point, format_rational


class Side(str, Enum):
    """
    Which measure a computation is about.

    Side B concerns mu_B: frequencies Gamma(L) built with R^T, cycles driven by
    the maps (R^T)^{-1}(x + l) and tested for B-extremality. Side L is the
    mirror image with R, Gamma(B) and L-extremality.
    """
    B = "B"
    L = "L"

    @property
    def other(self) -> "Side":
        return Side.L if self is Side.B else Side.B


class Verdict(str, Enum):
    ONB = "ONB"
    NOT_ONB = "NotONB"
    INCONCLUSIVE = "InconclusiveNoCyclesFound"


class SearchMode(str, Enum):
    LATTICE = "lattice"
    WORDS = "words"


@dataclass(frozen=True)
class MuHatResult:
    """Truncated Fourier transform value with a certified error bound."""
    value: complex
    truncation_K: int
    error_bound: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": format_complex(self.value),
            "real": format_float(self.value.real),
            "imag": format_float(self.value.imag),
            "abs": format_float(abs(self.value)),
            "truncation_K": self.truncation_K,
            "error_bound": format_float(self.error_bound),
        }


@dataclass(frozen=True)
class SigmaSample:
    """Partial sum of a spectral function at one point and one level."""
    t: RVector
    level: int
    value: float
    muhat_error_budget: float

    @property
    def gap(self) -> float:
        """Distance below one; negative values stay within the error budget."""
        return 1.0 - self.value

    def to_dict(self) -> Dict[str, Any]:
        return {
            "t": format_point(self.t),
            "level": self.level,
            "value": format_float(self.value),
            "gap": format_float(self.gap),
            "muhat_error_budget": format_float(self.muhat_error_budget),
        }


@dataclass(frozen=True)
class ExtremeCycle:
    """
    A cycle of the dual maps on which |chi| = 1 for the test digit set.

    points[i + 1] = scale^{-1}(points[i] + digits[i]), indices mod length.
    """
    points: Tuple[RVector, ...]
    digits: Tuple[RVector, ...]
    side: Side

    def __post_init__(self):
        if len(self.points) == 0 or len(self.points) != len(self.digits):
            raise ValidationError("A cycle needs equally many points and digits, at least one of each")

    @property
    def length(self) -> int:
        return len(self.points)

    @property
    def is_trivial(self) -> bool:
        return self.length == 1 and self.points[0].is_zero()

    def canonical(self) -> "ExtremeCycle":
        """Rotate so the lexicographically smallest point comes first."""
        start = min(range(self.length), key=lambda i: self.points[i])
        return ExtremeCycle(
            points=self.points[start:] + self.points[:start],
            digits=self.digits[start:] + self.digits[:start],
            side=self.side,
        )

    def sort_key(self) -> Tuple:
        return tuple(p.entries for p in self.points)

    def verify(self, scale: RMatrix, test_digits: Sequence[RVector]) -> None:
        """
        Re-check closure and extremality exactly.

        Args:
            scale: Matrix whose inverse drives the cycle maps
            test_digits: Digit set tested for extremality

        Raises:
            CycleVerificationError: If a map step or an extremality test fails
        """
        inverse = scale.inverse()
        for i, (x, d) in enumerate(zip(self.points, self.digits)):
            image = inverse @ (x + d)
            expected = self.points[(i + 1) % self.length]
            if image != expected:
                raise CycleVerificationError(
                    f"Cycle step {i} maps {format_point(x)} to {format_point(image)}, "
                    f"expected {format_point(expected)}"
                )
            for b in test_digits:
                if b.dot(x).denominator != 1:
                    raise CycleVerificationError(
                        f"Point {format_point(x)} is not extreme: {format_point(b)}.x = {b.dot(x)}"
                    )
        if len(set(self.points)) != self.length:
            raise CycleVerificationError("Cycle repeats a point, it is not simple")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "side": self.side.value,
            "length": self.length,
            "points": [format_point(p) for p in self.points],
            "digits": [format_point(d) for d in self.digits],
        }


@dataclass(frozen=True)
class CycleSearchConfig:
    """Search mode and the caps that keep a search bounded."""
    mode: SearchMode = SearchMode.LATTICE
    max_word_length: int = DEFAULT_MAX_WORD_LENGTH
    node_cap: int = DEFAULT_NODE_CAP
    word_cap: int = DEFAULT_WORD_CAP
    simple_cycle_cap: int = DEFAULT_SIMPLE_CYCLE_CAP

    def __post_init__(self):
        object.__setattr__(self, "mode", SearchMode(self.mode))
        for name in ("max_word_length", "node_cap", "word_cap", "simple_cycle_cap"):
            value = getattr(self, name)
            if not isinstance(value, int) or value <= 0:
                raise ValidationError(f"{name} must be a positive integer, got {value!r}")


@dataclass
class SpectralReport:
    """Verdict on whether a Gamma set is an orthonormal basis, with its evidence."""
    side: Side
    cycles: List[ExtremeCycle]
    verdict: Verdict
    dimension_note: str = ""
    exhaustive: bool = False
    trivial_cycle_seen: bool = False
    system_name: Optional[str] = None
    sigma_samples: List[SigmaSample] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "system": self.system_name,
            "side": self.side.value,
            "verdict": self.verdict.value,
            "exhaustive": self.exhaustive,
            "trivial_cycle_seen": self.trivial_cycle_seen,
            "dimension_note": self.dimension_note,
            "cycles": [c.to_dict() for c in self.cycles],
            "sigma_samples": [s.to_dict() for s in self.sigma_samples],
        }


@dataclass(frozen=True)
class ScanRow:
    """One parameter value of an admissibility scan."""
    p: Fraction
    cycles: Tuple[ExtremeCycle, ...]
    error: Optional[str] = None

    @property
    def admissible(self) -> bool:
        return bool(self.cycles)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": format_rational(self.p),
            "cycles": [c.to_dict() for c in self.cycles],
            "error": self.error,
        }


@dataclass(frozen=True)
class DensitySample:
    n: int
    h: Fraction
    count: int
    ratio: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "h": format_rational(self.h),
            "count": self.count,
            "ratio": format_float(self.ratio),
        }


@dataclass(frozen=True)
class DensityEstimate:
    """Window counts normalized by h^alpha along an explicit h-sequence."""
    alpha: float
    samples: Tuple[DensitySample, ...]

    @property
    def lower_bound(self) -> float:
        return max((s.ratio for s in self.samples), default=0.0)

    @property
    def tail_ratio(self) -> float:
        """Ratio at the largest window in the sequence."""
        if not self.samples:
            return 0.0
        return max(self.samples, key=lambda s: s.h).ratio

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": format_float(self.alpha),
            "lower_bound": format_float(self.lower_bound),
            "tail_ratio": format_float(self.tail_ratio),
            "samples": [s.to_dict() for s in self.samples],
        }
