"""
Finite levels of the frequency sets Gamma(D) = { sum_k S^k d_k } and point
clouds of the attractors X(D) = { sum_k S^{-k} d_k }.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from backend.core.algebra import RMatrix, RVector, RationalLike, inverse_powers, parse_rational
from backend.utils.config import get_settings
from backend.utils.exceptions import GammaCapExceededError, GammaCollisionError, ValidationError
from backend.utils.formatting import format_point
from backend.utils.logging import get_logger

logger = get_logger("fourier.gamma")


@dataclass(frozen=True)
class GammaLevel:
    """
    Gamma_n: all sums sum_{k=0}^{n} S^k d_k over words (d_0, ..., d_n).

    Points are stored in lexicographic word order with d_0 most significant,
    which fixes the summation order of every spectral-function partial sum.
    """
    digits: Tuple[RVector, ...]
    scale: RMatrix
    level: int
    points: Tuple[RVector, ...]

    def __len__(self) -> int:
        return len(self.points)

    def word(self, index: int) -> Tuple[int, ...]:
        """Digit indices (d_0, ..., d_n) of the point at a position."""
        N = len(self.digits)
        indices = []
        for _ in range(self.level + 1):
            index, r = divmod(index, N)
            indices.append(r)
        return tuple(reversed(indices))


def _check_count(N: int, levels: int, cap: int) -> int:
    count = N ** levels
    if count > cap:
        raise GammaCapExceededError(
            f"{N}^{levels} = {count} points exceed the cap of {cap}", requested=count, cap=cap
        )
    return count


def gamma_level(digits: Sequence[RVector], scale: RMatrix, n: int, cap: Optional[int] = None) -> GammaLevel:
    """
    Enumerate Gamma_n for a digit set and a scale matrix.

    Args:
        digits: Digit set, 0 included
        scale: R or R^T
        n: Level, n >= 0
        cap: Maximum point count (defaults to HADAMARD_GAMMA_CAP)

    Returns:
        GammaLevel with N^(n+1) distinct points

    Raises:
        GammaCapExceededError: If N^(n+1) exceeds the cap
        GammaCollisionError: If two words give the same point
    """
    if n < 0:
        raise ValidationError(f"Level must be non-negative, got {n}")
    digits = tuple(digits)
    cap = cap if cap is not None else get_settings().gamma_cap
    _check_count(len(digits), n + 1, cap)

    power = RMatrix.identity(scale.dim)
    points: List[RVector] = list(digits)
    for _ in range(n):
        power = power @ scale
        scaled = [power @ d for d in digits]
        points = [p + s for p in points for s in scaled]

    result = GammaLevel(digits=digits, scale=scale, level=n, points=tuple(points))
    seen = {}
    for index, point in enumerate(points):
        first = seen.setdefault(point, index)
        if first != index:
            words = (result.word(first), result.word(index))
            raise GammaCollisionError(
                f"Words {words[0]} and {words[1]} both give {format_point(point)}", words=words
            )
    logger.debug(f"Gamma level {n}: {len(points)} points")
    return result


def scale_gamma(gamma: GammaLevel, q: RationalLike) -> GammaLevel:
    """q Gamma(D) = Gamma(qD) for a nonzero scalar q."""
    factor = parse_rational(q)
    if factor == 0:
        raise ValidationError("Scaling factor must be nonzero")
    return GammaLevel(
        digits=tuple(d.scaled(factor) for d in gamma.digits),
        scale=gamma.scale,
        level=gamma.level,
        points=tuple(p.scaled(factor) for p in gamma.points),
    )


def attractor_points(digits: Sequence[RVector], scale: RMatrix, depth: int, cap: Optional[int] = None) -> List[RVector]:
    """
    Sorted distinct points sum_{k=1}^{depth} S^{-k} d_k; depth 0 gives {0}.

    Raises:
        GammaCapExceededError: If N^depth exceeds the cap
    """
    if depth < 0:
        raise ValidationError(f"Depth must be non-negative, got {depth}")
    cap = cap if cap is not None else get_settings().gamma_cap
    _check_count(len(digits), depth, cap)
    points = {RVector.zero(scale.dim)}
    for power in inverse_powers(scale, depth):
        shifts = [power @ d for d in digits]
        points = {p + s for p in points for s in shifts}
    return sorted(points)
