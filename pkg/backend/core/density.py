"""
Window counts and fractional Beurling density estimates for Gamma sets.
"""

import math
from fractions import Fraction
from typing import List, Sequence, Tuple

from backend.core.algebra import RMatrix, RVector, RationalLike, as_vector, parse_rational
from backend.core.fourier.gamma import GammaLevel, gamma_level, scale_gamma
from backend.models.results import DensityEstimate, DensitySample
from backend.utils.exceptions import DensityError, InsufficientLevelError, ValidationError
from backend.utils.logging import get_logger

logger = get_logger("density")

GAMMA1_DIGITS = (0, 1)
GAMMA1_SCALE = 4


def _first_new_magnitude(gamma: GammaLevel, level: int) -> Fraction:
    """
    Smallest |x| over points that appear after the given level.

    New points at level m+1 are S^{m+1} d + g with d != 0 and g in Gamma_m; with
    digits of one sign and a positive scalar scale they all lie beyond
    S^{m+1} min|d| in the digits' direction.
    """
    digits = [d.entries[0] for d in gamma.digits]
    return gamma.scale.rows[0][0] ** (level + 1) * min(abs(d) for d in digits if d != 0)


def _check_coverage(gamma: GammaLevel, center: Fraction, h: Fraction) -> None:
    if gamma.scale.dim != 1:
        raise DensityError("Window coverage can only be certified in dimension one")
    r = gamma.scale.rows[0][0]
    digits = [d.entries[0] for d in gamma.digits]
    if r <= 1 or not any(digits):
        raise DensityError("Window coverage needs a scale above 1 and a non-zero digit")
    if all(d >= 0 for d in digits):
        reach = center + h
    elif all(d <= 0 for d in digits):
        reach = h - center
    else:
        raise DensityError("Window coverage needs digits of a single sign")
    if _first_new_magnitude(gamma, gamma.level) > reach:
        return
    required = gamma.level + 1
    while _first_new_magnitude(gamma, required) <= reach:
        required += 1
    raise InsufficientLevelError(
        f"Level {gamma.level} does not cover the window; level {required} is required",
        required_level=required,
    )


def count_in_window(gamma: GammaLevel, center, h: RationalLike) -> int:
    """
    Exact number of Gamma points in center + h[-1, 1]^d.

    Args:
        gamma: A Gamma level (possibly scaled)
        center: Window center
        h: Half-width, h >= 0

    Returns:
        The count

    Raises:
        ValidationError: If h < 0
        InsufficientLevelError: If deeper levels could still add points to the window
    """
    half_width = parse_rational(h)
    if half_width < 0:
        raise ValidationError(f"Window half-width must be non-negative, got {half_width}")
    c = as_vector(center)
    _check_coverage(gamma, c.entries[0], half_width)
    return sum(1 for p in gamma.points if (p - c).sup_norm() <= half_width)


def gamma1(level: int, q: RationalLike = 1) -> GammaLevel:
    """Level of q Gamma({0, 1}, 4)."""
    base = gamma_level([RVector.of(d) for d in GAMMA1_DIGITS], RMatrix.scalar(GAMMA1_SCALE), level)
    return base if parse_rational(q) == 1 else scale_gamma(base, q)


def gamma1_windows(n_max: int, q: RationalLike = 1) -> List[Tuple[int, Fraction]]:
    """Windows h_n = q (4^n - 1)/3 for n = 1..n_max."""
    factor = parse_rational(q)
    return [(n, factor * Fraction(4 ** n - 1, 3)) for n in range(1, n_max + 1)]


def beurling_lower_estimate(
    gamma: GammaLevel,
    alpha: float,
    h_sequence: Sequence[Tuple[int, RationalLike]],
    center=0
) -> DensityEstimate:
    """
    count(h)/h^alpha along an explicit sequence of windows around one center.

    Args:
        gamma: Gamma level deep enough for the largest window
        alpha: Exponent in (0, d]
        h_sequence: (label, h) pairs with h > 0
        center: Window center

    Returns:
        DensityEstimate; lower_bound is the largest ratio observed

    Raises:
        ValidationError: If alpha is out of range or some h <= 0
        InsufficientLevelError: If the level does not cover a window
    """
    if not 0 < alpha <= gamma.scale.dim:
        raise ValidationError(f"alpha must lie in (0, {gamma.scale.dim}], got {alpha}")
    samples = []
    for n, h in h_sequence:
        half_width = parse_rational(h)
        if half_width <= 0:
            raise ValidationError(f"Window half-width must be positive, got {half_width}")
        count = count_in_window(gamma, center, half_width)
        ratio = count / math.pow(float(half_width), alpha)
        samples.append(DensitySample(n=n, h=half_width, count=count, ratio=ratio))
        logger.debug(f"n={n} h={half_width}: count {count}, ratio {ratio:.12g}")
    return DensityEstimate(alpha=alpha, samples=tuple(samples))
