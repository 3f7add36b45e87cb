"""
Characters chi of a digit set and the infinite-product Fourier transform mu-hat.
"""

import math
from fractions import Fraction
from typing import Sequence, Tuple, Union

import numpy as np

from backend.core.algebra import (
    RMatrix, RVector, as_vector, contraction_tail_bound, inverse_powers, reduced_angle
)
from backend.core.system.hadamard import HadamardSystem
from backend.models.results import MuHatResult, Side
from backend.utils.config import (
    DEFAULT_MUHAT_TOL, FLOAT_ROUNDING_ALLOWANCE, MUHAT_TRUNCATION_CAP
)
from backend.utils.exceptions import TruncationError, ValidationError
from backend.utils.logging import get_logger

logger = get_logger("fourier.transforms")

PointLike = Union[RVector, Sequence, float, int, Fraction, np.ndarray]


def _exact_chi(digits: Sequence[RVector], x: Tuple[Fraction, ...]) -> complex:
    total = 0j
    for d in digits:
        angle = reduced_angle(sum((a * b for a, b in zip(d.entries, x)), Fraction(0)))
        total += complex(np.exp(2j * np.pi * float(angle)))
    return total / len(digits)


def chi(digits: Sequence[RVector], t: PointLike) -> complex:
    """
    chi(t) = (1/N) sum_d exp(2 pi i d.t).

    Exact inputs (RVector, Fraction, int) have their angles reduced mod 1 in
    rational arithmetic before exponentiation; float inputs are reduced in
    floating point.

    Args:
        digits: Digit set
        t: Point, exact or floating

    Returns:
        Complex value of modulus at most one
    """
    if isinstance(t, RVector):
        return _exact_chi(digits, t.entries)
    if isinstance(t, (int, Fraction)) and not isinstance(t, bool):
        return _exact_chi(digits, (Fraction(t),))
    x = np.atleast_1d(np.asarray(t, dtype=float))
    D = np.array([d.to_numpy() for d in digits])
    angles = np.mod(D @ x, 1.0)
    return complex(np.mean(np.exp(2j * np.pi * angles)))


def chi_is_extreme(digits: Sequence[RVector], x: PointLike) -> bool:
    """Exact test of |chi(x)| = 1: every d.x must be an integer."""
    point = as_vector(x)
    return all(d.dot(point).denominator == 1 for d in digits)


def _max_digit_l1(digits: Sequence[RVector]) -> Fraction:
    return max((d.l1_norm() for d in digits), default=Fraction(0))


def _truncation_level(scale: RMatrix, prefactor: Fraction, tol: float) -> Tuple[int, float]:
    """
    Smallest K whose tail estimate plus rounding allowance is below tol.

    |chi(s) - 1| <= 2 pi max|d|_1 |s|_inf, and a product of factors of modulus
    at most one moves by at most the sum of the factor deviations, so the
    omitted factors k > K change the value by at most
    2 pi max|d|_1 |t|_inf sum_{k>K} |S^{-k}|_inf.
    """
    for K in range(MUHAT_TRUNCATION_CAP + 1):
        bound = 2 * math.pi * float(prefactor * contraction_tail_bound(scale, K))
        bound += (K + 1) * FLOAT_ROUNDING_ALLOWANCE
        if bound < tol:
            return K, bound
    raise TruncationError(
        f"Tolerance {tol} cannot be certified within {MUHAT_TRUNCATION_CAP} factors"
    )


def infinite_product(digits: Sequence[RVector], scale: RMatrix, t: PointLike, tol: float) -> MuHatResult:
    """
    prod_{k>=1} chi(S^{-k} t), truncated with a certified error bound.

    Raises:
        TruncationError: If the tolerance needs more factors than the cap allows
    """
    if tol <= 0:
        raise ValidationError(f"Tolerance must be positive, got {tol}")
    point = as_vector(t)
    if point.dim != scale.dim:
        raise ValidationError(f"Point {point} has dimension {point.dim}, expected {scale.dim}")
    if point.is_zero():
        return MuHatResult(value=1 + 0j, truncation_K=0, error_bound=0.0)

    prefactor = _max_digit_l1(digits) * point.sup_norm()
    K, bound = _truncation_level(scale, prefactor, tol)

    value = 1 + 0j
    if scale.dim == 1:
        x = point.entries[0]
        for power in inverse_powers(scale, K):
            value *= _exact_chi(digits, (power.rows[0][0] * x,))
    else:
        for power in inverse_powers(scale, K):
            value *= _exact_chi(digits, (power @ point).entries)
    return MuHatResult(value=value, truncation_K=K, error_bound=bound)


def mu_hat(system: HadamardSystem, side: Side, t: PointLike, tol: float = DEFAULT_MUHAT_TOL) -> MuHatResult:
    """
    Fourier transform of mu_B (side B) or mu_L (side L) at t.

    mu_B-hat(t) = prod chi_B((R^T)^{-k} t) and mu_L-hat(xi) = prod chi_L(R^{-k} xi).

    Args:
        system: Validated Hadamard system
        side: Which measure
        t: Frequency, exact or float (floats are taken at their exact binary value)
        tol: Certified bound on the truncation error

    Returns:
        MuHatResult with the value, truncation level and error bound

    Raises:
        TruncationError: If tol cannot be reached within the factor cap
    """
    return infinite_product(system.measure_digits(side), system.scale(side), t, tol)


def mu_hat_functional_check(
    system: HadamardSystem,
    side: Side,
    t: PointLike,
    tol: float = DEFAULT_MUHAT_TOL
) -> bool:
    """Check mu-hat(t) = chi(S^{-1} t) mu-hat(S^{-1} t) within the combined error."""
    point = as_vector(t)
    scale = system.scale(side)
    shrunk = scale.inverse() @ point
    left = mu_hat(system, side, point, tol)
    right = mu_hat(system, side, shrunk, tol)
    rhs = chi(system.measure_digits(side), shrunk) * right.value
    deviation = abs(left.value - rhs)
    allowed = left.error_bound + right.error_bound + tol
    logger.debug(f"Functional equation at {point}: deviation {deviation:.3e}, allowed {allowed:.3e}")
    return deviation <= allowed


def cantor_closed_form(t: float, K: int = 60) -> complex:
    """exp(2 pi i t/3) prod_{k=1}^{K} cos(2 pi t / 4^k), the transform for R = 4, B = {0, 2}."""
    k = np.arange(1, K + 1, dtype=float)
    return complex(np.exp(2j * np.pi * t / 3) * np.prod(np.cos(2 * np.pi * t / 4.0 ** k)))
