"""
Spectral functions sigma, orthogonality of Gamma sets, the duality transform
between the two sides of a system, and the transfer operators T_B, T_L.
"""

from typing import Callable, List, Optional

from backend.core.algebra import RMatrix, RVector, as_vector
from backend.core.fourier.gamma import GammaLevel, gamma_level
from backend.core.fourier.transforms import PointLike, chi, mu_hat
from backend.core.system.hadamard import HadamardSystem
from backend.models.results import SigmaSample, Side
from backend.utils.config import (
    DEFAULT_MUHAT_TOL, DEFAULT_SIGMA_TOL, FLOAT_ROUNDING_ALLOWANCE, MIN_MUHAT_TERM_TOL
)
from backend.utils.exceptions import DualityHypothesisError
from backend.utils.formatting import format_point
from backend.utils.logging import get_logger

logger = get_logger("fourier.spectral")


def frequency_level(system: HadamardSystem, side: Side, n: int) -> GammaLevel:
    """Gamma_n of the candidate spectrum: Gamma(L) with R^T on side B, Gamma(B) with R on side L."""
    return gamma_level(system.frequency_digits(side), system.scale(side), n)


def sigma_partial(
    system: HadamardSystem,
    side: Side,
    t: PointLike,
    n: int,
    tol: float = DEFAULT_SIGMA_TOL,
    gamma: Optional[GammaLevel] = None
) -> SigmaSample:
    """
    Level-n partial sum of sigma(t) = sum_gamma |mu-hat(t + gamma)|^2.

    Terms are added in lexicographic word order. Each mu-hat value carries
    error e, so its squared modulus carries at most 2e; the budget is the sum.
    The per-term tolerance never drops below MIN_MUHAT_TERM_TOL, so on deep
    levels the budget can exceed tol; it is always reported.

    Args:
        system: Validated Hadamard system
        side: Measure whose transform is summed
        t: Evaluation point
        n: Gamma level
        tol: Total tolerance spread over the terms
        gamma: Precomputed frequency level, reused across many t

    Returns:
        SigmaSample with value and error budget
    """
    point = as_vector(t)
    gamma = gamma if gamma is not None else frequency_level(system, side, n)
    term_tol = max(tol / (2 * len(gamma) + 1), MIN_MUHAT_TERM_TOL)
    value = 0.0
    budget = 0.0
    for g in gamma.points:
        result = mu_hat(system, side, point + g, term_tol)
        value += abs(result.value) ** 2
        budget += 2 * result.error_bound + FLOAT_ROUNDING_ALLOWANCE
    return SigmaSample(t=point, level=gamma.level, value=value, muhat_error_budget=budget)


def orthogonality_defect(
    system: HadamardSystem,
    side: Side,
    level: int,
    tol: float = DEFAULT_MUHAT_TOL
) -> float:
    """
    max |mu-hat(gamma - gamma')| over distinct pairs of a Gamma level.

    Only the distinct non-zero differences are evaluated. A value near zero
    means the exponentials of the level are mutually orthogonal.
    """
    gamma = frequency_level(system, side, level)
    differences = {a - b for a in gamma.points for b in gamma.points if a != b}
    worst = 0.0
    for diff in sorted(differences):
        worst = max(worst, abs(mu_hat(system, side, diff, tol).value))
    logger.debug(f"Orthogonality over {len(differences)} differences at level {level}: {worst:.3e}")
    return worst


def gamma_image_matches(system: HadamardSystem, G: RMatrix, n: int) -> bool:
    """Exact set identity G Gamma_n(B) = Gamma_n(L)."""
    gamma_B = gamma_level(system.B, system.R, n)
    gamma_L = gamma_level(system.L, system.R.transpose(), n)
    return {G @ p for p in gamma_B.points} == set(gamma_L.points)


def duality_violations(system: HadamardSystem, G: RMatrix) -> List[str]:
    """Failed hypotheses among R = R^T, G = G^T, GR = RG and G(B) = L."""
    violations = []
    if G.dim != system.d:
        return [f"G has dimension {G.dim}, the system has dimension {system.d}"]
    if not system.R.is_symmetric():
        violations.append("R is not symmetric")
    if not G.is_symmetric():
        violations.append("G is not symmetric")
    if G @ system.R != system.R @ G:
        violations.append("G and R do not commute")
    if G.determinant() == 0:
        violations.append("G is singular")
    image = {G @ b for b in system.B}
    if image != set(system.L):
        missing = sorted(set(system.L) - image)
        violations.append("G(B) != L" + (f", missing {', '.join(format_point(m) for m in missing)}" if missing else ""))
    return violations


def duality_check(
    system: HadamardSystem,
    G: RMatrix,
    t: PointLike,
    n: int,
    tol: float = DEFAULT_SIGMA_TOL
) -> bool:
    """
    Compare sigma_L over Gamma(B) at t with sigma_B over Gamma(L) at Gt.

    The level-n partial sums are equal term by term, so they must agree
    within the two error budgets plus tol.

    Raises:
        DualityHypothesisError: If any hypothesis on R, G, B, L fails
    """
    violations = duality_violations(system, G)
    if violations:
        raise DualityHypothesisError("Duality hypotheses do not hold: " + "; ".join(violations), violations)
    point = as_vector(t)
    left = sigma_partial(system, Side.L, point, n, tol)
    right = sigma_partial(system, Side.B, G @ point, n, tol)
    deviation = abs(left.value - right.value)
    allowed = left.muhat_error_budget + right.muhat_error_budget + tol
    logger.debug(f"Duality at {point}: |{left.value:.12g} - {right.value:.12g}| = {deviation:.3e}")
    return deviation <= allowed


def transfer_apply(system: HadamardSystem, side: Side, f: Callable[[RVector], float], t: PointLike) -> float:
    """
    One application of the transfer operator.

    Side B: (T_B f)(t) = sum_l |chi_B(tau_l t)|^2 f(tau_l t) with
    tau_l(t) = (R^T)^{-1}(t + l). Side L swaps the roles of B and L and uses R.
    """
    point = as_vector(t)
    inverse = system.scale(side).inverse()
    weights_digits = system.measure_digits(side)
    total = 0.0
    for d in system.frequency_digits(side):
        image = inverse @ (point + d)
        weight = abs(chi(weights_digits, image)) ** 2
        if weight:
            total += weight * f(image)
    return total
