"""
Claim inventory: every reference number the toolkit must reproduce, each with
a check that recomputes it from scratch.
"""

import difflib
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from backend.core.algebra import RMatrix
from backend.core.cycles.admissibility import (
    family_system, geometric_cycle, geometric_instance, geometric_system, multiple_fixed_point,
    odd_values, scan_admissibility
)
from backend.core.cycles.detection import find_cycles_lattice_1d, spectral_report
from backend.core.density import beurling_lower_estimate, count_in_window, gamma1, gamma1_windows
from backend.core.fourier.gamma import attractor_points
from backend.core.fourier.spectral import (
    duality_check, frequency_level, gamma_image_matches, orthogonality_defect, sigma_partial,
    transfer_apply
)
from backend.core.fourier.transforms import cantor_closed_form, mu_hat
from backend.core.system.hadamard import standard_system, validate
from backend.core.system.io import load_system
from backend.core.tables import frame_to_csv, onb_values, scan_frame
from backend.models.results import CycleSearchConfig, SearchMode, Side, Verdict
from backend.utils.config import GOLDEN_TABLE_FIXTURE, REPRODUCE_SEED, SYSTEMS_DIR
from backend.utils.exceptions import HadamardToolsError
from backend.utils.formatting import format_float, join_points
from backend.utils.logging import get_logger

logger = get_logger("reproduce")

ONB_LIST_P100 = [
    1, 5, 7, 11, 13, 17, 19, 23, 25, 29, 31, 35, 37, 41, 43, 47, 49, 53, 55, 59, 61, 65,
    67, 71, 73, 77, 79, 83, 89, 91, 95, 97,
]

GEOMETRIC_CYCLES = {
    2: (85, ["7", "23", "27", "28"]),
    3: (9331, ["933/2", "4821/2", "5469/2", "5577/2", "5595/2", "2799"]),
    4: (2396745, ["85598", "609886", "675422", "683614", "684638", "684766", "684782", "684784"]),
}

MULTIPLE_FIXED_POINTS = {(2, 3): Fraction(1), (3, 5): Fraction(3, 2), (4, 7): Fraction(2)}

CheckOutcome = Tuple[bool, str]


@dataclass(frozen=True)
class Claim:
    name: str
    description: str
    check: Callable[["ReproduceContext"], CheckOutcome]


@dataclass
class ClaimResult:
    name: str
    passed: bool
    detail: str

    def to_dict(self) -> Dict[str, Union[str, bool]]:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class ReproduceContext:
    """Inputs shared by the checks."""
    fixture_path: Path = GOLDEN_TABLE_FIXTURE
    seed: int = REPRODUCE_SEED
    workers: Optional[int] = None

    def rng(self, salt: int) -> random.Random:
        return random.Random(self.seed + salt)


def golden_table_diff(actual_csv: str, fixture_path: Path) -> List[str]:
    """Unified diff lines between the fixture and freshly computed CSV; empty when equal."""
    expected = Path(fixture_path).read_text(encoding="utf-8")
    if expected == actual_csv:
        return []
    return list(difflib.unified_diff(
        expected.splitlines(keepends=True),
        actual_csv.splitlines(keepends=True),
        fromfile=str(fixture_path),
        tofile="computed",
    ))


def _check_golden_table(ctx: ReproduceContext) -> CheckOutcome:
    rows = scan_admissibility(4, odd_values(100), workers=ctx.workers)
    diff = golden_table_diff(frame_to_csv(scan_frame(rows)), ctx.fixture_path)
    if diff:
        return False, "".join(diff)
    onb = onb_values(rows)
    if onb != [str(p) for p in ONB_LIST_P100]:
        return False, f"ONB list differs: {', '.join(onb)}"
    return True, f"{sum(1 for r in rows if r.cycles)} admissible values, {len(onb)} ONB values"


def _check_geometric_cycles(ctx: ReproduceContext) -> CheckOutcome:
    details = []
    for n, (p_expected, points) in GEOMETRIC_CYCLES.items():
        p, length = geometric_instance(n)
        if p != p_expected or length != 2 * n:
            return False, f"n={n}: got p={p}, length={length}"
        predicted = geometric_cycle(n)
        found = find_cycles_lattice_1d(geometric_system(n), Side.B)
        if join_points(predicted.points) != ";".join(points):
            return False, f"n={n}: constructed cycle {join_points(predicted.points)}"
        if predicted not in found:
            return False, f"n={n}: detector missed {join_points(predicted.points)}"
        details.append(f"n={n}: p={p}, {len(found)} cycle(s)")
    return True, "; ".join(details)


def _check_powers_of_five(ctx: ReproduceContext) -> CheckOutcome:
    rows = scan_admissibility(4, [5 ** k for k in range(7)], workers=ctx.workers)
    bad = [str(r.p) for r in rows if r.cycles or r.error]
    if bad:
        return False, f"cycles or errors for p = {', '.join(bad)}"
    return True, "no non-trivial cycles for p = 5^k, k <= 6"


def _check_multiple_fixed_points(ctx: ReproduceContext) -> CheckOutcome:
    for (n, p), expected in MULTIPLE_FIXED_POINTS.items():
        t = multiple_fixed_point(n, p)
        if t != expected or t != Fraction(n * p, 2 * (2 * n - 1)):
            return False, f"(n, p) = ({n}, {p}): got {t}, expected {expected}"
    return True, "fixed points 1, 3/2, 2"


def _check_orthogonality(ctx: ReproduceContext) -> CheckOutcome:
    worst = 0.0
    for N, q in ((2, 2), (3, 2), (4, 2)):
        system = standard_system(N, q)
        for side in (Side.B, Side.L):
            worst = max(worst, orthogonality_defect(system, side, 3))
    return worst < 1e-8, f"max |mu-hat(gamma - gamma')| = {format_float(worst)}"


def _check_sigma_properties(ctx: ReproduceContext) -> CheckOutcome:
    system = standard_system(2, 2)
    rng = ctx.rng(1)
    level = 6
    gamma = frequency_level(system, Side.B, level)
    at_zero = sigma_partial(system, Side.B, 0, level, gamma=gamma)
    if abs(at_zero.value - 1) > 1e-8:
        return False, f"sigma(0) = {format_float(at_zero.value)}"
    for _ in range(100):
        sample = sigma_partial(system, Side.B, rng.uniform(-5, 5), level, gamma=gamma)
        if sample.value > 1 + 1e-8:
            return False, f"sigma({sample.t}) = {format_float(sample.value)} exceeds 1"
    t = Fraction(3, 10)
    values = [sigma_partial(system, Side.B, t, n).value for n in range(level + 1)]
    if any(b < a - 1e-12 for a, b in zip(values, values[1:])):
        return False, "sigma partial sums are not monotone in the level"
    worst_qmf = 0.0
    worst_transfer = 0.0
    for _ in range(20):
        t = Fraction(rng.uniform(-5, 5))
        worst_qmf = max(worst_qmf, abs(transfer_apply(system, Side.B, lambda x: 1.0, t) - 1))
        step = transfer_apply(system, Side.B, lambda x: sigma_partial(system, Side.B, x, 3).value, t)
        worst_transfer = max(worst_transfer, abs(step - sigma_partial(system, Side.B, t, 4).value))
    if worst_qmf > 1e-12:
        return False, f"QMF identity off by {format_float(worst_qmf)}"
    if worst_transfer > 1e-8:
        return False, f"transfer recursion off by {format_float(worst_transfer)}"
    return True, f"QMF {format_float(worst_qmf)}, transfer {format_float(worst_transfer)}"


def _check_duality(ctx: ReproduceContext) -> CheckOutcome:
    rng = ctx.rng(2)
    for p in (5, 7):
        system = family_system(4, p)
        G = RMatrix.scalar(Fraction(p, 2))
        if not all(gamma_image_matches(system, G, n) for n in range(6)):
            return False, f"p={p}: G Gamma_n(B) != Gamma_n(L)"
        for _ in range(10):
            if not duality_check(system, G, rng.uniform(-3, 3), 5, 1e-8):
                return False, f"p={p}: sigma identity fails"
    return True, "set identity n <= 5 and sigma identity at 10 points for p = 5, 7"


def _check_closed_form(ctx: ReproduceContext) -> CheckOutcome:
    system = standard_system(2, 2)
    worst = max(abs(mu_hat(system, Side.B, t).value - cantor_closed_form(t)) for t in (0.3, 1.0, 7.25, -2.6))
    return worst < 1e-9, f"max deviation {format_float(worst)}"


def _check_parity_gate(ctx: ReproduceContext) -> CheckOutcome:
    wrong = [p for p in range(1, 21) if validate(4, [0, 2], [0, p]).ok != (p % 2 == 1)]
    return not wrong, "validation passes exactly for odd p" if not wrong else f"wrong for p = {wrong}"


def _check_density(ctx: ReproduceContext) -> CheckOutcome:
    base = gamma1(11)
    for n, h in gamma1_windows(12):
        if count_in_window(base, 0, h) != 2 ** n:
            return False, f"count at n={n} is not 2^{n}"
    estimate = beurling_lower_estimate(gamma1(9), 0.5, gamma1_windows(10))
    if abs(estimate.tail_ratio - math.sqrt(3)) > 1e-4:
        return False, f"ratio at n=10 is {format_float(estimate.tail_ratio)}"
    scaled = gamma1(9, 5)
    for (n, h), (_, h5) in zip(gamma1_windows(10), gamma1_windows(10, 5)):
        if count_in_window(scaled, 0, h5) != count_in_window(gamma1(9), 0, h):
            return False, f"scaling law fails at n={n}"
    return True, f"ratio at n=10: {format_float(estimate.tail_ratio)}"


def _check_named_verdicts(ctx: ReproduceContext) -> CheckOutcome:
    eight_adic = load_system(SYSTEMS_DIR / "eight_adic.json").require()
    report = spectral_report(eight_adic, Side.B)
    if report.verdict is not Verdict.NOT_ONB or [join_points(c.points) for c in report.cycles] != ["1"]:
        return False, f"eight-adic Gamma(L): {report.verdict.value}"
    if spectral_report(eight_adic, Side.L).verdict is not Verdict.ONB:
        return False, "eight-adic Gamma(B) is not ONB"

    planar = load_system(SYSTEMS_DIR / "planar_ternary.json").require()
    words = CycleSearchConfig(mode=SearchMode.WORDS, max_word_length=2)
    report = spectral_report(planar, Side.L, words)
    if report.verdict is not Verdict.NOT_ONB or [join_points(c.points) for c in report.cycles] != ["(0,1/2)"]:
        return False, f"planar Gamma(B): {report.verdict.value}"
    report = spectral_report(planar, Side.B, CycleSearchConfig(mode=SearchMode.WORDS, max_word_length=6))
    if report.verdict is not Verdict.INCONCLUSIVE or report.cycles:
        return False, f"planar Gamma(L): {report.verdict.value}"
    return True, "eight-adic NotONB/ONB, planar NotONB/Inconclusive"


def _check_attractor_line(ctx: ReproduceContext) -> CheckOutcome:
    planar = load_system(SYSTEMS_DIR / "planar_ternary.json").require()
    points = attractor_points(planar.L, planar.R.transpose(), 6)
    half = Fraction(1, 2)
    off = [p for p in points if p[1] != 2 * p[0] or not -half <= p[0] <= half]
    return not off, f"{len(points)} points on the segment t(1,2), |t| <= 1/2"


def _check_onb_sigma(ctx: ReproduceContext) -> CheckOutcome:
    system = family_system(4, 1)
    rng = ctx.rng(3)
    level = 12
    gamma = frequency_level(system, Side.B, level)
    gaps = []
    for _ in range(5):
        sample = sigma_partial(system, Side.B, rng.uniform(0, 1), level, gamma=gamma)
        gaps.append(sample.gap)
    worst = max(gaps)
    if worst > 0.1:
        return False, f"largest gap {format_float(worst)}"
    return True, f"gaps at level {level}: " + ", ".join(format_float(g) for g in gaps)


CLAIMS: List[Claim] = [
    Claim("golden_table", "Cycle table for R=4, L={0,p}, odd p <= 100, and its ONB complement", _check_golden_table),
    Claim("geometric_cycles", "Length-2n cycles for p = sum (2n)^i, n = 2, 3, 4", _check_geometric_cycles),
    Claim("powers_of_five", "No non-trivial cycles for p = 5^k, k <= 6", _check_powers_of_five),
    Claim("multiple_fixed_points", "Fixed points np/(2(2n-1)) for (n,p) = (2,3), (3,5), (4,7)", _check_multiple_fixed_points),
    Claim("orthogonality", "Gamma levels are orthogonal for the standard systems N = 2, 3, 4", _check_orthogonality),
    Claim("sigma_properties", "sigma(0)=1, sigma<=1, monotone levels, QMF and transfer recursion", _check_sigma_properties),
    Claim("duality", "G Gamma(B) = Gamma(L) and the sigma identity for p = 5, 7", _check_duality),
    Claim("closed_form", "mu-hat for R=4, B={0,2} matches the cosine product", _check_closed_form),
    Claim("parity_gate", "(4,{0,2},{0,p}) is a Hadamard system iff p is odd", _check_parity_gate),
    Claim("density", "Window counts 2^n, ratio limit sqrt(3), scaling law", _check_density),
    Claim("named_verdicts", "Verdicts for the eight-adic and the planar ternary systems", _check_named_verdicts),
    Claim("attractor_line", "The planar ternary X(L) lies on a segment", _check_attractor_line),
    Claim("onb_sigma", "sigma at level 12 is close to 1 for the ONB case p = 1", _check_onb_sigma),
]


def claim_names() -> List[str]:
    return [c.name for c in CLAIMS]


def run_claims(names: Optional[Sequence[str]] = None, context: Optional[ReproduceContext] = None) -> List[ClaimResult]:
    """
    Run the selected claims (all by default) and collect their outcomes.

    A check that raises counts as failed; the exception text becomes the detail.
    """
    context = context or ReproduceContext()
    selected = [c for c in CLAIMS if names is None or c.name in names]
    unknown = set(names or ()) - set(claim_names())
    if unknown:
        raise HadamardToolsError(f"Unknown claim(s): {', '.join(sorted(unknown))}")
    results = []
    for claim in selected:
        try:
            passed, detail = claim.check(context)
        except (HadamardToolsError, OSError) as e:
            passed, detail = False, f"{type(e).__name__}: {e}"
        if passed:
            logger.info(f"Claim {claim.name} passed: {detail}")
        else:
            logger.error(f"Claim {claim.name} failed: {detail}")
        results.append(ClaimResult(claim.name, passed, detail))
    return results
