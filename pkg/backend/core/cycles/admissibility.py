"""
Admissibility scans over the family R = 2n, B = {0, 2}, L = {0, p} or
{0, np/2}, scaled cycles, and the explicit finite-cycle constructions.
"""

import multiprocessing
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from backend.core.algebra import RationalLike, RVector, parse_rational
from backend.core.cycles.detection import cycle_from_word, find_cycles_lattice_1d
from backend.core.system.hadamard import HadamardSystem, validate
from backend.models.results import CycleSearchConfig, ExtremeCycle, ScanRow, Side
from backend.utils.config import CONVENTION_NP_HALF, CONVENTION_P, L_CONVENTIONS, get_settings
from backend.utils.exceptions import CycleVerificationError, HadamardToolsError, ValidationError
from backend.utils.formatting import format_rational
from backend.utils.logging import get_logger

logger = get_logger("cycles.admissibility")

CANTOR_B = (0, 2)


def family_digit(R: int, p: RationalLike, convention: str) -> Fraction:
    """
    Non-zero digit of L for a parameter p.

    "p" gives L = {0, p}; "np/2" gives L = {0, np/2} with R = 2n.
    """
    value = parse_rational(p)
    if convention == CONVENTION_P:
        return value
    if convention == CONVENTION_NP_HALF:
        if R % 2:
            raise ValidationError(f"The np/2 convention needs an even R = 2n, got {R}")
        return Fraction(R // 2) * value / 2
    raise ValidationError(f"Unknown L convention {convention!r}; expected one of {', '.join(L_CONVENTIONS)}")


def family_system(R: int, p: RationalLike, convention: str = CONVENTION_P, B: Sequence = CANTOR_B) -> HadamardSystem:
    """
    The validated system (R, B, {0, l(p)}).

    Raises:
        InvalidSystemError: If the triple is not a Hadamard system (e.g. p even for R = 4)
    """
    l = family_digit(R, p, convention)
    name = f"R={R} B={{{','.join(str(b) for b in B)}}} L={{0,{format_rational(l)}}}"
    return validate(R, list(B), [0, l], name=name).require()


def _scan_one(args: Tuple[int, Fraction, str, Tuple, CycleSearchConfig]) -> ScanRow:
    R, p, convention, B, config = args
    try:
        system = family_system(R, p, convention, B)
        cycles = find_cycles_lattice_1d(system, Side.B, config)
    except HadamardToolsError as e:
        logger.warning(f"p={format_rational(p)}: {e}")
        return ScanRow(p=p, cycles=(), error=str(e))
    return ScanRow(p=p, cycles=tuple(cycles))


def odd_values(p_max: int) -> List[int]:
    return list(range(1, p_max + 1, 2))


def scan_admissibility(
    R: int,
    p_values: Iterable[RationalLike],
    convention: str = CONVENTION_P,
    B: Sequence = CANTOR_B,
    config: Optional[CycleSearchConfig] = None,
    workers: Optional[int] = None
) -> List[ScanRow]:
    """
    Extreme cycles of (R, B, L_p) for every p, one row per p.

    Rows come back in the order of p_values whatever the number of worker
    processes. A failing p yields a row with its error and the scan goes on.

    Args:
        R: Scalar scale 2n
        p_values: Parameters to scan (odd ones for the Cantor family)
        convention: "p" for L = {0, p} or "np/2" for L = {0, np/2}
        B: Digit set of the measure
        config: Lattice search caps
        workers: Worker processes (defaults to HADAMARD_WORKERS)

    Returns:
        List of ScanRow
    """
    config = config or CycleSearchConfig()
    workers = workers if workers is not None else get_settings().workers
    tasks = [(int(R), parse_rational(p), convention, tuple(B), config) for p in p_values]
    logger.info(f"Scanning {len(tasks)} value(s) of p at R={R} with {workers} worker(s)")
    if workers > 1 and len(tasks) > 1:
        with multiprocessing.Pool(processes=workers) as pool:
            rows = pool.map(_scan_one, tasks)
    else:
        rows = [_scan_one(task) for task in tasks]
    admissible = sum(1 for row in rows if row.admissible)
    logger.info(f"Scan finished: {admissible} admissible, {len(rows) - admissible} without cycles")
    return rows


def scaled_cycle(cycle: ExtremeCycle, q: int, system: HadamardSystem) -> ExtremeCycle:
    """
    The cycle qC for the system (R, B, qL), driven by the scaled digits.

    Args:
        cycle: Extreme cycle of side B for system
        q: Nonzero integer
        system: The system (R, B, L) the cycle belongs to

    Returns:
        Canonical scaled cycle, re-verified exactly

    Raises:
        CycleVerificationError: If the scaled cycle fails closure or extremality
    """
    if isinstance(q, bool) or not isinstance(q, int) or q == 0:
        raise ValidationError(f"Scaling factor must be a nonzero integer, got {q!r}")
    scaled = ExtremeCycle(
        points=tuple(x.scaled(q) for x in cycle.points),
        digits=tuple(d.scaled(q) for d in cycle.digits),
        side=cycle.side,
    ).canonical()
    scaled.verify(system.scale(cycle.side), system.measure_digits(cycle.side))
    return scaled


def geometric_instance(n: int) -> Tuple[int, int]:
    """
    p = sum_{i=0}^{2n-1} (2n)^i and the predicted cycle length 2n.

    p = 1 mod 2n - 1, so these p are not multiples of 2n - 1.
    """
    if n < 2:
        raise ValidationError(f"n must be at least 2, got {n}")
    p = sum((2 * n) ** i for i in range(2 * n))
    if p % (2 * n - 1) != 1:
        raise CycleVerificationError(f"p = {p} is not 1 mod {2 * n - 1}")
    return p, 2 * n


def geometric_system(n: int) -> HadamardSystem:
    """(2n, {0, 2}, {0, np/2}) for the p of geometric_instance(n)."""
    p, _ = geometric_instance(n)
    return family_system(2 * n, p, CONVENTION_NP_HALF)


def geometric_cycle(n: int) -> ExtremeCycle:
    """
    The predicted length-2n cycle, built from its starting point directly.

    The cycle starts at t = n p*/(2(2n-1)) with p* = sum_{i<=2n-2} (2n)^i and
    applies the non-zero digit 2n-1 times followed by the zero digit.

    Raises:
        CycleVerificationError: If the word's orbit does not start at t or is not extreme
    """
    system = geometric_system(n)
    nonzero = next(l for l in system.L if not l.is_zero())
    word = [nonzero] * (2 * n - 1) + [RVector.zero(1)]
    cycle = cycle_from_word(word, system.scale(Side.B), Side.B)
    p_star = sum((2 * n) ** i for i in range(2 * n - 1))
    t = Fraction(n * p_star, 2 * (2 * n - 1))
    if cycle.points[0] != RVector((t,)):
        raise CycleVerificationError(f"Orbit starts at {cycle.points[0]}, expected {t}")
    cycle = cycle.canonical()
    cycle.verify(system.scale(Side.B), system.B)
    return cycle


def multiple_fixed_point(n: int, p: int, config: Optional[CycleSearchConfig] = None) -> Optional[Fraction]:
    """
    Fixed point t = np/(2(2n-1)) of the map for the non-zero digit, when 2n-1 divides p.

    The singleton {t} is confirmed with the lattice detector on
    (2n, {0, 2}, {0, np/2}).

    Returns:
        t, or None when 2n-1 does not divide p

    Raises:
        CycleVerificationError: If the detector does not report {t}
    """
    if n < 1:
        raise ValidationError(f"n must be positive, got {n}")
    if p % (2 * n - 1):
        return None
    t = Fraction(n * p, 2 * (2 * n - 1))
    system = family_system(2 * n, p, CONVENTION_NP_HALF)
    cycles = find_cycles_lattice_1d(system, Side.B, config)
    if not any(c.points == (RVector((t,)),) for c in cycles):
        raise CycleVerificationError(f"Detector did not report the fixed point {t} for n={n}, p={p}")
    return t
