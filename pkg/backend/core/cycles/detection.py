"""
Extreme-cycle detection.

A cycle of the dual maps x -> S^{-1}(x + d) whose points are all extreme
(|chi| = 1) for the measure's digit set obstructs the candidate spectrum from
being complete. Two searches are provided:

- lattice mode (dimension one): the extreme points form the lattice sZ, and
  cycle points lie in the attractor interval, so the finite successor graph
  on the lattice points of that interval contains every extreme cycle;
- word mode (any dimension): every primitive word up to a maximal length is
  turned into its cycle and tested, which is sound but only complete up to
  that length.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from backend.core.algebra import RMatrix, RVector, as_vector, inverse_powers, parse_rational
from backend.core.fourier.gamma import GammaLevel
from backend.core.fourier.spectral import frequency_level, sigma_partial
from backend.core.fourier.transforms import chi_is_extreme
from backend.core.system.hadamard import HadamardSystem
from backend.models.results import (
    CycleSearchConfig, ExtremeCycle, SearchMode, SigmaSample, Side, SpectralReport, Verdict
)
from backend.utils.exceptions import (
    CycleSearchError, NodeCapExceededError, UnsupportedDimensionError, ValidationError,
    WordCapExceededError
)
from backend.utils.logging import get_logger

logger = get_logger("cycles.detection")


@dataclass
class CycleSearchOutcome:
    """Cycles found by one search together with how much the search covered."""
    cycles: List[ExtremeCycle]
    exhaustive: bool
    trivial_cycle_seen: bool = False
    node_count: int = 0
    notes: List[str] = field(default_factory=list)


def _scalars(digits: Sequence) -> List[Fraction]:
    values = []
    for d in digits:
        vector = as_vector(d)
        if vector.dim != 1:
            raise UnsupportedDimensionError(f"Digit {vector} is not one-dimensional")
        values.append(vector.entries[0])
    return values


def dual_lattice_1d(digits: Sequence) -> Fraction:
    """
    Step s of the extreme set {x : d x in Z for all digits d} = sZ.

    With c the common denominator of the digits and g the gcd of the integers
    c d, the condition reads g x in cZ, so s = c / g.

    Raises:
        ValidationError: If every digit is zero
    """
    values = _scalars(digits)
    nonzero = [v for v in values if v != 0]
    if not nonzero:
        raise ValidationError("Dual lattice of the zero digit set is all of R")
    c = math.lcm(*(v.denominator for v in nonzero))
    g = math.gcd(*(int(v * c) for v in nonzero))
    return Fraction(c, g)


def attractor_interval(digits: Sequence, R) -> Tuple[Fraction, Fraction]:
    """
    [min(D)/(R-1), max(D)/(R-1)], an interval containing the attractor X(D).

    Raises:
        ValidationError: If R <= 1
    """
    r = parse_rational(R)
    if r <= 1:
        raise ValidationError(f"Scale must exceed 1, got {r}")
    values = _scalars(digits)
    return min(values) / (r - 1), max(values) / (r - 1)


def search_interval(digits: Sequence, r: int) -> Tuple[Fraction, Fraction]:
    """
    Interval holding every cycle of the maps x -> (x + l)/r.

    For r > 1 this is the attractor interval. For r < -1 the images alternate
    sign, and [-M, M] with M = max|l| / (|r| - 1) is mapped into itself.
    """
    if r > 1:
        return attractor_interval(digits, r)
    if r >= -1:
        raise CycleSearchError(f"Scale {r} is not expansive")
    bound = max(abs(v) for v in _scalars(digits)) / (abs(r) - 1)
    return -bound, bound


def _scalar_scale(system: HadamardSystem, side: Side) -> int:
    if system.d != 1:
        raise UnsupportedDimensionError(
            f"Lattice search needs dimension 1, the system has dimension {system.d}"
        )
    r = system.scale(side).rows[0][0]
    if r.denominator != 1:
        raise CycleSearchError(f"Scale {r} is not an integer")
    return int(r)


def _lattice_graph(system: HadamardSystem, side: Side, config: CycleSearchConfig) -> Tuple[nx.DiGraph, Fraction, int]:
    """
    Successor graph on lattice indices k (point k s), pruned to nodes that
    have both a successor and a predecessor inside the graph.
    """
    r = _scalar_scale(system, side)
    driving = _scalars(system.frequency_digits(side))
    s = dual_lattice_1d(system.measure_digits(side))
    lo, hi = search_interval(driving, r)
    k_min, k_max = math.ceil(lo / s), math.floor(hi / s)
    stride = abs(r)

    # Digit l maps k to (k + u)/r with u = l/s, which is a lattice index iff u is
    # an integer and k = -u mod |r|.
    shifts = []
    for index, l in enumerate(driving):
        u = l / s
        if u.denominator == 1:
            shifts.append((index, int(u)))

    candidate_count = 0
    for _, u in shifts:
        first = k_min + ((-u - k_min) % stride)
        if first <= k_max:
            candidate_count += (k_max - first) // stride + 1
    if candidate_count > config.node_cap:
        raise NodeCapExceededError(
            f"{candidate_count} lattice candidates exceed the node cap of {config.node_cap}",
            node_count=candidate_count, cap=config.node_cap,
        )

    successors: Dict[int, List[Tuple[int, int]]] = {}
    for index, u in shifts:
        first = k_min + ((-u - k_min) % stride)
        for k in range(first, k_max + 1, stride):
            target = (k + u) // r
            if k_min <= target <= k_max:
                successors.setdefault(k, []).append((target, index))

    # Drop nodes without a successor or a predecessor until nothing changes;
    # no cycle passes through them.
    predecessors: Dict[int, List[int]] = {}
    for k, edges in successors.items():
        for target, _ in edges:
            predecessors.setdefault(target, []).append(k)
    alive = set(successors)
    out_degree = {k: sum(1 for t, _ in edges if t in alive) for k, edges in successors.items()}
    in_degree = {k: sum(1 for p in predecessors.get(k, ()) if p in alive) for k in alive}
    queue = [k for k in alive if out_degree[k] == 0 or in_degree[k] == 0]
    passes = 0
    while queue:
        passes += 1
        k = queue.pop()
        if k not in alive:
            continue
        alive.discard(k)
        for target, _ in successors[k]:
            if target in alive:
                in_degree[target] -= 1
                if in_degree[target] == 0:
                    queue.append(target)
        for source in predecessors.get(k, ()):
            if source in alive:
                out_degree[source] -= 1
                if out_degree[source] == 0:
                    queue.append(source)

    graph = nx.DiGraph()
    graph.add_nodes_from(sorted(alive))
    for k in sorted(alive):
        for target, index in successors[k]:
            if target in alive:
                graph.add_edge(k, target, digit=index)
    logger.debug(
        f"Lattice graph: step {s}, {candidate_count} candidates, "
        f"{graph.number_of_nodes()} nodes after {passes} removals"
    )
    return graph, s, candidate_count


def _simple_cycles(graph: nx.DiGraph, cap: int) -> Iterator[List[int]]:
    emitted = 0
    for component in nx.strongly_connected_components(graph):
        if len(component) == 1:
            node = next(iter(component))
            if not graph.has_edge(node, node):
                continue
        for cycle in nx.simple_cycles(graph.subgraph(component)):
            emitted += 1
            if emitted > cap:
                raise CycleSearchError(f"More than {cap} simple cycles; raise the simple-cycle cap")
            yield cycle


def _finish(cycles: List[ExtremeCycle], system: HadamardSystem, side: Side) -> List[ExtremeCycle]:
    scale = system.scale(side)
    test_digits = system.measure_digits(side)
    unique = {}
    for cycle in cycles:
        canonical = cycle.canonical()
        canonical.verify(scale, test_digits)
        unique[canonical.sort_key()] = canonical
    return [unique[key] for key in sorted(unique)]


def lattice_search(system: HadamardSystem, side: Side, config: Optional[CycleSearchConfig] = None) -> CycleSearchOutcome:
    """
    Exhaustive lattice-graph search in dimension one, for positive and
    negative integer scales.

    Raises:
        UnsupportedDimensionError: If the system is not one-dimensional
        NodeCapExceededError: If the candidate set exceeds config.node_cap
    """
    config = config or CycleSearchConfig()
    graph, s, candidates = _lattice_graph(system, side, config)
    driving = system.frequency_digits(side)
    found = []
    trivial = False
    for nodes in _simple_cycles(graph, config.simple_cycle_cap):
        digits = tuple(driving[graph.edges[nodes[i], nodes[(i + 1) % len(nodes)]]["digit"]] for i in range(len(nodes)))
        cycle = ExtremeCycle(points=tuple(RVector((k * s,)) for k in nodes), digits=digits, side=side)
        if cycle.is_trivial:
            trivial = True
            continue
        found.append(cycle)
    cycles = _finish(found, system, side)
    logger.debug(f"Lattice search on side {side.value}: {len(cycles)} non-trivial cycle(s)")
    return CycleSearchOutcome(cycles=cycles, exhaustive=True, trivial_cycle_seen=trivial, node_count=candidates)


def find_cycles_lattice_1d(system: HadamardSystem, side: Side, config: Optional[CycleSearchConfig] = None) -> List[ExtremeCycle]:
    """
    All non-trivial extreme cycles of a one-dimensional system, in canonical form.

    Every successor is followed, so branching graphs are handled; the simple
    cycles come from a strongly-connected-component decomposition.

    Args:
        system: Validated one-dimensional system
        side: Side B looks for B-extreme cycles of the L maps, side L the converse
        config: Caps for the search

    Returns:
        Canonical cycles sorted by their point tuples, trivial {0} excluded
    """
    return lattice_search(system, side, config).cycles


def lyndon_words(alphabet_size: int, max_length: int) -> Iterator[Tuple[int, ...]]:
    """Lyndon words of length 1..max_length in lexicographic order (Duval's algorithm)."""
    if alphabet_size <= 0 or max_length <= 0:
        return
    word = [-1]
    while word:
        word[-1] += 1
        yield tuple(word)
        m = len(word)
        while len(word) < max_length:
            word.append(word[len(word) - m])
        while word and word[-1] == alphabet_size - 1:
            word.pop()


def cycle_from_word(digits: Sequence[RVector], scale: RMatrix, side: Side) -> ExtremeCycle:
    """
    The periodic orbit driven by a digit word.

    x_{i+1} = S^{-1}(x_i + e_i) returns to x_0 after n steps when
    (I - S^{-n}) x_0 = sum_i S^{-(n-i)} e_i.
    """
    n = len(digits)
    powers = inverse_powers(scale, n)
    rhs = RVector.zero(scale.dim)
    for i, e in enumerate(digits):
        rhs = rhs + powers[n - i - 1] @ e
    x = (RMatrix.identity(scale.dim) - powers[n - 1]).inverse() @ rhs
    inverse = powers[0]
    points = []
    for e in digits:
        points.append(x)
        x = inverse @ (x + e)
    return ExtremeCycle(points=tuple(points), digits=tuple(digits), side=side)


def word_search(system: HadamardSystem, side: Side, config: Optional[CycleSearchConfig] = None) -> CycleSearchOutcome:
    """
    Cycles of primitive words up to config.max_word_length.

    Raises:
        WordCapExceededError: If more than config.word_cap words would be tested
    """
    config = config or CycleSearchConfig(mode=SearchMode.WORDS)
    driving = system.frequency_digits(side)
    scale = system.scale(side)
    test_digits = system.measure_digits(side)

    found = []
    trivial = False
    tested = 0
    for word in lyndon_words(len(driving), config.max_word_length):
        tested += 1
        if tested > config.word_cap:
            raise WordCapExceededError(
                f"More than {config.word_cap} words up to length {config.max_word_length}"
            )
        cycle = cycle_from_word([driving[i] for i in word], scale, side)
        if not all(chi_is_extreme(test_digits, x) for x in cycle.points):
            continue
        if cycle.is_trivial:
            trivial = True
            continue
        found.append(cycle)

    cycles = _finish(found, system, side)
    note = f"word search is complete only for cycles of length <= {config.max_word_length}"
    logger.debug(f"Word search on side {side.value}: {tested} words, {len(cycles)} non-trivial cycle(s)")
    return CycleSearchOutcome(cycles=cycles, exhaustive=False, trivial_cycle_seen=trivial, notes=[note])


def find_cycles_words(system: HadamardSystem, side: Side, config: Optional[CycleSearchConfig] = None) -> List[ExtremeCycle]:
    """Non-trivial extreme cycles of every primitive word up to the maximal length."""
    return word_search(system, side, config).cycles


def search_cycles(system: HadamardSystem, side: Side, config: Optional[CycleSearchConfig] = None) -> CycleSearchOutcome:
    """Run the search selected by config.mode."""
    config = config or CycleSearchConfig()
    if config.mode is SearchMode.LATTICE:
        return lattice_search(system, side, config)
    return word_search(system, side, config)


def reference_walk_cycles(system: HadamardSystem, side: Side) -> List[ExtremeCycle]:
    """
    Cycles of the single-successor walk: from each lattice point take the first
    digit (in digit order) whose image is a lattice point of the interval.

    This agrees with the lattice search whenever successors are unique, as for
    L = {0, p} with p odd.
    """
    r = _scalar_scale(system, side)
    driving = _scalars(system.frequency_digits(side))
    s = dual_lattice_1d(system.measure_digits(side))
    lo, hi = search_interval(driving, r)
    k_min, k_max = math.ceil(lo / s), math.floor(hi / s)
    shifts = [(i, l / s) for i, l in enumerate(driving)]

    def step(k: int) -> Optional[Tuple[int, int]]:
        for index, u in shifts:
            image = (k + u) / r
            if image.denominator == 1 and k_min <= image <= k_max:
                return int(image), index
        return None

    state: Dict[int, int] = {}
    found = []
    for start in range(k_min, k_max + 1):
        if start in state:
            continue
        path = []
        k = start
        while k is not None and k not in state:
            state[k] = start
            path.append(k)
            nxt = step(k)
            k = nxt[0] if nxt else None
        if k is not None and state[k] == start:
            nodes = path[path.index(k):]
            digits = tuple(system.frequency_digits(side)[step(x)[1]] for x in nodes)
            cycle = ExtremeCycle(points=tuple(RVector((x * s,)) for x in nodes), digits=digits, side=side)
            if not cycle.is_trivial:
                found.append(cycle)
    return _finish(found, system, side)


def onb_verdict(
    system: HadamardSystem,
    side: Side,
    cycles: Sequence[ExtremeCycle],
    exhaustive: bool,
    d: Optional[int] = None,
    assume_sufficient: bool = False
) -> SpectralReport:
    """
    Decide whether the candidate spectrum is an orthonormal basis.

    Non-trivial extreme cycles rule it out in every dimension. In dimension one
    an exhaustive search without such cycles proves it. In higher dimension the
    cycle condition is only necessary, so no cycles gives Inconclusive unless
    assume_sufficient is set.
    """
    d = d if d is not None else system.d
    cycles = list(cycles)
    if cycles:
        verdict = Verdict.NOT_ONB
        note = f"{len(cycles)} non-trivial extreme cycle(s) block completeness"
    elif d == 1 and exhaustive:
        verdict = Verdict.ONB
        note = "dimension 1: no non-trivial extreme cycles in an exhaustive search"
    elif d == 1:
        verdict = Verdict.INCONCLUSIVE
        note = "dimension 1: the search was not exhaustive"
    else:
        verdict = Verdict.ONB if assume_sufficient else Verdict.INCONCLUSIVE
        note = (
            f"dimension {d}: the absence of extreme cycles is only a necessary condition"
            + ("; sufficiency assumed on request" if assume_sufficient else "")
        )
    logger.info(f"Side {side.value} of {system.name or 'system'}: {verdict.value}")
    return SpectralReport(
        side=side, cycles=cycles, verdict=verdict, dimension_note=note,
        exhaustive=exhaustive, system_name=system.name,
    )


def spectral_report(
    system: HadamardSystem,
    side: Side,
    config: Optional[CycleSearchConfig] = None,
    assume_sufficient: bool = False,
    sigma_level: Optional[int] = None
) -> SpectralReport:
    """
    Search, decide, and optionally attach sigma evidence at the cycle points.

    Args:
        system: Validated system
        side: Which candidate spectrum to judge
        config: Search configuration
        assume_sufficient: Upgrade a cycle-free higher-dimensional result to ONB
        sigma_level: If set, sigma partial sums at every cycle point are attached

    Returns:
        SpectralReport
    """
    outcome = search_cycles(system, side, config)
    report = onb_verdict(system, side, outcome.cycles, outcome.exhaustive, system.d, assume_sufficient)
    report.trivial_cycle_seen = outcome.trivial_cycle_seen
    if outcome.notes:
        report.dimension_note = "; ".join([report.dimension_note] + outcome.notes)
    if sigma_level is not None:
        gamma = frequency_level(system, side, sigma_level)
        for cycle in outcome.cycles:
            report.sigma_samples.extend(sigma_at_cycle(system, side, cycle, sigma_level, gamma))
    return report


def sigma_at_cycle(
    system: HadamardSystem,
    side: Side,
    cycle: ExtremeCycle,
    level: int,
    gamma: Optional[GammaLevel] = None
) -> List[SigmaSample]:
    """
    Sigma partial sums at the points of an extreme cycle.

    Every frequency eventually leaves the cycle, and the step that leaves it
    lands on a zero of chi, so these values are zero for non-trivial cycles.
    """
    gamma = gamma if gamma is not None else frequency_level(system, side, level)
    samples = [sigma_partial(system, side, x, level, gamma=gamma) for x in cycle.points]
    for sample in samples:
        logger.debug(f"sigma at cycle point {sample.t}: {sample.value:.12g} (gap {sample.gap:.3g})")
    return samples
