"""
Unit tests for extreme-cycle detection and the basis verdict.
"""

import sys
import unittest
from fractions import Fraction
from pathlib import Path

project_root = Path(__file__).parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from backend.core.algebra import RMatrix, RVector
from backend.core.cycles.admissibility import family_system
from backend.core.cycles.detection import (
    attractor_interval, cycle_from_word, dual_lattice_1d, find_cycles_lattice_1d,
    find_cycles_words, lattice_search, lyndon_words, onb_verdict, reference_walk_cycles,
    search_interval, sigma_at_cycle, spectral_report, word_search
)
from backend.core.system.hadamard import validate
from backend.core.system.io import load_system
from backend.models.results import CycleSearchConfig, ExtremeCycle, SearchMode, Side, Verdict
from backend.utils.config import SYSTEMS_DIR
from backend.utils.exceptions import (
    CycleSearchError, CycleVerificationError, NodeCapExceededError, UnsupportedDimensionError,
    ValidationError, WordCapExceededError
)
from backend.utils.formatting import join_points


def _points(cycle):
    return join_points(cycle.points)


class TestLatticeHelpers(unittest.TestCase):
    """Test the lattice step and the attractor interval."""

    def test_dual_lattice_integers(self):
        """Test {x : 2x in Z} = (1/2)Z."""
        self.assertEqual(dual_lattice_1d([0, 2]), Fraction(1, 2))
        self.assertEqual(dual_lattice_1d([0, 2, 4, 6]), Fraction(1, 2))
        self.assertEqual(dual_lattice_1d([0, 1, 2, 7]), Fraction(1))

    def test_dual_lattice_rational(self):
        """Test {x : (27993/2) x in Z} = (2/27993)Z."""
        self.assertEqual(dual_lattice_1d([0, Fraction(27993, 2)]), Fraction(2, 27993))

    def test_dual_lattice_zero_digits(self):
        with self.assertRaises(ValidationError):
            dual_lattice_1d([0])

    def test_attractor_interval(self):
        self.assertEqual(attractor_interval([0, 85], 4), (Fraction(0), Fraction(85, 3)))
        self.assertEqual(attractor_interval([-1, 0, 2], 3), (Fraction(-1, 2), Fraction(1)))

    def test_attractor_interval_bad_scale(self):
        with self.assertRaises(ValidationError):
            attractor_interval([0, 1], 1)

    def test_search_interval(self):
        """Test positive scales use the attractor interval and negative ones [-M, M]."""
        self.assertEqual(search_interval([0, 85], 4), attractor_interval([0, 85], 4))
        self.assertEqual(search_interval([0, 5], -4), (Fraction(-5, 3), Fraction(5, 3)))
        self.assertEqual(search_interval([-3, 0, 1], -3), (Fraction(-3, 2), Fraction(3, 2)))

    def test_search_interval_not_expansive(self):
        for r in (-1, 0, 1):
            with self.assertRaises(CycleSearchError):
                search_interval([0, 1], r)


class TestLatticeSearch(unittest.TestCase):
    """Test the exhaustive one-dimensional search on the Cantor family."""

    def test_p1_has_no_cycles(self):
        """Test L = {0, 1} only has the trivial cycle."""
        outcome = lattice_search(family_system(4, 1), Side.B)
        self.assertEqual(outcome.cycles, [])
        self.assertTrue(outcome.trivial_cycle_seen)
        self.assertTrue(outcome.exhaustive)

    def test_p3_fixed_point(self):
        cycles = find_cycles_lattice_1d(family_system(4, 3), Side.B)
        self.assertEqual(len(cycles), 1)
        self.assertEqual(_points(cycles[0]), "1")
        self.assertEqual(join_points(cycles[0].digits), "3")

    def test_p15_two_cycles(self):
        """Test p = 15 gives {1, 4} and {5} in canonical order."""
        cycles = find_cycles_lattice_1d(family_system(4, 15), Side.B)
        self.assertEqual([_points(c) for c in cycles], ["1;4", "5"])
        self.assertEqual(join_points(cycles[0].digits), "15;0")

    def test_p51_length_four(self):
        cycles = find_cycles_lattice_1d(family_system(4, 51), Side.B)
        self.assertEqual([_points(c) for c in cycles], ["1;13;16;4", "17"])

    def test_p85_length_four(self):
        cycles = find_cycles_lattice_1d(family_system(4, 85), Side.B)
        self.assertEqual([_points(c) for c in cycles], ["7;23;27;28"])
        self.assertEqual(join_points(cycles[0].digits), "85;85;85;0")

    def test_cycles_verify(self):
        """Test every reported cycle closes and is B-extreme."""
        system = family_system(4, 63)
        for cycle in find_cycles_lattice_1d(system, Side.B):
            cycle.verify(system.scale(Side.B), system.B)
            self.assertEqual(cycle.side, Side.B)

    def test_matches_reference_walk(self):
        """Test the graph search agrees with the single-successor walk for odd p."""
        for p in range(1, 60, 2):
            system = family_system(4, p)
            expected = [_points(c) for c in reference_walk_cycles(system, Side.B)]
            actual = [_points(c) for c in find_cycles_lattice_1d(system, Side.B)]
            self.assertEqual(actual, expected, msg=f"p={p}")

    def test_eight_adic_side_b(self):
        """Test R=8, B={0,2,4,6}, L={0,1,2,7}: the fixed point 1 of the digit 7."""
        system = load_system(SYSTEMS_DIR / "eight_adic.json").require()
        cycles = find_cycles_lattice_1d(system, Side.B)
        self.assertEqual([_points(c) for c in cycles], ["1"])
        self.assertEqual(join_points(cycles[0].digits), "7")

    def test_eight_adic_side_l(self):
        system = load_system(SYSTEMS_DIR / "eight_adic.json").require()
        self.assertEqual(find_cycles_lattice_1d(system, Side.L), [])

    def test_node_cap(self):
        config = CycleSearchConfig(node_cap=10)
        with self.assertRaises(NodeCapExceededError) as ctx:
            lattice_search(family_system(4, 85), Side.B, config)
        self.assertGreater(ctx.exception.node_count, 10)

    def test_higher_dimension_rejected(self):
        system = load_system(SYSTEMS_DIR / "planar_ternary.json").require()
        with self.assertRaises(UnsupportedDimensionError):
            lattice_search(system, Side.B)


class TestNegativeScale(unittest.TestCase):
    """Test the lattice search for R < -1, where the dual maps flip sign."""

    def test_fixed_point_minus_one(self):
        """Test R=-4, L={0,5}: -1 = (-1 + 5)/(-4) is 2-extreme."""
        system = validate(-4, [0, 2], [0, 5]).require()
        outcome = lattice_search(system, Side.B)
        self.assertTrue(outcome.exhaustive)
        self.assertTrue(outcome.trivial_cycle_seen)
        self.assertEqual([_points(c) for c in outcome.cycles], ["-1"])
        self.assertEqual(join_points(outcome.cycles[0].digits), "5")
        self.assertEqual([_points(c) for c in reference_walk_cycles(system, Side.B)], ["-1"])

    def test_no_cycles_is_onb(self):
        system = validate(-4, [0, 2], [0, 3]).require()
        self.assertEqual(find_cycles_lattice_1d(system, Side.B), [])
        self.assertEqual(spectral_report(system, Side.B).verdict, Verdict.ONB)

    def test_word_cycles_found_by_lattice(self):
        """Test every word-mode cycle up to length 6 is among the lattice cycles."""
        config = CycleSearchConfig(mode=SearchMode.WORDS, max_word_length=6)
        for p in range(1, 32, 2):
            system = validate(-4, [0, 2], [0, p]).require()
            lattice = {_points(c) for c in find_cycles_lattice_1d(system, Side.B)}
            for cycle in find_cycles_words(system, Side.B, config):
                self.assertIn(_points(cycle), lattice, msg=f"p={p}")


class TestWords(unittest.TestCase):
    """Test Lyndon words and word-driven cycles."""

    def test_lyndon_binary(self):
        """Test the primitive binary words up to length 4 in lexicographic order."""
        self.assertEqual(list(lyndon_words(2, 4)), [
            (0,), (0, 0, 0, 1), (0, 0, 1), (0, 0, 1, 1), (0, 1), (0, 1, 1), (0, 1, 1, 1), (1,)
        ])

    def test_lyndon_count(self):
        """Test 3 letters up to length 3: 3 + 3 + 8 words."""
        self.assertEqual(len(list(lyndon_words(3, 3))), 14)

    def test_lyndon_empty(self):
        self.assertEqual(list(lyndon_words(3, 0)), [])

    def test_cycle_from_word(self):
        """Test the word (85, 85, 85, 0) starts at 7 for R = 4."""
        digits = [RVector.of(85)] * 3 + [RVector.of(0)]
        cycle = cycle_from_word(digits, RMatrix.scalar(4), Side.B)
        self.assertEqual(_points(cycle), "7;23;27;28")

    def test_cycle_from_word_planar(self):
        """Test the digit (-1,-2) with R=3I has fixed point (-1/2, -1)."""
        cycle = cycle_from_word([RVector.of(-1, -2)], RMatrix.diagonal([3, 3]), Side.L)
        self.assertEqual(cycle.points, (RVector.of(Fraction(-1, 2), -1),))

    def test_word_search_matches_lattice(self):
        """Test word mode finds the same cycles up to their length."""
        system = family_system(4, 63)
        config = CycleSearchConfig(mode=SearchMode.WORDS, max_word_length=4)
        self.assertEqual(
            [_points(c) for c in find_cycles_words(system, Side.B, config)],
            [_points(c) for c in find_cycles_lattice_1d(system, Side.B)],
        )

    def test_word_search_matches_lattice_for_odd_p(self):
        """Test both searches agree on the Cantor family for every odd p <= 100."""
        config = CycleSearchConfig(mode=SearchMode.WORDS, max_word_length=6)
        for p in range(1, 101, 2):
            system = family_system(4, p)
            self.assertEqual(
                [_points(c) for c in find_cycles_words(system, Side.B, config)],
                [_points(c) for c in find_cycles_lattice_1d(system, Side.B)],
                msg=f"p={p}",
            )

    def test_word_search_not_exhaustive(self):
        outcome = word_search(family_system(4, 1), Side.B, CycleSearchConfig(mode=SearchMode.WORDS, max_word_length=3))
        self.assertFalse(outcome.exhaustive)
        self.assertTrue(outcome.trivial_cycle_seen)
        self.assertTrue(outcome.notes)

    def test_word_cap(self):
        config = CycleSearchConfig(mode=SearchMode.WORDS, max_word_length=8, word_cap=5)
        with self.assertRaises(WordCapExceededError):
            word_search(family_system(4, 3), Side.B, config)

    def test_planar_side_l(self):
        """Test the planar system's side L has the single cycle {(0, 1/2)}."""
        system = load_system(SYSTEMS_DIR / "planar_ternary.json").require()
        config = CycleSearchConfig(mode=SearchMode.WORDS, max_word_length=2)
        cycles = find_cycles_words(system, Side.L, config)
        self.assertEqual([_points(c) for c in cycles], ["(0,1/2)"])

    def test_planar_side_b(self):
        system = load_system(SYSTEMS_DIR / "planar_ternary.json").require()
        config = CycleSearchConfig(mode=SearchMode.WORDS, max_word_length=2)
        self.assertEqual(find_cycles_words(system, Side.B, config), [])


class TestExtremeCycle(unittest.TestCase):

    def test_canonical_rotation(self):
        cycle = ExtremeCycle(
            points=(RVector.of(13), RVector.of(16), RVector.of(4), RVector.of(1)),
            digits=(RVector.of(51), RVector.of(0), RVector.of(0), RVector.of(51)),
            side=Side.B,
        ).canonical()
        self.assertEqual(_points(cycle), "1;13;16;4")
        self.assertEqual(join_points(cycle.digits), "51;51;0;0")

    def test_verify_rejects_broken_cycle(self):
        cycle = ExtremeCycle(points=(RVector.of(2),), digits=(RVector.of(3),), side=Side.B)
        with self.assertRaises(CycleVerificationError):
            cycle.verify(RMatrix.scalar(4), (RVector.of(0), RVector.of(2)))

    def test_verify_rejects_non_extreme(self):
        """Test 1/3 is a fixed point of (x + 1)/4 but 2/3 is not an integer."""
        cycle = ExtremeCycle(points=(RVector.of(Fraction(1, 3)),), digits=(RVector.of(1),), side=Side.B)
        with self.assertRaises(CycleVerificationError):
            cycle.verify(RMatrix.scalar(4), (RVector.of(0), RVector.of(2)))

    def test_mismatched_lengths(self):
        with self.assertRaises(ValidationError):
            ExtremeCycle(points=(RVector.of(1),), digits=(), side=Side.B)


class TestVerdict(unittest.TestCase):
    """Test onb_verdict and spectral_report."""

    def test_cycles_give_not_onb(self):
        system = family_system(4, 3)
        report = spectral_report(system, Side.B)
        self.assertEqual(report.verdict, Verdict.NOT_ONB)
        self.assertEqual(len(report.cycles), 1)

    def test_exhaustive_one_dimensional_onb(self):
        report = spectral_report(family_system(4, 1), Side.B)
        self.assertEqual(report.verdict, Verdict.ONB)
        self.assertTrue(report.trivial_cycle_seen)

    def test_not_exhaustive_one_dimensional(self):
        config = CycleSearchConfig(mode=SearchMode.WORDS, max_word_length=3)
        report = spectral_report(family_system(4, 1), Side.B, config)
        self.assertEqual(report.verdict, Verdict.INCONCLUSIVE)

    def test_higher_dimension_inconclusive(self):
        system = load_system(SYSTEMS_DIR / "planar_ternary.json").require()
        config = CycleSearchConfig(mode=SearchMode.WORDS, max_word_length=2)
        report = spectral_report(system, Side.B, config)
        self.assertEqual(report.verdict, Verdict.INCONCLUSIVE)
        self.assertIn("necessary", report.dimension_note)

    def test_assume_sufficient(self):
        system = load_system(SYSTEMS_DIR / "planar_ternary.json").require()
        report = onb_verdict(system, Side.B, [], exhaustive=False, assume_sufficient=True)
        self.assertEqual(report.verdict, Verdict.ONB)

    def test_planar_side_l_not_onb(self):
        system = load_system(SYSTEMS_DIR / "planar_ternary.json").require()
        config = CycleSearchConfig(mode=SearchMode.WORDS, max_word_length=2)
        self.assertEqual(spectral_report(system, Side.L, config).verdict, Verdict.NOT_ONB)

    def test_sigma_vanishes_on_cycle(self):
        """Test sigma is zero at every point of a non-trivial extreme cycle."""
        system = family_system(4, 15)
        for cycle in find_cycles_lattice_1d(system, Side.B):
            for sample in sigma_at_cycle(system, Side.B, cycle, 6):
                self.assertAlmostEqual(sample.value, 0.0, places=10)
                self.assertAlmostEqual(sample.gap, 1.0, places=10)

    def test_report_sigma_samples(self):
        report = spectral_report(family_system(4, 3), Side.B, sigma_level=4)
        self.assertEqual(len(report.sigma_samples), 1)
        self.assertEqual(report.to_dict()["verdict"], "NotONB")


if __name__ == "__main__":
    unittest.main()
