"""
Unit tests for admissibility scans and the finite-cycle constructions.
"""

import sys
import unittest
from fractions import Fraction
from pathlib import Path

project_root = Path(__file__).parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from backend.core.cycles.admissibility import (
    family_digit, family_system, geometric_cycle, geometric_instance, geometric_system,
    multiple_fixed_point, odd_values, scaled_cycle, scan_admissibility
)
from backend.core.cycles.detection import find_cycles_lattice_1d
from backend.core.tables import onb_values
from backend.models.results import Side
from backend.utils.config import CONVENTION_NP_HALF, CONVENTION_P
from backend.utils.exceptions import InvalidSystemError, ValidationError
from backend.utils.formatting import join_points


class TestFamily(unittest.TestCase):
    """Test the parametrised systems (2n, {0, 2}, {0, l(p)})."""

    def test_digit_conventions(self):
        self.assertEqual(family_digit(4, 5, CONVENTION_P), Fraction(5))
        self.assertEqual(family_digit(6, 9331, CONVENTION_NP_HALF), Fraction(27993, 2))

    def test_np_half_needs_even_scale(self):
        with self.assertRaises(ValidationError):
            family_digit(5, 3, CONVENTION_NP_HALF)

    def test_unknown_convention(self):
        with self.assertRaises(ValidationError):
            family_digit(4, 3, "2p")

    def test_even_p_is_not_hadamard(self):
        """Test (4, {0,2}, {0,p}) fails validation for even p."""
        with self.assertRaises(InvalidSystemError):
            family_system(4, 4)

    def test_name(self):
        self.assertEqual(family_system(4, 5).name, "R=4 B={0,2} L={0,5}")


class TestScan(unittest.TestCase):
    """Test scan_admissibility."""

    def test_rows_in_order(self):
        rows = scan_admissibility(4, [1, 3, 15], workers=1)
        self.assertEqual([r.p for r in rows], [1, 3, 15])
        self.assertFalse(rows[0].admissible)
        self.assertEqual([len(r.cycles) for r in rows], [0, 1, 2])

    def test_failure_recorded(self):
        """Test an even p yields an error row and the scan continues."""
        rows = scan_admissibility(4, [2, 3], workers=1)
        self.assertIsNotNone(rows[0].error)
        self.assertIn("unitarity", rows[0].error)
        self.assertTrue(rows[1].admissible)
        self.assertEqual(onb_values(rows), [])

    def test_onb_values(self):
        rows = scan_admissibility(4, odd_values(13), workers=1)
        self.assertEqual(onb_values(rows), ["1", "5", "7", "11", "13"])

    def test_parallel_matches_serial(self):
        serial = scan_admissibility(4, odd_values(31), workers=1)
        parallel = scan_admissibility(4, odd_values(31), workers=2)
        self.assertEqual(
            [(r.p, [join_points(c.points) for c in r.cycles]) for r in serial],
            [(r.p, [join_points(c.points) for c in r.cycles]) for r in parallel],
        )

    def test_powers_of_five(self):
        """Test p = 5^k has no non-trivial cycles for small k."""
        rows = scan_admissibility(4, [5 ** k for k in range(4)], workers=1)
        self.assertTrue(all(not r.cycles and r.error is None for r in rows))

    def test_odd_values(self):
        self.assertEqual(odd_values(7), [1, 3, 5, 7])


class TestScaledCycle(unittest.TestCase):

    def test_scaling_by_five(self):
        """Test 5 {1} is the cycle {5} of L = {0, 15}."""
        cycle = find_cycles_lattice_1d(family_system(4, 3), Side.B)[0]
        scaled = scaled_cycle(cycle, 5, family_system(4, 15))
        self.assertEqual(join_points(scaled.points), "5")
        self.assertEqual(join_points(scaled.digits), "15")

    def test_scaled_cycles_are_cycles_of_scaled_system(self):
        """Test q C is an extreme cycle of L = {0, qp} for every cycle C of L = {0, p}."""
        checked = 0
        for p in odd_values(33):
            for cycle in find_cycles_lattice_1d(family_system(4, p), Side.B):
                for q in (3, 5, 7):
                    target = family_system(4, q * p)
                    scaled = scaled_cycle(cycle, q, target)
                    found = [join_points(c.points) for c in find_cycles_lattice_1d(target, Side.B)]
                    self.assertIn(join_points(scaled.points), found, msg=f"p={p} q={q}")
                    checked += 1
        self.assertGreater(checked, 0)

    def test_bad_factor(self):
        cycle = find_cycles_lattice_1d(family_system(4, 3), Side.B)[0]
        with self.assertRaises(ValidationError):
            scaled_cycle(cycle, 0, family_system(4, 3))


class TestConstructions(unittest.TestCase):
    """Test the explicit cycles of length 2n and the fixed points."""

    def test_instance_values(self):
        self.assertEqual(geometric_instance(2), (85, 4))
        self.assertEqual(geometric_instance(3), (9331, 6))
        self.assertEqual(geometric_instance(4), (2396745, 8))

    def test_instance_needs_n_two(self):
        with self.assertRaises(ValidationError):
            geometric_instance(1)

    def test_geometric_system(self):
        system = geometric_system(3)
        self.assertEqual(system.L[1].entries[0], Fraction(27993, 2))

    def test_cycle_n2(self):
        cycle = geometric_cycle(2)
        self.assertEqual(join_points(cycle.points), "7;23;27;28")
        self.assertEqual(cycle.length, 4)

    def test_cycle_n3(self):
        """Test the length-6 cycle and that the detector reports it."""
        cycle = geometric_cycle(3)
        self.assertEqual(join_points(cycle.points), "933/2;4821/2;5469/2;5577/2;5595/2;2799")
        self.assertIn(cycle, find_cycles_lattice_1d(geometric_system(3), Side.B))

    def test_fixed_points(self):
        self.assertEqual(multiple_fixed_point(2, 3), Fraction(1))
        self.assertEqual(multiple_fixed_point(3, 5), Fraction(3, 2))
        self.assertEqual(multiple_fixed_point(4, 7), Fraction(2))

    def test_no_fixed_point(self):
        """Test None when 2n - 1 does not divide p."""
        self.assertIsNone(multiple_fixed_point(2, 5))


if __name__ == "__main__":
    unittest.main()
