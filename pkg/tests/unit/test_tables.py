"""
Unit tests for the DataFrame views and their CSV text.
"""

import sys
import unittest
from fractions import Fraction
from pathlib import Path

project_root = Path(__file__).parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from backend.core.algebra import RVector
from backend.core.cycles.admissibility import scan_admissibility
from backend.core.density import beurling_lower_estimate, gamma1, gamma1_windows
from backend.core.tables import cycles_frame, density_frame, frame_to_csv, points_frame, scan_frame
from backend.models.results import ExtremeCycle, ScanRow, Side


class TestScanFrame(unittest.TestCase):
    """Test the golden-table layout."""

    def test_rows_per_cycle(self):
        rows = scan_admissibility(4, [1, 3, 15], workers=1)
        csv = frame_to_csv(scan_frame(rows))
        self.assertEqual(csv, (
            "p,cycle_index,length,points,digits\n"
            "3,1,1,1,3\n"
            "15,1,2,1;4,15;0\n"
            "15,2,1,5,15\n"
        ))

    def test_empty_scan(self):
        csv = frame_to_csv(scan_frame([ScanRow(p=Fraction(1), cycles=())]))
        self.assertEqual(csv, "p,cycle_index,length,points,digits\n")


class TestOtherFrames(unittest.TestCase):

    def test_cycles_frame(self):
        cycle = ExtremeCycle(points=(RVector.of(1),), digits=(RVector.of(3),), side=Side.B)
        frame = cycles_frame([cycle])
        self.assertEqual(list(frame.columns), ["cycle_index", "length", "points", "digits"])
        self.assertEqual(frame.iloc[0]["points"], "1")

    def test_density_frame(self):
        estimate = beurling_lower_estimate(gamma1(1), 0.5, gamma1_windows(2))
        csv = frame_to_csv(density_frame(estimate))
        self.assertEqual(csv.splitlines()[0], "n,h,count,ratio")
        self.assertEqual(csv.splitlines()[1], "1,1,2,2")

    def test_points_frame(self):
        frame = points_frame([RVector.of(0, 0), RVector.of("1/3", "2/3")])
        self.assertEqual(list(frame.columns), ["x1", "x2"])
        self.assertEqual(frame_to_csv(frame), "x1,x2\n0,0\n1/3,2/3\n")


if __name__ == "__main__":
    unittest.main()
