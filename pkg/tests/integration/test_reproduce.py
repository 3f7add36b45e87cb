"""
Integration tests for the claim inventory against the bundled golden table.
"""

import io
import os
import sys
import tempfile
import unittest
from contextlib import redirect_stdout
from pathlib import Path
from unittest.mock import patch

project_root = Path(__file__).parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from backend.core.cycles.admissibility import odd_values, scan_admissibility
from backend.core.reproduce import CLAIMS, ReproduceContext, golden_table_diff, run_claims
from backend.core.tables import frame_to_csv, scan_frame
from backend.utils.config import GOLDEN_TABLE_FIXTURE
from backend.utils.exceptions import HadamardToolsError
from cli.hadamard import EXIT_FAILURE, main


class TestGoldenTable(unittest.TestCase):
    """Test the p <= 100 scan against data/fixtures."""

    @classmethod
    def setUpClass(cls):
        rows = scan_admissibility(4, odd_values(100), workers=1)
        cls.csv = frame_to_csv(scan_frame(rows))

    def test_matches_fixture(self):
        self.assertEqual(golden_table_diff(self.csv, GOLDEN_TABLE_FIXTURE), [])

    def test_fixture_shape(self):
        """Test 24 cycle rows and the header."""
        lines = self.csv.splitlines()
        self.assertEqual(lines[0], "p,cycle_index,length,points,digits")
        self.assertEqual(len(lines), 25)

    def test_diff_on_corrupted_fixture(self):
        with tempfile.TemporaryDirectory() as tmp:
            bad = Path(tmp) / "bad.csv"
            bad.write_text(self.csv.replace("7;23;27;28", "7;23;27;29"), encoding="utf-8")
            diff = golden_table_diff(self.csv, bad)
        self.assertTrue(any(line.startswith("-85,") for line in diff))
        self.assertTrue(any(line.startswith("+85,") for line in diff))


class TestClaims(unittest.TestCase):
    """Test individual claims and the runner."""

    def test_golden_table_claim(self):
        result = run_claims(["golden_table"])[0]
        self.assertTrue(result.passed, msg=result.detail)
        self.assertIn("32 ONB values", result.detail)

    def test_fast_claims_pass(self):
        names = [
            "geometric_cycles", "multiple_fixed_points", "orthogonality", "closed_form",
            "parity_gate", "named_verdicts", "attractor_line",
        ]
        for result in run_claims(names):
            self.assertTrue(result.passed, msg=f"{result.name}: {result.detail}")

    def test_seeded_claims_pass(self):
        """Test the claims drawing random sample points are stable for the default seed."""
        for result in run_claims(["sigma_properties", "duality", "onb_sigma"]):
            self.assertTrue(result.passed, msg=f"{result.name}: {result.detail}")

    def test_density_claim(self):
        result = run_claims(["density"])[0]
        self.assertTrue(result.passed, msg=result.detail)

    def test_order_follows_inventory(self):
        results = run_claims(["parity_gate", "closed_form"])
        self.assertEqual([r.name for r in results], ["closed_form", "parity_gate"])

    def test_unknown_claim(self):
        with self.assertRaises(HadamardToolsError):
            run_claims(["no_such_claim"])

    def test_missing_fixture_fails_claim(self):
        """Test an unreadable fixture makes the claim fail instead of raising."""
        context = ReproduceContext(fixture_path=Path("/nonexistent/table.csv"))
        result = run_claims(["golden_table"], context)[0]
        self.assertFalse(result.passed)
        self.assertIn("FileNotFoundError", result.detail)

    def test_inventory_names_unique(self):
        names = [c.name for c in CLAIMS]
        self.assertEqual(len(names), len(set(names)))


@patch.dict(os.environ, {k: v for k, v in os.environ.items() if not k.startswith("HADAMARD_")}, clear=True)
class TestReproduceCli(unittest.TestCase):

    def test_corrupted_fixture_exits_one(self):
        with tempfile.TemporaryDirectory() as tmp:
            bad = Path(tmp) / "bad.csv"
            bad.write_text(GOLDEN_TABLE_FIXTURE.read_text(encoding="utf-8").replace("85,1,4", "85,1,5"),
                           encoding="utf-8")
            buffer = io.StringIO()
            with redirect_stdout(buffer):
                code = main(["reproduce", "--fixture", str(bad), "--claim", "golden_table", "--quiet"])
        self.assertEqual(code, EXIT_FAILURE)
        self.assertTrue(buffer.getvalue().startswith("golden_table\tFAIL\t"))


if __name__ == "__main__":
    unittest.main()
