"""
Unit tests for Gamma levels and attractor point clouds.
"""

import sys
import unittest
from fractions import Fraction
from pathlib import Path

project_root = Path(__file__).parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from backend.core.algebra import RMatrix, RVector
from backend.core.fourier.gamma import attractor_points, gamma_level, scale_gamma
from backend.utils.exceptions import GammaCapExceededError, GammaCollisionError, ValidationError


def _digits(*values):
    return tuple(RVector.of(v) for v in values)


class TestGammaLevel(unittest.TestCase):
    """Test enumeration of Gamma_n."""

    def setUp(self):
        self.digits = _digits(0, 1)
        self.scale = RMatrix.scalar(4)

    def test_level_zero(self):
        level = gamma_level(self.digits, self.scale, 0)
        self.assertEqual(level.points, self.digits)

    def test_level_one_order(self):
        """Test word order puts d_0 first: (0,0), (0,1), (1,0), (1,1)."""
        level = gamma_level(self.digits, self.scale, 1)
        self.assertEqual([p.entries[0] for p in level.points], [0, 4, 1, 5])
        self.assertEqual(level.word(1), (0, 1))
        self.assertEqual(level.word(2), (1, 0))

    def test_count(self):
        self.assertEqual(len(gamma_level(self.digits, self.scale, 5)), 2 ** 6)

    def test_sum_of_powers(self):
        """Test every point equals sum 4^k d_k for its word."""
        level = gamma_level(_digits(0, 1, 3), self.scale, 2)
        for index, point in enumerate(level.points):
            word = level.word(index)
            expected = sum(4 ** k * level.digits[i].entries[0] for k, i in enumerate(word))
            self.assertEqual(point.entries[0], expected)

    def test_negative_level(self):
        with self.assertRaises(ValidationError):
            gamma_level(self.digits, self.scale, -1)

    def test_cap(self):
        with self.assertRaises(GammaCapExceededError) as ctx:
            gamma_level(self.digits, self.scale, 10, cap=1000)
        self.assertEqual(ctx.exception.requested, 2 ** 11)
        self.assertEqual(ctx.exception.cap, 1000)

    def test_collision(self):
        """Test digits {0, 1, 4} with scale 4 collide: 4*1 = 4 + 0."""
        with self.assertRaises(GammaCollisionError) as ctx:
            gamma_level(_digits(0, 1, 4), self.scale, 1)
        first, second = ctx.exception.words
        self.assertNotEqual(first, second)

    def test_two_dimensional(self):
        digits = (RVector.of(0, 0), RVector.of(1, 2), RVector.of(-1, -2))
        level = gamma_level(digits, RMatrix.diagonal([3, 3]), 1)
        self.assertEqual(len(level), 9)
        self.assertIn(RVector.of(2, 4), level.points)

    def test_scale_gamma(self):
        level = scale_gamma(gamma_level(self.digits, self.scale, 1), 3)
        self.assertEqual([p.entries[0] for p in level.points], [0, 12, 3, 15])
        self.assertEqual(level.digits, _digits(0, 3))

    def test_scale_gamma_zero(self):
        with self.assertRaises(ValidationError):
            scale_gamma(gamma_level(self.digits, self.scale, 1), 0)


class TestAttractorPoints(unittest.TestCase):
    """Test finite approximations of X(D)."""

    def test_depth_zero(self):
        self.assertEqual(attractor_points(_digits(0, 2), RMatrix.scalar(4), 0), [RVector.of(0)])

    def test_cantor_depth_two(self):
        """Test sums 2/4 a + 2/16 b for a, b in {0, 1}."""
        points = attractor_points(_digits(0, 2), RMatrix.scalar(4), 2)
        self.assertEqual([p.entries[0] for p in points], [0, Fraction(1, 8), Fraction(1, 2), Fraction(5, 8)])

    def test_inside_unit_interval(self):
        points = attractor_points(_digits(0, 2), RMatrix.scalar(4), 6)
        self.assertEqual(len(points), 64)
        self.assertTrue(all(0 <= p.entries[0] <= Fraction(2, 3) for p in points))

    def test_planar_line(self):
        """Test X(L) of the planar system lies on the line y = 2x."""
        digits = (RVector.of(0, 0), RVector.of(1, 2), RVector.of(-1, -2))
        for p in attractor_points(digits, RMatrix.diagonal([3, 3]), 4):
            self.assertEqual(p.entries[1], 2 * p.entries[0])

    def test_negative_depth(self):
        with self.assertRaises(ValidationError):
            attractor_points(_digits(0, 2), RMatrix.scalar(4), -1)


if __name__ == "__main__":
    unittest.main()
