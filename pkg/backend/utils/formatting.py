"""
Deterministic text formatting for exact rationals, points and floats.
Every CSV, JSON and table writer goes through these helpers so that repeated
runs produce byte-identical output.
"""

from fractions import Fraction
from typing import Iterable, Sequence, Union

from backend.utils.config import FLOAT_SIGNIFICANT_DIGITS, POINT_SEPARATOR


def format_rational(value: Fraction) -> str:
    """Format a rational as "num/den", or as an integer when the denominator is 1."""
    return str(Fraction(value))


def format_float(value: float) -> str:
    """Format a float with the fixed number of significant digits."""
    return f"{float(value):.{FLOAT_SIGNIFICANT_DIGITS}g}"


def format_complex(value: complex) -> str:
    real = format_float(value.real)
    imag = format_float(abs(value.imag))
    sign = "-" if value.imag < 0 else "+"
    return f"{real}{sign}{imag}j"


def format_point(point: Union[Sequence[Fraction], Fraction]) -> str:
    """
    Format a point: plain rational in dimension one, "(x1,x2,...)" otherwise.

    Args:
        point: An RVector, a sequence of rationals or a single rational

    Returns:
        Text form of the point
    """
    if isinstance(point, (Fraction, int)):
        return format_rational(point)
    entries = list(point)
    if len(entries) == 1:
        return format_rational(entries[0])
    return "(" + ",".join(format_rational(x) for x in entries) + ")"


def join_points(points: Iterable) -> str:
    """Join formatted points with the CSV point separator."""
    return POINT_SEPARATOR.join(format_point(p) for p in points)
