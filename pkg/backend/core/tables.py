"""
Tabular views of results as pandas DataFrames, and their CSV text.
All cells are preformatted strings or integers so the CSV is byte-stable.
"""

from typing import Iterable, List, Sequence

import pandas as pd

from backend.core.algebra import RVector
from backend.models.results import DensityEstimate, ExtremeCycle, ScanRow
from backend.utils.config import (
    CSV_LINE_TERMINATOR, CYCLE_TABLE_COLUMNS, DENSITY_COLUMNS, SYSTEM_CYCLE_COLUMNS
)
from backend.utils.formatting import format_float, format_rational, join_points


def cycles_frame(cycles: Sequence[ExtremeCycle]) -> pd.DataFrame:
    rows = [
        {
            "cycle_index": i,
            "length": c.length,
            "points": join_points(c.points),
            "digits": join_points(c.digits),
        }
        for i, c in enumerate(cycles, start=1)
    ]
    return pd.DataFrame(rows, columns=SYSTEM_CYCLE_COLUMNS)


def scan_frame(rows: Iterable[ScanRow]) -> pd.DataFrame:
    """One line per (p, cycle); values of p without cycles do not appear."""
    records = []
    for row in rows:
        for i, c in enumerate(row.cycles, start=1):
            records.append({
                "p": format_rational(row.p),
                "cycle_index": i,
                "length": c.length,
                "points": join_points(c.points),
                "digits": join_points(c.digits),
            })
    return pd.DataFrame(records, columns=CYCLE_TABLE_COLUMNS)


def density_frame(estimate: DensityEstimate) -> pd.DataFrame:
    records = [
        {"n": s.n, "h": format_rational(s.h), "count": s.count, "ratio": format_float(s.ratio)}
        for s in estimate.samples
    ]
    return pd.DataFrame(records, columns=DENSITY_COLUMNS)


def points_frame(points: Sequence[RVector]) -> pd.DataFrame:
    """Point cloud with one column per coordinate (x1, x2, ...)."""
    dim = points[0].dim if points else 1
    columns = [f"x{i + 1}" for i in range(dim)]
    return pd.DataFrame([[format_rational(a) for a in p.entries] for p in points], columns=columns)


def frame_to_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, lineterminator=CSV_LINE_TERMINATOR)


def onb_values(rows: Iterable[ScanRow]) -> List[str]:
    """Parameters whose scan found no non-trivial cycle and no error."""
    return [format_rational(r.p) for r in rows if not r.cycles and r.error is None]
