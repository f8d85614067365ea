"""
Convergence Results

Container for the relative errors of a convergence study.
"""

from typing import Any, Dict, List

import numpy as np
import pandas as pd

COLUMNS = ["method", "kind", "order", "delta"]


class ConvergenceResults:
    """Container for (method, kind, order, delta) rows and run metadata."""

    def __init__(self, rows: List[Dict[str, Any]], **kwargs):
        """
        Initialize results.

        Args:
            rows: one dict per evaluated expansion with the COLUMNS keys
            **kwargs: metadata such as dim, norm, n0
        """
        self.rows = list(rows)
        for key, value in kwargs.items():
            setattr(self, key, value)

    def __len__(self) -> int:
        return len(self.rows)

    def to_frame(self) -> pd.DataFrame:
        """Rows as a DataFrame in the CSV column order."""
        return pd.DataFrame(self.rows, columns=COLUMNS)

    def summary(self) -> pd.DataFrame:
        """
        Per method and kind: first and last order, their errors and the
        number of decades gained in between.
        """
        frame = self.to_frame()
        records = []
        for (method, kind), group in frame.groupby(["method", "kind"], sort=False):
            group = group.sort_values("order")
            first, last = group.iloc[0], group.iloc[-1]
            records.append(
                {
                    "method": method,
                    "kind": kind,
                    "first_order": int(first["order"]),
                    "last_order": int(last["order"]),
                    "first_delta": first["delta"],
                    "last_delta": last["delta"],
                    "decades": _decades(first["delta"], last["delta"]),
                }
            )
        return pd.DataFrame(records)


def _decades(first: float, last: float) -> float:
    if last <= 0.0:
        return np.inf
    if first <= 0.0:
        return 0.0
    return float(np.log10(first / last))
