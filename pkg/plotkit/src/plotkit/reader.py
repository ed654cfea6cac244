"""CSV reading for the qscramble output schema.

Files carry '#'-prefixed metadata lines, then a header row, then one row per
time point in full double precision.  Input files are never modified.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


class RecipeError(ValueError):
    """A recipe or its referenced data is invalid; message carries context."""


@dataclass(frozen=True)
class CsvTable:
    path: Path
    columns: tuple[str, ...]
    data: np.ndarray  # shape (n_rows, n_columns)

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise RecipeError(
                f"{self.path}: no column {name!r}; available: {list(self.columns)}")
        return self.data[:, self.columns.index(name)]


def read_table(path: str | Path) -> CsvTable:
    """Parse one CSV file, skipping metadata lines."""
    path = Path(path)
    if not path.exists():
        raise RecipeError(f"CSV file not found: {path}")
    columns: tuple[str, ...] | None = None
    rows: list[list[float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if columns is None:
                columns = tuple(line.split(","))
                continue
            try:
                rows.append([float(x) for x in line.split(",")])
            except ValueError as exc:
                raise RecipeError(f"{path}:{line_no}: unparsable row: {exc}") from exc
    if columns is None or not rows:
        raise RecipeError(f"{path}: no header or no data rows")
    data = np.asarray(rows, dtype=float)
    if data.shape[1] != len(columns):
        raise RecipeError(f"{path}: row width {data.shape[1]} does not match "
                          f"header width {len(columns)}")
    return CsvTable(path=path, columns=columns, data=data)
