"""Reader for the '#'-commented CSV dialect emitted by qi-cd-eval."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


class CsvFormatError(ValueError):
    """Input file does not parse as the expected CSV dialect."""


class MissingColumnError(KeyError):
    """A recipe referenced a column the CSV does not carry."""

    def __init__(self, path, name, available):
        super().__init__(name)
        self.column = name
        self.message = (
            f"{path}: missing column {name!r}; available: {', '.join(available)}"
        )

    def __str__(self):
        return self.message


@dataclass(frozen=True)
class Table:
    """One parsed CSV: provenance comments, column names, float data."""

    path: Path
    comments: tuple[str, ...]
    columns: tuple[str, ...]
    data: np.ndarray  # shape (n_rows, n_columns)

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise MissingColumnError(self.path, name, self.columns)
        return self.data[:, self.columns.index(name)]

    def has_column(self, name: str) -> bool:
        return name in self.columns

    def comment_value(self, key: str) -> str | None:
        prefix = f"# {key}="
        for line in self.comments:
            if line.startswith(prefix):
                return line[len(prefix):]
        return None


def read_table(path: str | Path) -> Table:
    path = Path(path)
    comments: list[str] = []
    columns: tuple[str, ...] | None = None
    rows: list[list[float]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith("#"):
                if columns is not None:
                    raise CsvFormatError(
                        f"{path}:{lineno}: comment after the header row"
                    )
                comments.append(line)
                continue
            cells = line.split(",")
            if columns is None:
                columns = tuple(cells)
                continue
            if len(cells) != len(columns):
                raise CsvFormatError(
                    f"{path}:{lineno}: expected {len(columns)} cells, got {len(cells)}"
                )
            try:
                rows.append([float(c) if c else float("nan") for c in cells])
            except ValueError as exc:
                raise CsvFormatError(f"{path}:{lineno}: {exc}") from exc
    if columns is None:
        raise CsvFormatError(f"{path}: no header row (empty file)")
    if not rows:
        raise CsvFormatError(f"{path}: no data rows")
    return Table(
        path=path,
        comments=tuple(comments),
        columns=columns,
        data=np.array(rows, dtype=float),
    )
