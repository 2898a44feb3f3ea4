"""Deterministic CSV writing shared by trajectory, residual and sweep exports."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Sequence


def amp(x: float) -> str:
    """17 significant digits, enough to round-trip a double."""
    return f"{x:.17g}"


def sci(x: float) -> str:
    return f"{x:.16e}"


def write_rows(path, header: Sequence[str], rows: Iterable[Sequence[str]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def read_rows(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]
