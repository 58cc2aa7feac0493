"""Helpers for the TSV files the pipeline reads and writes."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Sequence

from sentirank.errors import InputError


def format_real(x: float, digits: int = 6) -> str:
    """Render with up to ``digits`` significant digits; never emits ``-0``."""
    s = f"{x:.{digits}g}"
    return "0" if s in ("-0", "0") else s


def write_tsv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\t".join(header) + "\n")
        for row in rows:
            fh.write("\t".join(str(c) for c in row) + "\n")


def read_tsv(path: str | Path, required: Sequence[str] = ()) -> list[dict[str, str]]:
    path = Path(path)
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
            missing = [c for c in required if c not in (reader.fieldnames or ())]
            if missing:
                raise InputError(f"{path}: missing column(s) {', '.join(missing)}")
            return list(reader)
    except FileNotFoundError:
        raise InputError(f"file not found: {path}")


def read_scores(path: str | Path) -> dict[str, float]:
    """Read an ``entity\\tscore`` file (first column is the id)."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE))
    except FileNotFoundError:
        raise InputError(f"file not found: {path}")
    scores: dict[str, float] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or not any(c.strip() for c in row):
            continue
        if len(row) < 2:
            raise InputError(f"{path}:{lineno}: expected id and score")
        try:
            scores[row[0]] = float(row[1])
        except ValueError:
            raise InputError(f"{path}:{lineno}: score {row[1]!r} is not a number")
    return scores
