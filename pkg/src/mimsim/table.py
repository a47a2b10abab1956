"""Deterministic CSV tables with a ``#`` metadata header."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from pathlib import Path


def fmt(value):
    """Serialize a cell; floats get 17 significant digits (round-trip exact)."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    if isinstance(value, float) or hasattr(value, "dtype"):
        v = float(value)
        if math.isnan(v):
            return "nan"
        return "%.17g" % v
    return str(value)


@dataclass
class Table:
    columns: list
    rows: list = field(default_factory=list)
    metadata: list = field(default_factory=list)  # (key, value) pairs

    def column(self, name):
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def to_csv(self):
        out = io.StringIO()
        for key, value in self.metadata:
            out.write(f"# {key} = {fmt(value)}\n")
        out.write(",".join(self.columns) + "\n")
        for row in self.rows:
            out.write(",".join(fmt(v) for v in row) + "\n")
        return out.getvalue()

    def write(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_csv())
        return path


def read_csv(path):
    """Parse a file written by :meth:`Table.write` back into a Table of strings."""
    meta, lines = [], []
    for line in Path(path).read_text().splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition(" = ")
            meta.append((key, value))
        else:
            lines.append(line.split(","))
    return Table(columns=lines[0], rows=lines[1:], metadata=meta)
