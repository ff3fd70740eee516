"""Deterministic, figure-ready table output.

A :class:`Table` is a list of named sections, each with a column header and
rows, plus metadata echoed into the file header.  Formatting is canonical:
floats at 12 significant digits, LF newlines, sorted JSON keys.  Re-reading
an emitted file and emitting it again reproduces the bytes exactly, which
makes output diffs meaningful and runs reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["Section", "Table", "format_value", "read_csv", "read_json"]


def format_value(value) -> str:
    """Canonical cell formatting: 12 significant digits for floats."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return "%.12g" % value
    return str(value)


def _parse_cell(text: str):
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


@dataclass
class Section:
    name: str
    columns: list
    rows: list = field(default_factory=list)

    def add(self, *row):
        if len(row) != len(self.columns):
            raise ValueError(f"row width {len(row)} != {len(self.columns)} "
                             f"columns in section {self.name!r}")
        self.rows.append(list(row))


@dataclass
class Table:
    """Output document: metadata mapping plus ordered sections."""

    command: str
    version: str
    config: dict
    sections: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def section(self, name: str, columns) -> Section:
        sec = Section(name=name, columns=list(columns))
        self.sections.append(sec)
        return sec

    # -- CSV ---------------------------------------------------------------

    def to_csv(self) -> str:
        lines = [f"# nhtopo {self.command} v{self.version}"]
        lines.append("# config: " + json.dumps(self.config, sort_keys=True,
                                               separators=(",", ":")))
        for key in sorted(self.notes):
            lines.append(f"# {key}: " + json.dumps(self.notes[key],
                                                   sort_keys=True,
                                                   separators=(",", ":")))
        for sec in self.sections:
            lines.append(f"# section: {sec.name}")
            lines.append(",".join(sec.columns))
            for row in sec.rows:
                lines.append(",".join(format_value(v) for v in row))
        return "\n".join(lines) + "\n"

    # -- JSON --------------------------------------------------------------

    def to_jsonable(self) -> dict:
        def clean(value):
            if isinstance(value, float):
                return float("%.12g" % value)
            return value

        return {
            "command": self.command,
            "version": self.version,
            "config": self.config,
            "notes": self.notes,
            "sections": [
                {
                    "name": sec.name,
                    "columns": sec.columns,
                    "rows": [[clean(v) for v in row] for row in sec.rows],
                }
                for sec in self.sections
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_jsonable(), sort_keys=True, indent=2) + "\n"

    def write(self, path, fmt: str = "csv") -> None:
        text = self.to_csv() if fmt == "csv" else self.to_json()
        Path(path).write_text(text)


def read_csv(path) -> Table:
    """Parse an emitted CSV back into a :class:`Table` (lossless round trip)."""
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("# nhtopo "):
        raise ValueError(f"{path} is not an nhtopo table")
    head = lines[0][len("# nhtopo "):].rsplit(" v", 1)
    table = Table(command=head[0], version=head[1], config={})
    current = None
    for line in lines[1:]:
        if line.startswith("# config: "):
            table.config = json.loads(line[len("# config: "):])
        elif line.startswith("# section: "):
            current = table.section(line[len("# section: "):], [])
            current.columns = None  # header row follows
        elif line.startswith("# "):
            key, _, payload = line[2:].partition(": ")
            table.notes[key] = json.loads(payload)
        elif current is not None and current.columns is None:
            current.columns = line.split(",")
        elif current is not None:
            current.rows.append([_parse_cell(c) for c in line.split(",")])
        else:
            raise ValueError(f"unexpected line outside any section: {line!r}")
    return table


def read_json(path) -> Table:
    data = json.loads(Path(path).read_text())
    table = Table(command=data["command"], version=data["version"],
                  config=data["config"], notes=data.get("notes", {}))
    for sec in data["sections"]:
        section = table.section(sec["name"], sec["columns"])
        section.rows = [list(row) for row in sec["rows"]]
    return table
