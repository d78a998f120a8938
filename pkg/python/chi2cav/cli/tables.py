"""
Numeric table emission: CSV (comma, header row, LF, no quoting) or JSON.

Floats are written in scientific notation with 15 significant digits so tables
reload losslessly and identical runs give identical bytes.
"""

import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence


def format_value(value: Any) -> str:
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.14e}"
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _json_note(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _json_value(v) for k, v in value.items()}
    return _json_value(value)


@dataclass
class Table:
    columns: Sequence[str]
    rows: List[Sequence[Any]] = field(default_factory=list)
    notes: Dict[str, Any] = field(default_factory=dict)

    def add(self, *values: Any) -> None:
        if len(values) != len(self.columns):
            raise ValueError(
                f"row has {len(values)} values for {len(self.columns)} columns"
            )
        self.rows.append(values)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([format_value(v) for v in row])
        for key, value in self.notes.items():
            if isinstance(value, dict):
                body = ",".join(f"{k}={format_value(v)}" for k, v in value.items())
            else:
                body = format_value(value)
            buffer.write(f"# {key}: {body}\n")
        return buffer.getvalue()

    def to_json(self) -> str:
        document = {
            "columns": list(self.columns),
            "rows": [
                {column: _json_value(v) for column, v in zip(self.columns, row)}
                for row in self.rows
            ],
        }
        if self.notes:
            document["notes"] = {
                key: _json_note(value) for key, value in self.notes.items()
            }
        return json.dumps(document, indent=2) + "\n"

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.to_csv()


def write_text(text: str, path: Optional[str]) -> None:
    """Write to a file (LF line endings) or to stdout when path is None."""
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with Path(path).open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


def emit(table: Table, path: Optional[str], fmt: str) -> None:
    write_text(table.render(fmt), path)
