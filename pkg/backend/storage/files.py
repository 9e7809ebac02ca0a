"""
Buffered output store. Reports, tables and circuits are collected during a
run and written once by ``flush``; entries without a path go to stdout.
"""

import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO, Union

from pydantic import BaseModel

from services.circuit_core.circuit import ParametricCircuit
from services.circuit_core.parser import dumps_circuit

JsonLike = Union[BaseModel, Dict[str, Any], List[Any]]


def render_json(payload: JsonLike) -> str:
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json", by_alias=True)
    return json.dumps(payload, indent=2) + "\n"


def render_csv(rows: Sequence[Dict[str, Any]], columns: Sequence[str]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({c: row.get(c, "") for c in columns})
    return buffer.getvalue()


def render_table(rows: Sequence[Dict[str, Any]], columns: Sequence[str]) -> str:
    """Plain right-aligned text table, one header line."""
    cells = [[str(c) for c in columns]] + [[str(row.get(c, "")) for c in columns] for row in rows]
    widths = [max(len(line[i]) for line in cells) for i in range(len(columns))]
    return "".join("  ".join(v.rjust(w) for v, w in zip(line, widths)) + "\n" for line in cells)


@dataclass
class OutputStore:
    stdout: TextIO = field(default_factory=lambda: sys.stdout)
    _pending: List[tuple] = field(default_factory=list)

    # ==================== Recording ====================

    def add_json(self, path: Optional[Path], payload: JsonLike) -> None:
        self._pending.append((path, render_json(payload)))

    def add_csv(self, path: Optional[Path], rows: Sequence[Dict[str, Any]], columns: Sequence[str]) -> None:
        self._pending.append((path, render_csv(rows, columns)))

    def add_table(self, path: Optional[Path], rows: Sequence[Dict[str, Any]], columns: Sequence[str]) -> None:
        self._pending.append((path, render_table(rows, columns)))

    def add_circuit(self, path: Optional[Path], circuit: ParametricCircuit) -> None:
        self._pending.append((path, dumps_circuit(circuit)))

    # ==================== Writing ====================

    def flush(self) -> List[Path]:
        written: List[Path] = []
        for path, text in self._pending:
            if path is None:
                self.stdout.write(text)
                continue
            path = Path(path)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
            written.append(path)
        self._pending.clear()
        return written
