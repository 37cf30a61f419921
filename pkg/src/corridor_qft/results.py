"""Result rows and their byte-deterministic CSV / JSON serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["ResultRow", "to_records", "render", "emit", "read_json"]


@dataclass(frozen=True)
class ResultRow:
    """One checked observation.  Complex entries are split into ``_re``/``_im`` columns."""

    experiment: str
    case: int
    check: str
    params: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)
    gap: float = 0.0
    tolerance: float = 0.0
    note: str = ""

    @property
    def passed(self) -> bool:
        return bool(math.isfinite(self.gap) and self.gap <= self.tolerance)

    def to_record(self) -> dict:
        rec = {"experiment": self.experiment, "case": self.case, "check": self.check}
        for group in (self.params, self.values):
            for key, value in group.items():
                if isinstance(value, complex):
                    rec[f"{key}_re"] = value.real
                    rec[f"{key}_im"] = value.imag
                elif isinstance(value, (str, bool)):
                    rec[key] = value
                elif isinstance(value, int):
                    rec[key] = value
                else:
                    rec[key] = float(value)
        rec["gap"] = float(self.gap)
        rec["tolerance"] = float(self.tolerance)
        # recomputed here so the file can never disagree with gap/tolerance
        rec["pass"] = self.passed
        rec["note"] = self.note
        return rec


def to_records(rows) -> list[dict]:
    return [row.to_record() for row in rows]


def _columns(records) -> list[str]:
    head = ["experiment", "case", "check"]
    tail = ["gap", "tolerance", "pass", "note"]
    middle = []
    for rec in records:
        for key in rec:
            if key not in head and key not in tail and key not in middle:
                middle.append(key)
    return head + middle + tail


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def render(rows, fmt: str) -> str:
    records = to_records(rows)
    if fmt == "json":
        return json.dumps(records, indent=2, allow_nan=False) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    cols = _columns(records)
    writer.writerow(cols)
    for rec in records:
        writer.writerow([_cell(rec.get(c)) for c in cols])
    return buf.getvalue()


def emit(rows, fmt: str, path) -> Path:
    path = Path(path)
    text = render(rows, fmt)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc.strerror}") from exc
    return path


def read_json(path) -> list[dict]:
    return json.loads(Path(path).read_text(encoding="utf-8"))
