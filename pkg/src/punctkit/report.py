"""Evaluation reports: JSON records and table rendering."""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import FORMAT_VERSIONS, __version__
from .metrics import TaskScore

HEADER = ("Task", "Training set", "Evaluation set", "P", "R", "F1")
STYLES = ("TSV", "MARKDOWN")


@dataclass(frozen=True)
class ReportRow:
    task: str
    training_set: str
    evaluation_set: str
    score: TaskScore
    in_distribution: bool = False
    diagnostics: int = 0

    def sort_key(self) -> tuple:
        return (self.task, self.training_set, self.evaluation_set)

    def to_json(self) -> dict:
        return {"task": self.task, "training_set": self.training_set,
                "evaluation_set": self.evaluation_set, "in_distribution": self.in_distribution,
                "diagnostics": self.diagnostics, **self.score.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "ReportRow":
        return cls(task=obj["task"], training_set=obj.get("training_set", ""),
                   evaluation_set=obj.get("evaluation_set", ""),
                   score=TaskScore(int(obj["tp"]), int(obj["fp"]), int(obj["fn"])),
                   in_distribution=bool(obj.get("in_distribution", False)),
                   diagnostics=int(obj.get("diagnostics", 0)))


def fmt(x: float) -> str:
    """Two decimals without the leading zero: 0.666 -> '.67', 1.0 -> '1.00'."""
    s = f"{x:.2f}"
    return s[1:] if s.startswith("0.") else s


def _cells(row: ReportRow) -> list[str]:
    ev = f"{row.evaluation_set} (ID)" if row.in_distribution else row.evaluation_set
    s = row.score
    return [row.task, row.training_set, ev, fmt(s.precision), fmt(s.recall), fmt(s.f1)]


def render_report(rows, style: str = "TSV") -> str:
    style = style.upper()
    if style not in STYLES:
        raise ValueError(f"unknown style {style!r}; expected one of {STYLES}")
    ordered = sorted(rows, key=ReportRow.sort_key)
    if style == "TSV":
        return "".join("\t".join(r) + "\n" for r in [list(HEADER), *map(_cells, ordered)])
    lines = ["| " + " | ".join(HEADER) + " |", "|" + "---|" * len(HEADER)]
    last = None
    for row in ordered:
        cells = _cells(row)
        if row.task == last:
            cells[0] = ""
        last = row.task
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def config_hash(command: str, params: dict, inputs: dict[str, str | Path] = None) -> str:
    """Content hash of a resolved configuration and its input files."""
    payload = {"command": command, "params": params,
               "inputs": {k: file_digest(p) for k, p in sorted((inputs or {}).items())}}
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


@dataclass
class Metadata:
    config_hash: str
    tool: str = "punctkit"
    version: str = __version__
    formats: dict = field(default_factory=lambda: dict(FORMAT_VERSIONS))

    def to_json(self) -> dict:
        out = {"tool": self.tool, "version": self.version, "formats": self.formats,
               "config_hash": self.config_hash}
        # Wall-clock time would break byte-identical reruns; only a pinned
        # build time is recorded.
        epoch = os.environ.get("SOURCE_DATE_EPOCH")
        if epoch:
            out["timestamp"] = datetime.fromtimestamp(int(epoch), tz=timezone.utc).isoformat()
        return out
