"""CoNLL column files and the generic task JSON-lines records."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

SCHEMAS = {
    "conll03": ("pos", "chunk", "ner"),
    "conll00": ("pos", "chunk"),
}
DOCSTART = "-DOCSTART-"


class ConllFormatError(ValueError):
    pass


@dataclass
class TaskRecord:
    id: str
    tokens: list[str]
    columns: dict[str, list[str]] = field(default_factory=dict)
    raw_text: str = ""
    extra: dict = field(default_factory=dict)  # e.g. "spans", "tuples", "label"

    def __post_init__(self):
        for name, col in self.columns.items():
            if len(col) != len(self.tokens):
                raise ConllFormatError(
                    f"record {self.id}: column {name!r} has {len(col)} tags for {len(self.tokens)} tokens")
        if not self.raw_text:
            self.raw_text = " ".join(self.tokens)

    def to_json(self) -> dict:
        out = {"id": self.id, "tokens": self.tokens, "columns": self.columns}
        out.update(self.extra)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "TaskRecord":
        extra = {k: v for k, v in obj.items() if k not in ("id", "tokens", "columns", "raw_text")}
        tokens = list(obj.get("tokens") or [])
        return cls(id=str(obj["id"]), tokens=tokens, columns=dict(obj.get("columns") or {}),
                   raw_text=obj.get("raw_text", ""), extra=extra)


def read_conll(path, schema: str) -> list[TaskRecord]:
    """Read a blank-line separated column file.

    ``conll03`` rows are ``token pos chunk ner``; ``conll00`` rows are
    ``token pos chunk``. Sentences starting with ``-DOCSTART-`` are dropped.
    """
    try:
        names = SCHEMAS[schema.lower()]
    except KeyError:
        raise ValueError(f"unknown schema {schema!r}; expected one of {sorted(SCHEMAS)}") from None
    width = len(names) + 1
    records: list[TaskRecord] = []
    rows: list[list[str]] = []

    def flush():
        if rows and rows[0][0] != DOCSTART:
            cols = {name: [r[k + 1] for r in rows] for k, name in enumerate(names)}
            records.append(TaskRecord(id=str(len(records)), tokens=[r[0] for r in rows], columns=cols))
        rows.clear()

    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split()
            if not parts:
                flush()
                continue
            if len(parts) != width:
                raise ConllFormatError(
                    f"{path}:{lineno}: expected {width} columns for {schema}, found {len(parts)}")
            rows.append(parts)
    flush()
    return records


def conll_text(records: Iterable[TaskRecord], schema: str) -> str:
    """Serialize records back to column format, one blank line after each sentence."""
    names = SCHEMAS[schema.lower()]
    out = []
    for rec in records:
        for i, tok in enumerate(rec.tokens):
            out.append(" ".join([tok] + [rec.columns[n][i] for n in names]))
        out.append("")
    return "\n".join(out) + ("\n" if out else "")


def write_conll(path, records: Iterable[TaskRecord], schema: str) -> None:
    from ..io import atomic_write_text

    atomic_write_text(Path(path), conll_text(records, schema))
