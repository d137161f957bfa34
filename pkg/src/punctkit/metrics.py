"""Precision/recall/F1 from tp/fp/fn counts."""
from __future__ import annotations

from dataclasses import dataclass


def ratio(num: int, den: int, tp: int, fp: int, fn: int) -> float:
    # Empty denominator: perfect when both sides were empty, else zero.
    if den == 0:
        return 1.0 if tp + fp + fn == 0 else 0.0
    return num / den


@dataclass(frozen=True)
class TaskScore:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def precision(self) -> float:
        return ratio(self.tp, self.tp + self.fp, self.tp, self.fp, self.fn)

    @property
    def recall(self) -> float:
        return ratio(self.tp, self.tp + self.fn, self.tp, self.fp, self.fn)

    @property
    def f1(self) -> float:
        # Equals 2PR/(P+R) but with a single rounding step.
        return ratio(2 * self.tp, 2 * self.tp + self.fp + self.fn, self.tp, self.fp, self.fn)

    def __add__(self, other: "TaskScore") -> "TaskScore":
        return TaskScore(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn)

    def to_json(self) -> dict:
        return {"tp": self.tp, "fp": self.fp, "fn": self.fn,
                "precision": self.precision, "recall": self.recall, "f1": self.f1}


def micro(scores) -> TaskScore:
    """Sum counts before computing ratios."""
    total = TaskScore()
    for s in scores:
        total = total + TaskScore(s.tp, s.fp, s.fn)
    return total
