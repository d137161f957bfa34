"""Operation-level precision/recall/F1 for restored text.

Gold and predicted restorations are turned into sets of ``RestorationOp``;
predicted ops live on hypothesis token indices and are mapped onto source
indices through a token alignment of the stripped streams. Ops on tokens the
restorer altered, dropped or invented are always wrong.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from . import kernels
from .labels import (OP_CATEGORIES, LabeledSequence, RestorationOp, label_hypothesis,
                     label_ops, labels_to_ops, tokenize)
from .metrics import TaskScore


@dataclass(frozen=True)
class AlignmentOutcome:
    mapping: tuple[tuple[int, int | None], ...]
    unmatched_hyp: tuple[int, ...]
    exact: bool
    # source indices whose aligned hypothesis token differs after stripping
    mismatched: frozenset[int] = frozenset()

    def hyp_to_source(self) -> dict[int, int]:
        """Hypothesis index -> source index, for cleanly matched tokens only."""
        return {j: i for i, j in self.mapping if j is not None and i not in self.mismatched}


def align_tokens(source: Sequence[str], hyp: Sequence[str]) -> AlignmentOutcome:
    if list(source) == list(hyp):
        return AlignmentOutcome(tuple((i, i) for i in range(len(source))), (), True)
    vocab: dict[str, int] = {}
    a = [vocab.setdefault(t, len(vocab)) for t in source]
    b = [vocab.setdefault(t, len(vocab)) for t in hyp]
    src_to_hyp = kernels.align_tokens(a, b)
    mapping = []
    used = set()
    mismatched = set()
    for i, j in enumerate(src_to_hyp.tolist()):
        if j < 0:
            mapping.append((i, None))
        else:
            mapping.append((i, j))
            used.add(j)
            if source[i] != hyp[j]:
                mismatched.add(i)
    unmatched = tuple(j for j in range(len(hyp)) if j not in used)
    return AlignmentOutcome(tuple(mapping), unmatched, False, frozenset(mismatched))


def align_hypothesis(source: str, hypothesis: str) -> AlignmentOutcome:
    """Align source tokens to the stripped tokens of a restored hypothesis."""
    hyp_tokens, _ = label_hypothesis(hypothesis)
    return align_tokens(tokenize(source), hyp_tokens)


@dataclass(frozen=True)
class RestorationScore(TaskScore):
    per_category: Mapping[str, TaskScore] = field(default_factory=dict)
    missing: int = 0

    def __add__(self, other: "RestorationScore") -> "RestorationScore":
        cats = {c: self.per_category.get(c, TaskScore()) + other.per_category.get(c, TaskScore())
                for c in OP_CATEGORIES}
        return RestorationScore(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn,
                                per_category=cats, missing=self.missing + other.missing)

    def to_json(self) -> dict:
        out = super().to_json()
        out["per_category"] = {c: s.to_json() for c, s in self.per_category.items()}
        out["missing"] = self.missing
        return out

    def to_tsv(self) -> str:
        rows = ["category\ttp\tfp\tfn\tprecision\trecall\tf1"]
        for name, s in [*self.per_category.items(), ("TOTAL", self)]:
            rows.append(f"{name}\t{s.tp}\t{s.fp}\t{s.fn}\t{s.precision:.4f}\t{s.recall:.4f}\t{s.f1:.4f}")
        return "\n".join(rows) + "\n"


def _tally(tp: Iterable[RestorationOp], fp: Iterable[RestorationOp],
           fn: Iterable[RestorationOp], missing: int = 0) -> RestorationScore:
    counts = {c: [0, 0, 0] for c in OP_CATEGORIES}
    for k, ops in enumerate((tp, fp, fn)):
        for op in ops:
            counts[op.category][k] += 1
    cats = {c: TaskScore(*v) for c, v in counts.items()}
    return RestorationScore(sum(v[0] for v in counts.values()), sum(v[1] for v in counts.values()),
                            sum(v[2] for v in counts.values()), per_category=cats, missing=missing)


def score_restoration(gold: Iterable[RestorationOp], pred: Iterable[RestorationOp],
                      alignment: AlignmentOutcome) -> RestorationScore:
    """Score predicted ops (hypothesis indices) against gold ops (source indices)."""
    gold = set(gold)
    to_src = alignment.hyp_to_source()
    remapped = set()
    stray = []
    for op in pred:
        i = to_src.get(op.index)
        if i is None:
            stray.append(op)
        else:
            remapped.add(RestorationOp(i, op.detail))
    return _tally(remapped & gold, list(remapped - gold) + stray, gold - remapped)


Hypothesis = Union[str, LabeledSequence]


def score_pair(gold: LabeledSequence, hyp: Hypothesis) -> RestorationScore:
    gold_ops = labels_to_ops(gold)
    if isinstance(hyp, LabeledSequence):
        return score_restoration(gold_ops, labels_to_ops(hyp), align_tokens(gold.tokens, hyp.tokens))
    hyp_tokens, hyp_labels = label_hypothesis(hyp)
    alignment = align_tokens(gold.tokens, hyp_tokens)
    bad = {j for j, lab in enumerate(hyp_labels) if lab is None}
    if bad:
        alignment = AlignmentOutcome(
            alignment.mapping, alignment.unmatched_hyp, False,
            alignment.mismatched | {i for i, j in alignment.mapping if j in bad})
    pred_ops = [op for j, lab in enumerate(hyp_labels) if lab is not None for op in label_ops(j, lab)]
    return score_restoration(gold_ops, pred_ops, alignment)


def score_corpus(golds: Sequence[LabeledSequence],
                 hyps: Mapping[str, Hypothesis]) -> RestorationScore:
    """Micro-averaged score; a gold item with no hypothesis contributes only fn."""
    total = _tally((), (), ())
    for g in golds:
        if g.pair_id in hyps:
            total = total + score_pair(g, hyps[g.pair_id])
        else:
            total = total + _tally((), (), labels_to_ops(g), missing=1)
    return total
