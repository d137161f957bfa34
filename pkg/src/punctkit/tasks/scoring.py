"""Scorers for the downstream task formats.

Every scorer returns tp/fp/fn counts, so dataset scores are micro-averaged by
summing per-instance results (``metrics.micro``).
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from ..corpus import strip_token
from ..metrics import TaskScore
from ..scorer import align_tokens
from .structures import Span, Tuple, bio_runs


@dataclass(frozen=True)
class DiagnosedScore(TaskScore):
    """A TaskScore that also counts repaired or unparseable input."""

    diagnostics: int = 0

    def __add__(self, other: TaskScore) -> "DiagnosedScore":
        return DiagnosedScore(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn,
                              self.diagnostics + getattr(other, "diagnostics", 0))

    def to_json(self) -> dict:
        out = super().to_json()
        out["diagnostics"] = self.diagnostics
        return out


def score_multiset(gold: Iterable[Hashable], pred: Iterable[Hashable]) -> TaskScore:
    g, p = Counter(gold), Counter(pred)
    tp = sum((g & p).values())
    return TaskScore(tp, sum(p.values()) - tp, sum(g.values()) - tp)


def _span_key(span: Span, by: str):
    if by == "range":
        if span.token_range is None:
            raise ValueError(f"span {span.surface!r} has no token range")
        return (tuple(span.token_range), span.type.strip())
    return (span.surface.strip(), span.type.strip())


def score_spans(gold: Sequence[Span], pred: Sequence[Span], by: str = "surface") -> TaskScore:
    """Exact multiset match on (surface, type), or on (token range, type) with ``by="range"``."""
    if by not in ("surface", "range"):
        raise ValueError(f"unknown span key {by!r}")
    return score_multiset((_span_key(s, by) for s in gold), (_span_key(s, by) for s in pred))


def _tuple_key(t: Tuple):
    return (t.arg0.strip(), t.predicate.strip(), t.arg1.strip())


def score_tuples(gold: Sequence[Tuple], pred: Sequence[Tuple]) -> TaskScore:
    return score_multiset(map(_tuple_key, gold), map(_tuple_key, pred))


def _pos_counts(gold: Sequence[str], pred: Sequence[str]) -> tuple[int, int, int]:
    n = min(len(gold), len(pred))
    tp = sum(g == p for g, p in zip(gold[:n], pred[:n]))
    wrong = n - tp
    return tp, wrong + max(0, len(pred) - n), wrong + max(0, len(gold) - n)


def score_tags(gold: Sequence[Sequence[str]], pred: Sequence[Sequence[str]],
               scheme: str = "pos") -> DiagnosedScore:
    """Score tag sequences sentence by sentence.

    ``pos``: a position counts as tp when the tags agree; a disagreement is
    one fp and one fn; positions past the end of the prediction are fn and
    surplus predicted positions are fp. ``chunk``: BIO runs are read
    leniently on both sides and compared as (range, type) spans; repairs are
    counted in ``diagnostics``.
    """
    if len(gold) != len(pred):
        raise ValueError(f"{len(gold)} gold sentences but {len(pred)} predicted")
    if scheme not in ("pos", "chunk"):
        raise ValueError(f"unknown tag scheme {scheme!r}")
    total = DiagnosedScore()
    for g, p in zip(gold, pred):
        if scheme == "pos":
            total = total + TaskScore(*_pos_counts(g, p))
            continue
        g_runs, g_fix = bio_runs(g, lenient=True)
        p_runs, p_fix = bio_runs(p, lenient=True)
        total = total + score_multiset(g_runs, p_runs) + DiagnosedScore(diagnostics=g_fix + p_fix)
    return total


def _sentences(text: str | Sequence[str]) -> list[list[str]]:
    lines = text.split("\n") if isinstance(text, str) else list(text)
    return [line.split() for line in lines if line.split()]


def _breaks(sentences: list[list[str]]) -> tuple[list[str], set[int]]:
    tokens: list[str] = []
    breaks: set[int] = set()
    for sent in sentences:
        tokens.extend(sent)
        breaks.add(len(tokens) - 1)
    breaks.discard(len(tokens) - 1)
    return tokens, breaks


def _form(token: str) -> str:
    return strip_token(token) or token


def score_boundaries(gold: str | Sequence[str], pred: str | Sequence[str]) -> TaskScore:
    """P/R/F1 over internal sentence breaks.

    Texts are one sentence per line (or a list of sentences); a boundary is
    the token index after which a break falls. When the token streams differ
    they are aligned on stripped, lowercased forms, and a predicted break on
    a token that did not align cleanly is a false positive.
    """
    g_tokens, g_breaks = _breaks(_sentences(gold))
    p_tokens, p_breaks = _breaks(_sentences(pred))
    if g_tokens == p_tokens:
        return score_multiset(g_breaks, p_breaks)
    alignment = align_tokens([_form(t) for t in g_tokens], [_form(t) for t in p_tokens])
    to_gold = alignment.hyp_to_source()
    mapped = {to_gold[j] for j in p_breaks if j in to_gold}
    stray = sum(1 for j in p_breaks if j not in to_gold)
    tp = len(mapped & g_breaks)
    return TaskScore(tp, len(mapped) - tp + stray, len(g_breaks) - tp)


def score_labels(gold: Sequence[str], pred: Sequence[str], negative: str = "no_relation") -> TaskScore:
    """Micro-F1 over instance labels with ``negative`` excluded from credit.

    A non-negative prediction is tp if correct and fp otherwise; a
    non-negative gold label that was not predicted exactly is fn.
    """
    if len(gold) != len(pred):
        raise ValueError(f"{len(gold)} gold labels but {len(pred)} predictions")
    tp = fp = fn = 0
    for g, p in zip(gold, pred):
        if p != negative:
            if p == g:
                tp += 1
            else:
                fp += 1
        if g != negative and p != g:
            fn += 1
    return TaskScore(tp, fp, fn)
