"""Spans and tuples, BIO decoding, and the generative output formats.

Formats::

    NER        (Faker: PER) (T1: ORG)
    OpenIE     (Faker, is, a League of Legends esports player)
    Multitask  (Faker: PER) (Faker, is, a League of Legends esports player) (T1: ORG)
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import NamedTuple, Sequence


class BioError(ValueError):
    pass


@dataclass(frozen=True)
class Span:
    surface: str
    type: str
    token_range: tuple[int, int] | None = None

    def __post_init__(self):
        if self.token_range is not None and self.token_range[1] <= self.token_range[0]:
            raise ValueError(f"empty token range {self.token_range}")


@dataclass(frozen=True)
class Tuple:
    arg0: str
    predicate: str
    arg1: str

    def __post_init__(self):
        if not (self.arg0.strip() and self.predicate.strip() and self.arg1.strip()):
            raise ValueError(f"tuple fields must be non-empty: {self!r}")


def parse_tag(tag: str) -> tuple[str, str]:
    if tag == "O":
        return "O", ""
    prefix, sep, typ = tag.partition("-")
    if prefix not in ("B", "I") or not sep or not typ:
        raise BioError(f"unknown BIO tag {tag!r}")
    return prefix, typ


def bio_runs(tags: Sequence[str], lenient: bool = False) -> tuple[list[tuple[int, int, str]], int]:
    """Maximal B/I runs as ``(start, end, type)``, plus a repair count.

    An ``I-X`` that does not continue an ``X`` run opens a new run and counts
    as one repair. With ``lenient`` unknown tags are read as ``O`` and also
    counted; otherwise they raise BioError.
    """
    runs: list[tuple[int, int, str]] = []
    repairs = 0
    start, cur = None, ""
    for i, tag in enumerate(tags):
        try:
            prefix, typ = parse_tag(tag)
        except BioError:
            if not lenient:
                raise
            prefix, typ = "O", ""
            repairs += 1
        if prefix == "I" and start is not None and typ == cur:
            continue
        if start is not None:
            runs.append((start, i, cur))
            start = None
        if prefix != "O":
            if prefix == "I":
                repairs += 1
            start, cur = i, typ
    if start is not None:
        runs.append((start, len(tags), cur))
    return runs, repairs


def spans_from_bio(tokens: Sequence[str], tags: Sequence[str]) -> list[Span]:
    if len(tokens) != len(tags):
        raise BioError(f"{len(tokens)} tokens but {len(tags)} tags")
    runs, _ = bio_runs(tags)
    return [Span(" ".join(tokens[s:e]), typ, (s, e)) for s, e, typ in runs]


# -- linearization ----------------------------------------------------------

def _ner_group(span: Span) -> str:
    return f"({span.surface}: {span.type})"


def _tuple_group(t: Tuple) -> str:
    return f"({t.arg0}, {t.predicate}, {t.arg1})"


def linearize_ner(spans: Sequence[Span]) -> str:
    return " ".join(_ner_group(s) for s in spans)


def linearize_openie(tuples: Sequence[Tuple]) -> str:
    return " ".join(_tuple_group(t) for t in tuples)


def linearize_tags(tags: Sequence[str]) -> str:
    return " ".join(tags)


def linearize_multitask(spans: Sequence[Span], tuples: Sequence[Tuple]) -> str:
    """Interleave entity groups with the tuples they head.

    Each entity that is the first argument of some not-yet-emitted tuple is
    written followed by those tuples; then any leftover tuples; then the
    entities that headed no tuple, all in input order.
    """
    by_head: dict[str, list[int]] = defaultdict(list)
    for k, t in enumerate(tuples):
        by_head[t.arg0].append(k)
    done: set[int] = set()
    out: list[str] = []
    rest: list[Span] = []
    for span in spans:
        own = [k for k in by_head.get(span.surface, ()) if k not in done]
        if not own:
            rest.append(span)
            continue
        out.append(_ner_group(span))
        for k in own:
            out.append(_tuple_group(tuples[k]))
            done.add(k)
    out.extend(_tuple_group(t) for k, t in enumerate(tuples) if k not in done)
    out.extend(_ner_group(s) for s in rest)
    return " ".join(out)


# -- delinearization --------------------------------------------------------

class Delinearized(NamedTuple):
    spans: list[Span]
    tuples: list[Tuple]
    diagnostics: list[str]


def _groups(text: str, diags: list[str]) -> list[str]:
    groups = []
    depth = 0
    start = 0
    stray = False
    for i, c in enumerate(text):
        if c == "(":
            if depth == 0:
                start = i
                stray = False
            depth += 1
        elif c == ")":
            if depth == 0:
                diags.append(f"unmatched ')' at {i}")
                continue
            depth -= 1
            if depth == 0:
                groups.append(text[start + 1:i])
        elif depth == 0 and not c.isspace() and not stray:
            diags.append(f"text outside groups at {i}")
            stray = True
    if depth:
        diags.append(f"unclosed group at {start}")
    return groups


def _top_level(text: str, sep: str) -> list[int]:
    """Positions of ``sep`` outside nested parentheses."""
    hits = []
    depth = 0
    i = 0
    while i < len(text):
        c = text[i]
        if c == "(":
            depth += 1
        elif c == ")":
            depth = max(0, depth - 1)
        elif depth == 0 and text.startswith(sep, i):
            hits.append(i)
            i += len(sep)
            continue
        i += 1
    return hits


def _as_span(group: str) -> Span | None:
    hits = _top_level(group, ": ")
    if not hits:
        return None
    pos = hits[-1]
    surface, typ = group[:pos].strip(), group[pos + 2:].strip()
    if not surface or not typ:
        return None
    return Span(surface, typ)


def _as_tuple(group: str) -> Tuple | None:
    hits = _top_level(group, ", ")
    if len(hits) < 2:
        return None
    arg0 = group[:hits[0]].strip()
    predicate = group[hits[0] + 2:hits[-1]].strip()
    arg1 = group[hits[-1] + 2:].strip()
    if not (arg0 and predicate and arg1):
        return None
    return Tuple(arg0, predicate, arg1)


def delinearize(output: str, kind: str) -> Delinearized:
    """Parse model output into spans and/or tuples; never raises on bad input."""
    kind = kind.upper()
    if kind not in ("NER", "OPENIE", "MULTITASK"):
        raise ValueError(f"unknown kind {kind!r}")
    diags: list[str] = []
    spans: list[Span] = []
    tuples: list[Tuple] = []
    for group in _groups(output, diags):
        if kind in ("NER", "MULTITASK") and _top_level(group, ": "):
            span = _as_span(group)
            if span is None:
                diags.append(f"malformed entity group ({group})")
            else:
                spans.append(span)
            continue
        if kind == "NER":
            diags.append(f"not an entity group ({group})")
            continue
        tup = _as_tuple(group)
        if tup is None:
            diags.append(f"malformed tuple group ({group})")
        else:
            tuples.append(tup)
    return Delinearized(spans, tuples, diags)
