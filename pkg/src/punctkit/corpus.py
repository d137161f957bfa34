"""Corpus construction: punctuation normalization, fixed-size excerpts, the
strip-and-lowercase source transform, and seeded train/dev/test splits."""
from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator

log = logging.getLogger(__name__)

#: The four marks restored by the objective, keyed by label name.
MARKS = {"COMMA": ",", "PERIOD": ".", "SQUOTE": "'", "DQUOTE": '"'}
MARK_CHARS = frozenset(MARKS.values())
MARK_NAMES = {ch: name for name, ch in MARKS.items()}

_NORMALIZE = str.maketrans({
    "‘": "'",
    "’": "'",
    "ʼ": "'",
    "“": '"',
    "”": '"',
    "«": '"',
    "»": '"',
    "…": "...",
})
_STRIP = str.maketrans({ch: None for ch in MARK_CHARS})

DEFAULT_LIMIT = 150


@dataclass(frozen=True)
class Document:
    id: str
    text: str


@dataclass(frozen=True)
class Excerpt:
    id: str
    target: str
    word_count: int


@dataclass(frozen=True)
class Pair:
    id: str
    source: str
    target: str

    def to_json(self) -> dict:
        return {"id": self.id, "source": self.source, "target": self.target}


@dataclass
class CorpusSplits:
    train: list[Pair]
    dev: list[Pair]
    test: list[Pair]
    seed: int
    dropped: int = field(default=0, compare=False)


class CorpusError(ValueError):
    pass


def normalize_punctuation(text: str) -> str:
    """Map typographic quote variants to ASCII quotes and U+2026 to ``...``."""
    return text.translate(_NORMALIZE)


def strip_token(token: str) -> str:
    """Remove the four restorable marks and lowercase one token."""
    return token.translate(_STRIP).lower()


def depunctuate(target: str) -> str:
    """Build source text: drop ``, . ' "``, lowercase, and drop tokens left empty.

    Tokens are whitespace-separated and re-joined with single spaces.
    """
    out = []
    for tok in target.split():
        stripped = strip_token(tok)
        if stripped:
            out.append(stripped)
    return " ".join(out)


def split_excerpts(doc: Document, limit: int = DEFAULT_LIMIT) -> list[Excerpt]:
    """Cut a document into consecutive non-overlapping excerpts of ``limit`` words."""
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    words = doc.text.split()
    excerpts = []
    for k, start in enumerate(range(0, len(words), limit)):
        chunk = words[start:start + limit]
        excerpts.append(Excerpt(id=f"{doc.id}-{k}", target=" ".join(chunk), word_count=len(chunk)))
    return excerpts


def _pairs_for_document(doc: Document, limit: int) -> tuple[list[Pair], int]:
    pairs, dropped = [], 0
    for ex in split_excerpts(doc, limit):
        target = normalize_punctuation(ex.target)
        source = depunctuate(target)
        if not source:
            dropped += 1
            continue
        pairs.append(Pair(id=ex.id, source=source, target=target))
    return pairs, dropped


def build_pairs(docs: Iterable[Document], limit: int = DEFAULT_LIMIT,
                workers: int = 1) -> tuple[list[Pair], int]:
    """Turn documents into (source, target) pairs.

    Returns ``(pairs, dropped)`` where ``dropped`` counts excerpts whose
    source came out empty. Output order follows input order for any
    ``workers`` value.
    """
    docs = list(docs)
    if workers > 1 and len(docs) > 64:
        from concurrent.futures import ProcessPoolExecutor
        from functools import partial

        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(partial(_pairs_for_document, limit=limit), docs,
                                    chunksize=max(1, len(docs) // (workers * 4))))
    else:
        results = [_pairs_for_document(d, limit) for d in docs]

    pairs: list[Pair] = []
    dropped = 0
    for ps, d in results:
        pairs.extend(ps)
        dropped += d
    if dropped:
        log.info("dropped %d excerpts with empty source", dropped)
    return pairs, dropped


def partition(pairs: list[Pair], dev_n: int, test_n: int, seed: int) -> CorpusSplits:
    """Seeded shuffle, then the first ``dev_n`` go to dev, the next ``test_n``
    to test and the rest to train."""
    if dev_n < 0 or test_n < 0:
        raise CorpusError("split sizes must be non-negative")
    if len(pairs) <= dev_n + test_n:
        raise CorpusError(
            f"need more than {dev_n + test_n} pairs for dev={dev_n} test={test_n}, got {len(pairs)}")
    ids = [p.id for p in pairs]
    if len(set(ids)) != len(ids):
        raise CorpusError("pair ids are not unique")
    order = list(pairs)
    random.Random(seed).shuffle(order)
    return CorpusSplits(
        dev=order[:dev_n],
        test=order[dev_n:dev_n + test_n],
        train=order[dev_n + test_n:],
        seed=seed,
    )


def read_documents(path) -> Iterator[Document]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                yield Document(id=str(obj["id"]), text=obj["text"])
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise CorpusError(f"{path}:{lineno}: bad document record ({exc})") from None


def read_pairs(path) -> list[Pair]:
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                pairs.append(Pair(id=str(obj["id"]), source=obj["source"], target=obj["target"]))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise CorpusError(f"{path}:{lineno}: bad pair record ({exc})") from None
    return pairs

