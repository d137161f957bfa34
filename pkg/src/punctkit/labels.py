"""Lossless token-level labels for punctuation restoration.

Each source token gets a capitalization class and a list of mark inserts.
Inserts are anchored to a slot of the token: before it (``LEADING``), inside
it after ``offset`` characters (``INTERIOR``), or after it (``TRAILING``).
``rank`` orders several marks in the same slot, and ``gap`` records a space
between the mark and the word. Gapped marks encode punctuation that stood as
its own whitespace token in the target (``word ,``): it attaches to the
previous word as a trailing insert, or to the first word as a leading one.

``apply_labels(tokenize(pair.source), derive_labels(pair).labels)``
reproduces ``pair.target`` exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .corpus import MARK_CHARS, MARK_NAMES, MARKS, Pair, normalize_punctuation, strip_token

CAP_KINDS = ("LOWER", "INITIAL", "ALL_CAPS", "OTHER")
SLOTS = ("LEADING", "INTERIOR", "TRAILING")
_SLOT_ORDER = {s: i for i, s in enumerate(SLOTS)}


class AlignmentError(ValueError):
    """The target cannot be aligned to (or encoded over) the source tokens."""


class LabelError(ValueError):
    """A label cannot be applied to its token."""


@dataclass(frozen=True)
class Cap:
    kind: str = "LOWER"
    mask: str = ""  # only for OTHER: one '0'/'1' per source character

    def __post_init__(self):
        if self.kind not in CAP_KINDS:
            raise LabelError(f"unknown capitalization class {self.kind!r}")
        if (self.kind == "OTHER") != bool(self.mask):
            raise LabelError("a mask is required for OTHER and only for OTHER")
        if self.mask.strip("01"):
            raise LabelError(f"mask must be a bit string, got {self.mask!r}")


LOWER = Cap("LOWER")
INITIAL = Cap("INITIAL")
ALL_CAPS = Cap("ALL_CAPS")


@dataclass(frozen=True)
class MarkInsert:
    slot: str
    mark: str
    offset: int = 0
    rank: int = 0
    gap: bool = False

    def __post_init__(self):
        if self.slot not in _SLOT_ORDER:
            raise LabelError(f"unknown slot {self.slot!r}")
        if self.mark not in MARKS:
            raise LabelError(f"unknown mark {self.mark!r}")
        if self.rank < 0:
            raise LabelError("rank must be >= 0")

    @property
    def sort_key(self) -> tuple:
        return (_SLOT_ORDER[self.slot], self.offset, self.rank)


@dataclass(frozen=True)
class TokenLabel:
    cap: Cap = LOWER
    inserts: tuple[MarkInsert, ...] = ()

    def to_json(self) -> dict:
        return {
            "cap": self.cap.kind,
            "mask": self.cap.mask,
            "inserts": [
                {"slot": m.slot, "offset": m.offset, "rank": m.rank, "mark": m.mark, "gap": m.gap}
                for m in self.inserts
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TokenLabel":
        inserts = tuple(
            MarkInsert(slot=m["slot"], mark=m["mark"], offset=int(m.get("offset", 0)),
                       rank=int(m.get("rank", 0)), gap=bool(m.get("gap", False)))
            for m in obj.get("inserts", ())
        )
        return cls(cap=Cap(obj.get("cap", "LOWER"), obj.get("mask", "") or ""), inserts=inserts)


@dataclass
class LabeledSequence:
    pair_id: str
    tokens: list[str]
    labels: list[TokenLabel]

    def __post_init__(self):
        if len(self.tokens) != len(self.labels):
            raise LabelError(f"{len(self.tokens)} tokens but {len(self.labels)} labels")

    def to_json(self) -> dict:
        return {"id": self.pair_id, "tokens": list(self.tokens),
                "labels": [lab.to_json() for lab in self.labels]}

    @classmethod
    def from_json(cls, obj: dict) -> "LabeledSequence":
        return cls(pair_id=str(obj["id"]), tokens=list(obj["tokens"]),
                   labels=[TokenLabel.from_json(x) for x in obj["labels"]])


@dataclass(frozen=True)
class RestorationOp:
    index: int
    detail: Union[Cap, MarkInsert]

    @property
    def category(self) -> str:
        return "CAP" if isinstance(self.detail, Cap) else self.detail.mark


OP_CATEGORIES = ("CAP", "COMMA", "PERIOD", "SQUOTE", "DQUOTE")


def tokenize(text: str) -> list[str]:
    return text.split()


# -- capitalization ---------------------------------------------------------

def _up(ch: str) -> str:
    u = ch.upper()
    return u if len(u) == 1 else ch


def _initial(s: str) -> str:
    for i, ch in enumerate(s):
        u = _up(ch)
        if u != ch:
            return s[:i] + u + s[i + 1:]
    return s


def _cased(s: str, cap: Cap) -> str:
    if cap.kind == "LOWER":
        return s
    if cap.kind == "INITIAL":
        return _initial(s)
    if cap.kind == "ALL_CAPS":
        return "".join(_up(c) for c in s)
    if len(cap.mask) != len(s):
        raise LabelError(f"mask length {len(cap.mask)} does not match token {s!r}")
    return "".join(_up(c) if bit == "1" else c for c, bit in zip(s, cap.mask))


def apply_cap(s: str, cap: Cap) -> str:
    """Apply a capitalization class to a lowercase source token.

    The result always lowercases back to ``s``; characters whose uppercase
    form would not round-trip (e.g. dotless i) are left as they are.
    """
    out = _cased(s, cap)
    if out.lower() == s:
        return out
    out = "".join(o if o.lower() == c else c for c, o in zip(s, out))
    return out if out.lower() == s else s


def derive_cap(core: str, s: str) -> Cap:
    """Capitalization class turning source token ``s`` into ``core``.

    Classes are tried in the order LOWER, INITIAL, ALL_CAPS, OTHER.
    """
    if core == s:
        return LOWER
    if core == _initial(s):
        return INITIAL
    if core == "".join(_up(c) for c in s):
        return ALL_CAPS
    if len(core) != len(s):
        raise AlignmentError(f"casing of {core!r} changes its length when lowercased")
    cap = Cap("OTHER", "".join("1" if c != l else "0" for c, l in zip(core, s)))
    if apply_cap(s, cap) != core:
        raise AlignmentError(f"casing of {core!r} is not representable")
    return cap


# -- derivation -------------------------------------------------------------

@dataclass
class _Word:
    source: str
    cap: Cap
    inserts: list[MarkInsert] = field(default_factory=list)


def _split_word(tok: str) -> tuple[str, list[str], list[tuple[int, str]], list[str]]:
    """Split a token into (core, leading marks, interior (offset, mark), trailing marks)."""
    first = next(i for i, c in enumerate(tok) if c not in MARK_CHARS)
    last = max(i for i, c in enumerate(tok) if c not in MARK_CHARS)
    core_chars: list[str] = []
    interior: list[tuple[int, str]] = []
    for c in tok[first:last + 1]:
        if c in MARK_CHARS:
            interior.append((len(core_chars), c))
        else:
            core_chars.append(c)
    return "".join(core_chars), list(tok[:first]), interior, list(tok[last + 1:])


def _encode(text: str) -> list[_Word]:
    words: list[_Word] = []
    pending: list[tuple[str, bool]] = []  # standalone marks before the first word
    for tok in text.split():
        if not strip_token(tok):
            marks = [MARK_NAMES[c] for c in tok]
            if words:
                w = words[-1]
                rank = sum(1 for m in w.inserts if m.slot == "TRAILING")
                for k, mark in enumerate(marks):
                    w.inserts.append(MarkInsert("TRAILING", mark, rank=rank + k, gap=(k == 0)))
            else:
                pending.extend((mark, k == len(marks) - 1) for k, mark in enumerate(marks))
            continue

        core, lead, interior, trail = _split_word(tok)
        s = core.lower()
        w = _Word(source=s, cap=derive_cap(core, s))
        lead_marks = pending + [(MARK_NAMES[c], False) for c in lead]
        pending = []
        w.inserts.extend(MarkInsert("LEADING", m, rank=r, gap=g) for r, (m, g) in enumerate(lead_marks))
        ranks: dict[int, int] = {}
        for off, c in interior:
            ranks[off] = ranks.get(off, -1) + 1
            w.inserts.append(MarkInsert("INTERIOR", MARK_NAMES[c], offset=off, rank=ranks[off]))
        w.inserts.extend(MarkInsert("TRAILING", MARK_NAMES[c], rank=r) for r, c in enumerate(trail))
        words.append(w)
    if pending:
        raise AlignmentError("punctuation with no word to attach to")
    return words


def derive_labels(pair: Pair) -> LabeledSequence:
    """Gold labels that turn ``pair.source`` into ``pair.target``.

    Raises AlignmentError when the stripped target does not match the source
    token stream, when the target has non-canonical whitespace, or when a
    token's casing cannot be encoded.
    """
    target_tokens = pair.target.split()
    if " ".join(target_tokens) != pair.target:
        raise AlignmentError(f"{pair.id}: target whitespace is not single-space separated")
    words = _encode(pair.target)
    source_tokens = tokenize(pair.source)
    stripped = [w.source for w in words]
    if stripped != source_tokens:
        raise AlignmentError(f"{pair.id}: stripped target tokens do not match the source")
    labels = [TokenLabel(cap=w.cap, inserts=tuple(sorted(w.inserts, key=lambda m: m.sort_key)))
              for w in words]
    return LabeledSequence(pair_id=pair.id, tokens=source_tokens, labels=labels)


def label_hypothesis(text: str) -> tuple[list[str], list[TokenLabel | None]]:
    """Encode free restored text from any model.

    Quotes are normalized and whitespace collapsed first. Returns the stripped
    token stream and one label per token; ``None`` marks a token whose casing
    could not be encoded.
    """
    text = " ".join(normalize_punctuation(text).split())
    tokens: list[str] = []
    labels: list[TokenLabel | None] = []
    # Encode word by word so one bad token does not sink the whole hypothesis.
    groups: list[list[str]] = []
    prefix: list[str] = []
    for tok in text.split():
        if strip_token(tok):
            groups.append(prefix + [tok])
            prefix = []
        elif groups:
            groups[-1].append(tok)
        else:
            prefix.append(tok)
    for group in groups:
        try:
            words = _encode(" ".join(group))
        except AlignmentError:
            word = next(t for t in group if strip_token(t))
            tokens.append(strip_token(word))
            labels.append(None)
            continue
        for w in words:
            tokens.append(w.source)
            labels.append(TokenLabel(cap=w.cap, inserts=tuple(sorted(w.inserts, key=lambda m: m.sort_key))))
    return tokens, labels


# -- application ------------------------------------------------------------

def _render_token(tok: str, label: TokenLabel) -> str:
    body = apply_cap(tok, label.cap)
    lead, trail = [], []
    interior: dict[int, list[MarkInsert]] = {}
    for m in sorted(label.inserts, key=lambda m: m.sort_key):
        if m.slot == "LEADING":
            lead.append(MARKS[m.mark] + (" " if m.gap else ""))
        elif m.slot == "TRAILING":
            trail.append((" " if m.gap else "") + MARKS[m.mark])
        else:
            if not 1 <= m.offset <= len(tok):
                raise LabelError(f"interior offset {m.offset} out of range for {tok!r}")
            interior.setdefault(m.offset, []).append(m)
    if interior:
        pieces = []
        for i, c in enumerate(body):
            pieces.extend(MARKS[m.mark] for m in interior.get(i, ()))
            pieces.append(c)
        pieces.extend(MARKS[m.mark] for m in interior.get(len(body), ()))
        body = "".join(pieces)
    return "".join(lead) + body + "".join(trail)


def apply_labels(tokens: Sequence[str], labels: Sequence[TokenLabel]) -> str:
    if len(tokens) != len(labels):
        raise LabelError(f"{len(tokens)} tokens but {len(labels)} labels")
    return " ".join(_render_token(t, lab) for t, lab in zip(tokens, labels))


# -- operations -------------------------------------------------------------

def label_ops(index: int, label: TokenLabel) -> list[RestorationOp]:
    ops = [RestorationOp(index, m) for m in label.inserts]
    if label.cap.kind != "LOWER":
        ops.insert(0, RestorationOp(index, label.cap))
    return ops


def labels_to_ops(seq: LabeledSequence) -> frozenset[RestorationOp]:
    """One CAP op per non-LOWER token plus one op per insert."""
    return frozenset(op for i, lab in enumerate(seq.labels) for op in label_ops(i, lab))


def ops_to_labels(n_tokens: int, ops: Iterable[RestorationOp]) -> list[TokenLabel]:
    caps: dict[int, Cap] = {}
    inserts: dict[int, list[MarkInsert]] = {}
    for op in ops:
        if not 0 <= op.index < n_tokens:
            raise LabelError(f"op index {op.index} outside {n_tokens} tokens")
        if isinstance(op.detail, Cap):
            if op.index in caps:
                raise LabelError(f"two capitalization ops on token {op.index}")
            caps[op.index] = op.detail
        else:
            inserts.setdefault(op.index, []).append(op.detail)
    return [
        TokenLabel(cap=caps.get(i, LOWER),
                   inserts=tuple(sorted(inserts.get(i, ()), key=lambda m: m.sort_key)))
        for i in range(n_tokens)
    ]
