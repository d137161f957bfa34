"""Averaged-perceptron restorer.

Each token gets one of nine joint labels: a capitalization class (LOWER,
INITIAL, ALL_CAPS) crossed with a trailing mark (NONE, COMMA, PERIOD).
Decoding is greedy left to right, with the previous predicted label as a
feature. Quotes and interior marks are never predicted.

Weights are kept as integers: ``weights`` holds the current perceptron
weights and ``totals`` their running sum over all training steps, so the
averaged weights are ``totals / steps``. Prediction takes the argmax over
``totals``, which is the averaged argmax without any float rounding.
"""
from __future__ import annotations

import json
import logging
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .labels import (AlignmentError, Cap, LabeledSequence, MarkInsert, TokenLabel, apply_labels,
                     derive_labels, tokenize)
from .corpus import Pair

log = logging.getLogger(__name__)

FEATURE_TEMPLATE_VERSION = 1
MODEL_FORMAT = "punctkit-baseline"
MODEL_FORMAT_VERSION = 1

CAPS = ("LOWER", "INITIAL", "ALL_CAPS")
TRAILS = ("NONE", "COMMA", "PERIOD")
CANONICAL_LABELS = tuple(f"{c}|{t}" for c in CAPS for t in TRAILS)
START = "<S>"
END = "</S>"


class ModelFormatError(ValueError):
    pass


class ModelVersionError(ModelFormatError):
    pass


def to_baseline_label(label: TokenLabel) -> str:
    """Reduce a full token label to the nine-way baseline label.

    OTHER casing counts as LOWER; the trailing mark is the rank-0 trailing
    insert when it is an attached comma or period.
    """
    cap = label.cap.kind if label.cap.kind in CAPS else "LOWER"
    trail = "NONE"
    for m in label.inserts:
        if m.slot == "TRAILING" and m.rank == 0 and not m.gap and m.mark in ("COMMA", "PERIOD"):
            trail = m.mark
    return f"{cap}|{trail}"


def from_baseline_label(name: str) -> TokenLabel:
    cap, trail = name.split("|")
    inserts = () if trail == "NONE" else (MarkInsert("TRAILING", trail),)
    return TokenLabel(cap=Cap(cap), inserts=inserts)


def _static_features(tokens: Sequence[str], i: int) -> list[str]:
    n = len(tokens)
    w = tokens[i]

    def at(k: int) -> str:
        return tokens[k] if 0 <= k < n else (START if k < 0 else END)

    prev1, next1, next2 = at(i - 1), at(i + 1), at(i + 2)
    return [
        "bias",
        f"w={w}",
        f"p1={w[:1]}", f"p2={w[:2]}", f"p3={w[:3]}",
        f"s1={w[-1:]}", f"s2={w[-2:]}", f"s3={w[-3:]}",
        f"first={int(i == 0)}",
        f"last={int(i == n - 1)}",
        f"digit={int(any(c.isdigit() for c in w))}",
        f"w-1={prev1}",
        f"w+1={next1}",
        f"w-2={at(i - 2)}",
        f"w+2={next2}",
        f"w+3={at(i + 3)}",
        f"len={min(len(w), 8)}",
        f"w-1|w={prev1}|{w}",
        f"w|w+1={w}|{next1}",
        f"w+1|w+2={next1}|{next2}",
        f"w-1|w|w+1={prev1}|{w}|{next1}",
        f"s3|w+1={w[-3:]}|{next1}",
        f"w+1p2={next1[:2]}",
        f"w+1s3={next1[-3:]}",
        f"w-1s3={prev1[-3:]}",
    ]


def _prev_feature(prev: str) -> str:
    return f"prev_lab={prev}"


def extract_features(tokens: Sequence[str], i: int, prev: str = START) -> tuple[str, ...]:
    """Feature keys for token ``i`` given the previous predicted label."""
    if not 0 <= i < len(tokens):
        raise IndexError(f"token index {i} out of range")
    return tuple(_static_features(tokens, i)) + (_prev_feature(prev),)


@dataclass
class BaselineModel:
    features: dict[str, int]
    weights: np.ndarray
    totals: np.ndarray
    steps: int
    label_set: tuple[str, ...]
    epochs: int = 0
    seed: int = 0
    template_version: int = FEATURE_TEMPLATE_VERSION
    skipped: int = field(default=0, compare=False)

    @property
    def averaged_weights(self) -> np.ndarray:
        if self.steps == 0:
            return np.zeros(self.totals.shape, dtype=np.float64)
        return self.totals / self.steps

    def __eq__(self, other) -> bool:
        if not isinstance(other, BaselineModel):
            return NotImplemented
        return (self.features == other.features
                and list(self.features) == list(other.features)
                and np.array_equal(self.weights, other.weights)
                and np.array_equal(self.totals, other.totals)
                and (self.steps, self.label_set, self.epochs, self.seed, self.template_version)
                == (other.steps, other.label_set, other.epochs, other.seed, other.template_version))

    def _prev_ids(self) -> np.ndarray:
        names = (START,) + self.label_set
        return np.array([self.features[_prev_feature(n)] for n in names], dtype=np.int64)

    def _encode(self, tokens: Sequence[str]) -> tuple[np.ndarray, np.ndarray]:
        indptr = [0]
        ids: list[int] = []
        for i in range(len(tokens)):
            for f in _static_features(tokens, i):
                k = self.features.get(f)
                if k is not None:
                    ids.append(k)
            indptr.append(len(ids))
        return np.array(indptr, dtype=np.int64), np.array(ids, dtype=np.int64)


def _empty_model(features: dict[str, int], label_set: tuple[str, ...], epochs: int, seed: int) -> BaselineModel:
    shape = (len(features), len(label_set))
    return BaselineModel(features=features, weights=np.zeros(shape, dtype=np.int64),
                         totals=np.zeros(shape, dtype=np.int64), steps=0,
                         label_set=label_set, epochs=epochs, seed=seed)


def train(pairs: Iterable[Pair], epochs: int = 10, seed: int = 0) -> BaselineModel:
    """Train with greedy decoding, per-epoch seeded shuffling and weight averaging.

    Pairs whose labels cannot be derived are skipped and counted in
    ``model.skipped``. The label set is ordered by training frequency, so
    ties and an untrained model fall back to the most frequent label.
    """
    if epochs < 0:
        raise ValueError("epochs must be >= 0")
    seqs: list[LabeledSequence] = []
    skipped = 0
    for p in pairs:
        try:
            seq = derive_labels(p)
        except AlignmentError as exc:
            log.debug("skipping pair: %s", exc)
            skipped += 1
            continue
        if seq.tokens:
            seqs.append(seq)
    if not seqs:
        raise ValueError("no usable training pairs")

    gold_names = [[to_baseline_label(lab) for lab in s.labels] for s in seqs]
    freq = Counter(name for names in gold_names for name in names)
    label_set = tuple(sorted(CANONICAL_LABELS, key=lambda n: (-freq[n], CANONICAL_LABELS.index(n))))
    class_of = {n: k for k, n in enumerate(label_set)}

    features: dict[str, int] = {}
    for s in seqs:
        for i in range(len(s.tokens)):
            for f in _static_features(s.tokens, i):
                features.setdefault(f, len(features))
    for name in (START,) + CANONICAL_LABELS:
        features.setdefault(_prev_feature(name), len(features))

    model = _empty_model(features, label_set, epochs, seed)
    model.skipped = skipped
    encoded = [model._encode(s.tokens) for s in seqs]
    golds = [np.array([class_of[n] for n in names], dtype=np.int64) for names in gold_names]
    prev_ids = model._prev_ids()
    stamps = np.zeros_like(model.weights)

    rng = random.Random(seed)
    order = list(range(len(seqs)))
    step = 0
    for epoch in range(epochs):
        rng.shuffle(order)
        errors = 0
        for k in order:
            indptr, ids = encoded[k]
            step, err = kernels.train_sentence(indptr, ids, prev_ids, golds[k],
                                               model.weights, model.totals, stamps, step)
            errors += err
        log.info("epoch %d: %d token errors", epoch + 1, errors)
    model.totals += (step - stamps) * model.weights
    model.steps = step
    return model


def predict(model: BaselineModel, source: str, pair_id: str = "") -> LabeledSequence:
    tokens = tokenize(source)
    if not tokens:
        return LabeledSequence(pair_id=pair_id, tokens=[], labels=[])
    indptr, ids = model._encode(tokens)
    classes = kernels.decode_sentence(indptr, ids, model._prev_ids(), model.totals)
    labels = [from_baseline_label(model.label_set[c]) for c in classes.tolist()]
    return LabeledSequence(pair_id=pair_id, tokens=tokens, labels=labels)


def restore(model: BaselineModel, source: str) -> str:
    """Restored text; stripping and lowercasing it gives back ``source``."""
    seq = predict(model, source)
    return apply_labels(seq.tokens, seq.labels)


def majority_model(pairs: Iterable[Pair]) -> BaselineModel:
    """Untrained model that always predicts the most frequent label."""
    return train(pairs, epochs=0)


# -- serialization ----------------------------------------------------------
# Line 1: JSON header. Then one JSON array per feature, in feature-id order:
# [key, [weights...], [totals...]]. ASCII-only, so lines never split.

def dumps_model(model: BaselineModel) -> str:
    header = {
        "format": MODEL_FORMAT,
        "version": MODEL_FORMAT_VERSION,
        "template": model.template_version,
        "labels": list(model.label_set),
        "epochs": model.epochs,
        "seed": model.seed,
        "steps": model.steps,
        "n_features": len(model.features),
    }
    lines = [json.dumps(header, sort_keys=True)]
    for key, k in model.features.items():
        lines.append(json.dumps([key, model.weights[k].tolist(), model.totals[k].tolist()]))
    return "\n".join(lines) + "\n"


def loads_model(text: str) -> BaselineModel:
    lines = text.split("\n")
    try:
        header = json.loads(lines[0])
        if header.get("format") != MODEL_FORMAT:
            raise ModelFormatError("not a punctkit baseline model")
        if header.get("version") != MODEL_FORMAT_VERSION:
            raise ModelVersionError(
                f"model file version {header.get('version')} != supported {MODEL_FORMAT_VERSION}")
        if header.get("template") != FEATURE_TEMPLATE_VERSION:
            raise ModelVersionError(
                f"model uses feature template v{header.get('template')}, "
                f"this code uses v{FEATURE_TEMPLATE_VERSION}")
        label_set = tuple(header["labels"])
        if sorted(label_set) != sorted(CANONICAL_LABELS):
            raise ModelFormatError("unexpected label set")
        n = int(header["n_features"])
        body = lines[1:1 + n]
        if len(body) != n or any(line.strip() for line in lines[1 + n:]):
            raise ModelFormatError(f"expected {n} feature lines")
        features: dict[str, int] = {}
        weights = np.zeros((n, len(label_set)), dtype=np.int64)
        totals = np.zeros_like(weights)
        for k, line in enumerate(body):
            key, w, t = json.loads(line)
            if key in features:
                raise ModelFormatError(f"duplicate feature {key!r}")
            features[key] = k
            weights[k] = w
            totals[k] = t
        return BaselineModel(features=features, weights=weights, totals=totals,
                             steps=int(header["steps"]), label_set=label_set,
                             epochs=int(header["epochs"]), seed=int(header["seed"]),
                             template_version=int(header["template"]))
    except ModelFormatError:
        raise
    except (ValueError, KeyError, TypeError, IndexError) as exc:
        raise ModelFormatError(f"corrupted model file: {exc}") from None


def save_model(model: BaselineModel, path) -> None:
    from .io import atomic_write_text

    atomic_write_text(path, dumps_model(model))


def load_model(path) -> BaselineModel:
    with open(path, encoding="utf-8") as fh:
        return loads_model(fh.read())
