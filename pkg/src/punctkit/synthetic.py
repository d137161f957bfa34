"""Templated English-like documents with fixed punctuation and casing rules.

Rules baked into every generated target:

* the first word of a sentence is capitalized (acronyms stay all-caps);
* names are always capitalized, acronyms always all-caps;
* every sentence ends with a period;
* a comma follows an opening adverb and precedes ``but``/``so``/``while``.

Because the rules are known, the generator is its own oracle for the gold
restoration of any produced text.
"""
from __future__ import annotations

import random

from .corpus import Document, Pair, depunctuate

NAMES = ["alice", "bob", "carol", "dmitri", "emma", "farid", "grace", "hiro", "ines", "jonas",
         "kemal", "lena", "marco", "nadia", "oscar", "priya"]
PLACES = ["paris", "london", "cairo", "lima", "oslo", "seoul", "tokyo", "quebec"]
ACRONYMS = ["nasa", "fbi", "bbc", "un", "imf", "who"]
ADVERBS = ["yesterday", "however", "meanwhile", "later", "finally", "today"]
VERBS = ["visited", "praised", "criticized", "met", "called", "questioned", "thanked", "joined"]
INTRANSITIVE = ["arrived", "left", "spoke", "waited", "resigned", "returned"]
NOUNS = ["report", "budget", "proposal", "contract", "deal", "plan", "agreement", "project",
         "committee", "museum", "council", "market"]
ADJECTIVES = ["new", "old", "large", "quiet", "final", "public", "secret", "early"]
CONJ = ["but", "so", "while"]


def _subject(rng: random.Random) -> list[str]:
    r = rng.random()
    if r < 0.55:
        return [rng.choice(NAMES).capitalize()]
    if r < 0.75:
        return [rng.choice(ACRONYMS).upper()]
    return ["the", rng.choice(NOUNS)]


def _object(rng: random.Random) -> list[str]:
    r = rng.random()
    if r < 0.5:
        return ["the", rng.choice(ADJECTIVES), rng.choice(NOUNS)]
    if r < 0.7:
        return ["a", rng.choice(NOUNS)]
    if r < 0.85:
        return ["the", rng.choice(NOUNS), "in", rng.choice(PLACES).capitalize()]
    return [rng.choice(ACRONYMS).upper(), "officials"]


def _clause(rng: random.Random) -> list[str]:
    if rng.random() < 0.3:
        return _subject(rng) + [rng.choice(INTRANSITIVE)]
    return _subject(rng) + [rng.choice(VERBS)] + _object(rng)


def sentence(rng: random.Random) -> str:
    words: list[str] = []
    if rng.random() < 0.3:
        words += [rng.choice(ADVERBS) + ","]
    words += _clause(rng)
    if rng.random() < 0.35:
        words[-1] += ","
        words += [rng.choice(CONJ)] + _clause(rng)
    words[-1] += "."
    first = words[0]
    if first.islower():
        words[0] = first[0].upper() + first[1:]
    return " ".join(words)


def document(rng: random.Random, n_sentences: int) -> str:
    return " ".join(sentence(rng) for _ in range(n_sentences))


def make_documents(n: int, seed: int, min_sentences: int = 2, max_sentences: int = 5) -> list[Document]:
    rng = random.Random(seed)
    return [Document(id=f"syn{k:06d}", text=document(rng, rng.randint(min_sentences, max_sentences)))
            for k in range(n)]


def make_pairs(n: int, seed: int, **kw) -> list[Pair]:
    return [Pair(id=d.id, source=depunctuate(d.text), target=d.text) for d in make_documents(n, seed, **kw)]
