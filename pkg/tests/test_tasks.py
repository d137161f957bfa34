import random

import pytest
from hypothesis import given, strategies as st

from _gen import random_spans, random_tuples
from oracles import multiset_counts
from punctkit.tasks import (BioError, ConllFormatError, Span, TaskRecord, Tuple, bio_runs, conll_text,
                            delinearize, linearize_multitask, linearize_ner, linearize_openie, linearize_tags,
                            read_conll, score_spans, score_tuples, spans_from_bio, write_conll)

CONLL03 = """-DOCSTART- -X- -X- O

Faker NNP B-NP B-PER
plays VBZ B-VP O
for IN B-PP O
T1 NNP B-NP B-ORG
. . O O

Lee NNP B-NP B-PER
Sang-hyeok NNP I-NP I-PER
"""


def test_read_conll(tmp_path):
    path = tmp_path / "a.txt"
    path.write_text(CONLL03)
    recs = read_conll(path, "conll03")
    assert [r.id for r in recs] == ["0", "1"]
    assert recs[0].tokens[0] == "Faker" and recs[0].columns["ner"][0] == "B-PER"
    assert recs[0].raw_text == "Faker plays for T1 ."
    assert all(len(c) == len(r.tokens) for r in recs for c in r.columns.values())
    out = tmp_path / "b.txt"
    write_conll(out, recs, "conll03")
    content = [line for line in CONLL03.splitlines()[2:]]
    assert out.read_text().splitlines() == content + [""]
    assert read_conll(out, "conll03") == recs


def test_read_conll00_and_errors(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("He PRP B-NP\nran VBD B-VP\n")
    assert read_conll(p, "conll00")[0].columns == {"pos": ["PRP", "VBD"], "chunk": ["B-NP", "B-VP"]}
    p.write_text("He PRP B-NP\nran VBD\n")
    with pytest.raises(ConllFormatError, match=":2:"):
        read_conll(p, "conll00")
    with pytest.raises(ValueError):
        read_conll(p, "conll12")
    with pytest.raises(ConllFormatError):
        TaskRecord("x", ["a"], {"pos": []})
    assert conll_text([], "conll00") == ""


def test_task_record_json():
    r = TaskRecord("1", ["a", "b"], {"pos": ["X", "Y"]}, extra={"label": "no_relation"})
    assert TaskRecord.from_json(r.to_json()) == r


def test_spans_from_bio():
    assert spans_from_bio(["Faker", "at", "T1"], ["B-PER", "O", "B-ORG"]) == [
        Span("Faker", "PER", (0, 1)), Span("T1", "ORG", (2, 3))]
    assert spans_from_bio(["a", "b"], ["O", "O"]) == []
    assert spans_from_bio(["Lee", "Sang-hyeok"], ["B-PER", "I-PER"]) == [Span("Lee Sang-hyeok", "PER", (0, 2))]
    with pytest.raises(BioError):
        spans_from_bio(["a"], ["X-PER"])
    with pytest.raises(BioError):
        spans_from_bio(["a"], [])


def _oracle_runs(tags):
    """Run-length reading: a span starts at B-X, or at I-X not preceded by B-X/I-X."""
    runs, start, cur = [], None, None
    for i, t in enumerate(tags + ["O"]):
        kind, typ = (t.split("-", 1) + [""])[:2] if t != "O" else ("O", "")
        continues = kind == "I" and cur == typ
        if start is not None and not continues:
            runs.append((start, i, cur))
            start, cur = None, None
        if kind in "BI" and kind != "O" and not continues:
            start, cur = i, typ
    return runs


@given(st.lists(st.sampled_from(["O", "B-PER", "I-PER", "B-ORG", "I-ORG"]), max_size=12))
def test_bio_runs_match_oracle(tags):
    runs, repairs = bio_runs(tags)
    assert runs == _oracle_runs(list(tags))
    assert repairs == sum(1 for s, _, _ in runs if tags[s].startswith("I-"))


def test_bio_lenient():
    runs, repairs = bio_runs(["B-X", "junk", "I-X"], lenient=True)
    assert runs == [(0, 1, "X"), (2, 3, "X")] and repairs == 2


FAKER_SPANS = [Span("Faker", "PER"), Span("T1", "ORG")]
FAKER_TUPLES = [Tuple("Faker", "is", "a League of Legends esports player"),
                Tuple("Faker", "is mid laner and part owner at", "T1")]


def test_linearize_degenerate():
    assert linearize_ner([]) == "" and linearize_openie([]) == ""
    assert linearize_multitask(FAKER_SPANS, []) == linearize_ner(FAKER_SPANS)
    assert linearize_multitask([], FAKER_TUPLES) == linearize_openie(FAKER_TUPLES)
    assert linearize_tags(["B-NP", "O"]) == "B-NP O"


def test_multitask_ordering():
    spans = [Span("A", "PER"), Span("B", "ORG"), Span("C", "LOC")]
    tuples = [Tuple("C", "p", "x"), Tuple("Z", "q", "y"), Tuple("A", "r", "z")]
    assert linearize_multitask(spans, tuples) == "(A: PER) (A, r, z) (C: LOC) (C, p, x) (Z, q, y) (B: ORG)"


def test_delinearize_arity_and_garbage():
    assert delinearize("(a, b, c, d)", "OPENIE").tuples == [Tuple("a", "b, c", "d")]
    bad = delinearize("garbage ((", "MULTITASK")
    assert bad.spans == [] and bad.tuples == [] and bad.diagnostics
    d = delinearize("(x: PER) (a, b)", "MULTITASK")
    assert d.spans == [Span("x", "PER")] and d.tuples == [] and len(d.diagnostics) == 1
    assert delinearize("(a, b, c)", "NER").diagnostics
    with pytest.raises(ValueError):
        delinearize("", "SRL")


def test_score_spans_and_tuples_examples():
    s = score_spans(FAKER_SPANS, FAKER_SPANS)
    assert (s.precision, s.recall, s.f1) == (1.0, 1.0, 1.0)
    s = score_spans(FAKER_SPANS, FAKER_SPANS[:1])
    assert (s.precision, s.recall) == (1.0, 0.5)
    s = score_spans(FAKER_SPANS[:1], FAKER_SPANS[:1] * 2)
    assert (s.tp, s.fp) == (1, 1)
    assert score_tuples(FAKER_TUPLES, FAKER_TUPLES[::-1]).f1 == 1.0


@given(st.lists(st.sampled_from("abc"), max_size=6), st.lists(st.sampled_from("abcd"), max_size=6))
def test_span_scoring_matches_multiset_oracle(g, p):
    gold = [Span(x, "T") for x in g]
    pred = [Span(x, "T") for x in p]
    s = score_spans(gold, pred)
    assert (s.tp, s.fp, s.fn) == multiset_counts(gold, pred)


def test_roundtrip_sample():
    rng = random.Random(4)
    for _ in range(500):
        spans = random_spans(rng)
        tuples = random_tuples(rng, heads=[s.surface for s in spans])
        assert delinearize(linearize_ner(spans), "NER") == (spans, [], [])
        assert delinearize(linearize_openie(tuples), "OPENIE") == ([], tuples, [])
        d = delinearize(linearize_multitask(spans, tuples), "MULTITASK")
        assert sorted(d.spans, key=repr) == sorted(spans, key=repr)
        assert sorted(d.tuples, key=repr) == sorted(tuples, key=repr)
