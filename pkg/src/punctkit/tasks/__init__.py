"""Downstream task formats: CoNLL ingestion, linearization and scoring."""
from .conll import SCHEMAS, ConllFormatError, TaskRecord, conll_text, read_conll, write_conll
from .scoring import (DiagnosedScore, score_boundaries, score_labels, score_multiset, score_spans,
                      score_tags, score_tuples)
from .structures import (BioError, Delinearized, Span, Tuple, bio_runs, delinearize, linearize_multitask,
                         linearize_ner, linearize_openie, linearize_tags, parse_tag, spans_from_bio)

__all__ = [
    "SCHEMAS", "ConllFormatError", "TaskRecord", "conll_text", "read_conll", "write_conll",
    "DiagnosedScore", "score_boundaries", "score_labels", "score_multiset", "score_spans",
    "score_tags", "score_tuples",
    "BioError", "Delinearized", "Span", "Tuple", "bio_runs", "delinearize", "linearize_multitask",
    "linearize_ner", "linearize_openie", "linearize_tags", "parse_tag", "spans_from_bio",
]
