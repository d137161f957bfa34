"""Punctuation restoration toolkit: corpus construction, lossless restoration
labels, operation-level scoring, an averaged-perceptron restorer, and
linearization/scoring for structure-related downstream tasks."""

__version__ = "0.1.0"

# On-disk format versions; bump when a file layout changes.
FORMAT_VERSIONS = {
    "pairs": 1,
    "labels": 1,
    "model": 1,
    "report": 1,
}
