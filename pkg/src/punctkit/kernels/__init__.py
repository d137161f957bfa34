"""Hot loops (token alignment, perceptron training/decoding).

The compiled ``_fast`` extension is used when it was built; otherwise the
numpy/pure-Python ``_pure`` module is used. Set ``PUNCTKIT_PURE=1`` to force
the fallback. Both backends produce identical results.
"""
from __future__ import annotations

import os

from . import _pure

try:
    if os.environ.get("PUNCTKIT_PURE") == "1":
        raise ImportError("pure backend forced")
    from . import _fast as _impl
    BACKEND = "cython"
except ImportError:
    _impl = _pure
    BACKEND = "python"

align_tokens = _impl.align_tokens
train_sentence = _impl.train_sentence
decode_sentence = _impl.decode_sentence


def backends() -> dict:
    """All importable backends by name, for tests and benchmarks."""
    found = {"python": _pure}
    try:
        from . import _fast
    except ImportError:
        pass
    else:
        found["cython"] = _fast
    return found


__all__ = ["BACKEND", "align_tokens", "train_sentence", "decode_sentence", "backends"]
