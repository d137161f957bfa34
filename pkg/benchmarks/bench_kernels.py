"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--pairs 2000] [--repeat 3]

Times one training epoch, greedy decoding of every training sentence, and
token alignment of perturbed hypotheses, and checks the backends agree.
"""
from __future__ import annotations

import argparse
import random
import time

import numpy as np

from punctkit import baseline, kernels, synthetic
from punctkit.labels import derive_labels


def _setup(n_pairs: int):
    pairs = synthetic.make_pairs(n_pairs, seed=11)
    model = baseline.train(pairs[:200], epochs=1, seed=0)
    seqs = [derive_labels(p) for p in pairs]
    class_of = {n: k for k, n in enumerate(model.label_set)}
    enc = [model._encode(s.tokens) for s in seqs]
    golds = [np.array([class_of.get(baseline.to_baseline_label(lab), 0) for lab in s.labels], dtype=np.int64)
             for s in seqs]
    rng = random.Random(5)
    align_cases = []
    for s in seqs:
        a = [hash(t) % 50 for t in s.tokens]
        b = [t for t in a if rng.random() > 0.1]
        b = [t if rng.random() > 0.1 else 99 for t in b]
        align_cases.append((a, b))
    return model, enc, golds, align_cases


def _time(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--pairs", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    model, enc, golds, align_cases = _setup(args.pairs)
    prev = model._prev_ids()
    results: dict[str, dict[str, tuple[float, object]]] = {}
    for name, mod in kernels.backends().items():
        def train_epoch(mod=mod):
            w = np.zeros_like(model.weights)
            t = np.zeros_like(model.totals)
            st = np.zeros_like(model.weights)
            step = 0
            for (ip, ids), g in zip(enc, golds):
                step, _ = mod.train_sentence(ip, ids, prev, g, w, t, st, step)
            return w.tobytes() + t.tobytes()

        def decode(mod=mod):
            return [mod.decode_sentence(ip, ids, prev, model.totals).tobytes() for ip, ids in enc]

        def align(mod=mod):
            return [mod.align_tokens(a, b).tobytes() for a, b in align_cases]

        results[name] = {k: _time(f, args.repeat) for k, f in
                         (("train epoch", train_epoch), ("decode", decode), ("align", align))}
    names = list(results)
    print(f"{len(enc)} sentences, best of {args.repeat}")
    print(f"{'kernel':<12}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for k in results[names[0]]:
        times = [results[n][k][0] for n in names]
        line = f"{k:<12}" + "".join(f"{t * 1000:>10.1f}ms" for t in times)
        if len(names) > 1:
            line += f"{times[0] / times[1]:>11.1f}x"
            assert results[names[0]][k][1] == results[names[1]][k][1], f"{k}: backends disagree"
        print(line)
    if len(names) == 1:
        print("compiled backend not built; only the fallback was timed")


if __name__ == "__main__":
    main()
