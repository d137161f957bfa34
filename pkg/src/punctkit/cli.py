"""Command-line entry point: ``punctkit <group> <command> [options]``.

Failures print one JSON line ``{"error": ..., "type": ...}`` to stderr and
exit 1; usage errors exit 2. Outputs are written atomically.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import FORMAT_VERSIONS, __version__, kernels
from .io import RecordError, atomic_write_text, jsonl_text, read_jsonl

log = logging.getLogger("punctkit")


class UsageError(ValueError):
    pass


def threads() -> int:
    raw = os.environ.get("PUNCTKIT_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"PUNCTKIT_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise UsageError("PUNCTKIT_THREADS must be >= 1")
    return n


def _check_inputs(*paths) -> None:
    for p in paths:
        if not Path(p).is_file():
            raise FileNotFoundError(f"input not found: {p}")


def _check_outputs(inputs, *outputs) -> None:
    resolved = {Path(p).resolve() for p in inputs}
    for p in outputs:
        path = Path(p)
        if path.is_dir():
            raise IsADirectoryError(f"output path is a directory: {p}")
        if path.resolve() in resolved:
            raise UsageError(f"output would overwrite an input: {p}")


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# -- corpus ------------------------------------------------------------------

def cmd_corpus_build(a) -> dict:
    from .corpus import build_pairs, partition, read_documents
    from .report import config_hash

    _check_inputs(a.input)
    out = Path(a.out)
    if out.exists() and not out.is_dir():
        raise NotADirectoryError(f"--out must be a directory: {a.out}")
    if a.limit < 1:
        raise UsageError("--limit must be >= 1")
    docs = list(read_documents(a.input))
    pairs, dropped = build_pairs(docs, a.limit, workers=threads())
    splits = partition(pairs, a.dev, a.test, a.seed)
    params = {"limit": a.limit, "dev": a.dev, "test": a.test, "seed": a.seed}
    manifest = {"format": "pairs", "version": FORMAT_VERSIONS["pairs"], **params,
                "documents": len(docs), "dropped": dropped,
                "counts": {name: len(getattr(splits, name)) for name in ("train", "dev", "test")},
                "config_hash": config_hash("corpus build", params, {"input": a.input})}
    for name in ("train", "dev", "test"):
        atomic_write_text(out / f"{name}.jsonl", jsonl_text(p.to_json() for p in getattr(splits, name)))
    atomic_write_text(out / "manifest.json", _dumps(manifest))
    return manifest["counts"] | {"dropped": dropped}


# -- labels ------------------------------------------------------------------

def cmd_labels_derive(a) -> dict:
    from .corpus import read_pairs
    from .labels import AlignmentError, derive_labels

    _check_inputs(a.pairs)
    _check_outputs([a.pairs], a.out)
    seqs, skipped = [], []
    for p in read_pairs(a.pairs):
        try:
            seqs.append(derive_labels(p))
        except AlignmentError as exc:
            if a.strict:
                raise
            log.warning("skipping %s: %s", p.id, exc)
            skipped.append(p.id)
    atomic_write_text(a.out, jsonl_text(s.to_json() for s in seqs))
    return {"labeled": len(seqs), "skipped": len(skipped)}


# -- score -------------------------------------------------------------------

def _by_id(path, what: str) -> dict[str, dict]:
    out: dict[str, dict] = {}
    for obj in read_jsonl(path):
        if "id" not in obj:
            raise RecordError(f"{path}: {what} record without an id")
        key = str(obj["id"])
        if key in out:
            raise RecordError(f"{path}: duplicate id {key!r}")
        out[key] = obj
    return out


def cmd_score_restoration(a) -> dict:
    from .labels import LabeledSequence
    from .report import Metadata, ReportRow, config_hash
    from .scorer import score_corpus

    _check_inputs(a.gold, a.hyp)
    _check_outputs([a.gold, a.hyp], a.report)
    golds = [LabeledSequence.from_json(o) for o in read_jsonl(a.gold)]
    hyps = {}
    for key, obj in _by_id(a.hyp, "hypothesis").items():
        if not isinstance(obj.get("restored"), str):
            raise RecordError(f"{a.hyp}: record {key!r} lacks a 'restored' string")
        hyps[key] = obj["restored"]
    score = score_corpus(golds, hyps)
    extra = sorted(set(hyps) - {g.pair_id for g in golds})
    row = ReportRow("Punctuation restoration", a.train_set, a.eval_set, score,
                    in_distribution=a.id, diagnostics=score.missing + len(extra))
    meta = Metadata(config_hash("score restoration", {"train_set": a.train_set, "eval_set": a.eval_set,
                                                      "id": a.id}, {"gold": a.gold, "hyp": a.hyp}))
    report = {**meta.to_json(), "kind": "restoration", "rows": [row.to_json()],
              "totals": score.to_json(), "missing": score.missing, "unknown_ids": len(extra)}
    atomic_write_text(a.report, _dumps(report))
    sys.stdout.write(score.to_tsv())
    return {}


def _spans(obj: dict, column: str):
    from .tasks import Span, spans_from_bio

    if "spans" in obj:
        out = []
        for s in obj["spans"]:
            rng = (int(s["start"]), int(s["end"])) if "start" in s else None
            out.append(Span(s["surface"], s["type"], rng))
        return out
    cols = obj.get("columns") or {}
    if column in cols:
        return spans_from_bio(obj["tokens"], cols[column])
    raise RecordError(f"record {obj.get('id')!r} has neither 'spans' nor a {column!r} column")


def _tuples(obj: dict):
    from .tasks import Tuple

    try:
        return [Tuple(t["arg0"], t["predicate"], t["arg1"]) for t in obj.get("tuples", [])]
    except (KeyError, TypeError) as exc:
        raise RecordError(f"record {obj.get('id')!r}: bad tuple ({exc})") from None


def _sentences(obj: dict):
    if "sentences" in obj:
        return list(obj["sentences"])
    for key in ("text", "output"):
        if isinstance(obj.get(key), str):
            return obj[key]
    raise RecordError(f"record {obj.get('id')!r} has no sentences")


def cmd_score_task(a) -> dict:
    from .metrics import TaskScore
    from .report import Metadata, ReportRow, config_hash
    from .tasks import delinearize, score_boundaries, score_labels, score_spans, score_tags, score_tuples

    _check_inputs(a.gold, a.pred)
    _check_outputs([a.gold, a.pred], a.report)
    gold = _by_id(a.gold, "gold")
    pred = _by_id(a.pred, "prediction")
    total = TaskScore()
    diagnostics = 0
    missing = [k for k in gold if k not in pred]
    gold_tags, pred_tags, gold_labels, pred_labels = [], [], [], []
    for key, g in gold.items():
        p = pred.get(key, {})
        if a.kind in ("spans", "tuples"):
            if "output" in p:
                parsed = delinearize(p["output"], "MULTITASK")
                diagnostics += len(parsed.diagnostics)
                p_items = parsed.spans if a.kind == "spans" else parsed.tuples
            else:
                p_items = (_spans(p, a.column) if p.get("spans") is not None else []) \
                    if a.kind == "spans" else _tuples(p)
            if a.kind == "spans":
                total = total + score_spans(_spans(g, a.column), p_items)
            else:
                total = total + score_tuples(_tuples(g), p_items)
        elif a.kind == "tags":
            gold_tags.append((g.get("columns") or {}).get(a.column) or [])
            if "output" in p:
                pred_tags.append(p["output"].split())
            else:
                pred_tags.append(p.get("tags") or (p.get("columns") or {}).get(a.column) or [])
        elif a.kind == "boundaries":
            total = total + score_boundaries(_sentences(g), _sentences(p) if p else _joined(g))
        else:
            if "label" not in g:
                raise RecordError(f"gold record {key!r} has no label")
            gold_labels.append(g["label"])
            pred_labels.append(p.get("label", p.get("output", a.negative)).strip()
                               if p else a.negative)
    if a.kind == "tags":
        tag_score = score_tags(gold_tags, pred_tags, a.scheme)
        total, diagnostics = tag_score, diagnostics + tag_score.diagnostics
    elif a.kind == "labels":
        total = score_labels(gold_labels, pred_labels, a.negative)
    task = a.task or a.kind
    row = ReportRow(task, a.train_set, a.eval_set, TaskScore(total.tp, total.fp, total.fn),
                    in_distribution=a.id, diagnostics=diagnostics + len(missing))
    params = {"kind": a.kind, "scheme": a.scheme, "column": a.column, "negative": a.negative,
              "task": task, "train_set": a.train_set, "eval_set": a.eval_set, "id": a.id}
    meta = Metadata(config_hash("score task", params, {"gold": a.gold, "pred": a.pred}))
    report = {**meta.to_json(), "kind": a.kind, "rows": [row.to_json()],
              "missing": len(missing), "unknown_ids": len(set(pred) - set(gold)),
              "matching": "exact" if a.kind in ("spans", "tuples") else None}
    atomic_write_text(a.report, _dumps(report))
    return row.to_json()


def _joined(g: dict) -> str:
    """A prediction with no breaks for a missing item."""
    s = _sentences(g)
    return " ".join(s if not isinstance(s, str) else s.split("\n"))


# -- baseline ----------------------------------------------------------------

def cmd_baseline_train(a) -> dict:
    from .baseline import save_model, train
    from .corpus import read_pairs

    _check_inputs(a.pairs)
    _check_outputs([a.pairs], a.out)
    if a.epochs < 0:
        raise UsageError("--epochs must be >= 0")
    model = train(read_pairs(a.pairs), epochs=a.epochs, seed=a.seed)
    save_model(model, a.out)
    return {"features": len(model.features), "steps": model.steps, "skipped": model.skipped}


def _sources(path) -> list[tuple[str, str]]:
    with open(path, encoding="utf-8") as fh:
        first = next((line for line in fh if line.strip()), "")
    try:
        is_pairs = isinstance(json.loads(first), dict)
    except json.JSONDecodeError:
        is_pairs = False
    if is_pairs:
        out = []
        for obj in read_jsonl(path):
            if "id" not in obj or not isinstance(obj.get("source"), str):
                raise RecordError(f"{path}: records need 'id' and 'source'")
            out.append((str(obj["id"]), obj["source"]))
        return out
    with open(path, encoding="utf-8") as fh:
        return [(str(k), line.rstrip("\n")) for k, line in enumerate(fh, 1) if line.strip()]


def cmd_baseline_restore(a) -> dict:
    from .baseline import load_model, restore

    _check_inputs(a.model, a.source)
    _check_outputs([a.model, a.source], a.out)
    model = load_model(a.model)
    items = _sources(a.source)
    atomic_write_text(a.out, jsonl_text({"id": k, "restored": restore(model, s)} for k, s in items))
    return {"restored": len(items)}


# -- task --------------------------------------------------------------------

def cmd_task_ingest(a) -> dict:
    from .tasks import read_conll

    _check_inputs(a.input)
    _check_outputs([a.input], a.out)
    records = read_conll(a.input, a.format)
    atomic_write_text(a.out, jsonl_text(r.to_json() for r in records))
    return {"records": len(records)}


def cmd_task_linearize(a) -> dict:
    from .tasks import TaskRecord, linearize_multitask, linearize_ner, linearize_openie, linearize_tags

    _check_inputs(a.input)
    _check_outputs([a.input], a.out)
    rows = []
    for obj in read_jsonl(a.input):
        rec = TaskRecord.from_json(obj)
        if a.kind == "ner":
            target = linearize_ner(_spans(obj, a.column))
        elif a.kind == "openie":
            target = linearize_openie(_tuples(obj))
        elif a.kind == "multitask":
            target = linearize_multitask(_spans(obj, a.column), _tuples(obj))
        else:
            if a.column not in rec.columns:
                raise RecordError(f"record {rec.id!r} has no {a.column!r} column")
            target = linearize_tags(rec.columns[a.column])
        rows.append({"id": rec.id, "input": rec.raw_text, "target": target})
    atomic_write_text(a.out, jsonl_text(rows))
    return {"records": len(rows)}


def cmd_task_delinearize(a) -> dict:
    from .tasks import delinearize

    _check_inputs(a.input)
    _check_outputs([a.input], a.out)
    rows, n_diag = [], 0
    for key, obj in _by_id(a.input, "prediction").items():
        parsed = delinearize(str(obj.get("output", "")), a.kind)
        n_diag += len(parsed.diagnostics)
        rows.append({"id": key,
                     "spans": [{"surface": s.surface, "type": s.type} for s in parsed.spans],
                     "tuples": [{"arg0": t.arg0, "predicate": t.predicate, "arg1": t.arg1}
                                for t in parsed.tuples],
                     "diagnostics": parsed.diagnostics})
    atomic_write_text(a.out, jsonl_text(rows))
    return {"records": len(rows), "diagnostics": n_diag}


# -- report ------------------------------------------------------------------

def cmd_report_render(a) -> dict:
    from .report import ReportRow, render_report

    _check_inputs(*a.inputs)
    if a.out:
        _check_outputs(a.inputs, a.out)
    rows = []
    for path in a.inputs:
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
                rows.extend(ReportRow.from_json(r) for r in data["rows"])
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise RecordError(f"{path}: not a punctkit report ({exc})") from None
    text = render_report(rows, a.style)
    if a.out:
        atomic_write_text(a.out, text)
    else:
        sys.stdout.write(text)
    return {}


# -- parser ------------------------------------------------------------------

def version_text() -> str:
    formats = ", ".join(f"{k} v{v}" for k, v in FORMAT_VERSIONS.items())
    return f"punctkit {__version__} ({formats}; kernels: {kernels.BACKEND})"


def _row_flags(p) -> None:
    p.add_argument("--train-set", default="", help="training-set name for the report row")
    p.add_argument("--eval-set", default="", help="evaluation-set name for the report row")
    p.add_argument("--id", action="store_true", help="mark the row as in-distribution")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="punctkit", description="Punctuation restoration toolkit.")
    parser.add_argument("--version", action="version", version=version_text())
    parser.add_argument("-v", "--verbose", action="store_true")
    groups = parser.add_subparsers(dest="group", required=True, metavar="GROUP")

    def command(group, name, fn, help_):
        p = group.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        p.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
        return p

    corpus = groups.add_parser("corpus", help="build source/target pairs").add_subparsers(
        dest="cmd", required=True, metavar="COMMAND")
    p = command(corpus, "build", cmd_corpus_build, "documents -> train/dev/test pair files")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--limit", type=int, default=150)
    p.add_argument("--dev", type=int, default=1000)
    p.add_argument("--test", type=int, default=1000)
    p.add_argument("--seed", type=int, required=True)

    labels = groups.add_parser("labels", help="token labels").add_subparsers(
        dest="cmd", required=True, metavar="COMMAND")
    p = command(labels, "derive", cmd_labels_derive, "pairs -> labels file")
    p.add_argument("--pairs", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--strict", action="store_true", help="fail on the first unlabelable pair")

    score = groups.add_parser("score", help="evaluation").add_subparsers(
        dest="cmd", required=True, metavar="COMMAND")
    p = command(score, "restoration", cmd_score_restoration, "operation-level P/R/F1")
    p.add_argument("--gold", required=True, help="labels file")
    p.add_argument("--hyp", required=True, help="hypotheses file")
    p.add_argument("--report", required=True)
    _row_flags(p)
    p = command(score, "task", cmd_score_task, "downstream task P/R/F1")
    p.add_argument("--kind", required=True, choices=["spans", "tuples", "tags", "boundaries", "labels"])
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--report", required=True)
    p.add_argument("--scheme", choices=["pos", "chunk"], default="pos", help="tag scoring scheme")
    p.add_argument("--column", default="ner", help="tag column for spans/tags")
    p.add_argument("--negative", default="no_relation", help="negative label for --kind labels")
    p.add_argument("--task", default="", help="task name for the report row")
    _row_flags(p)

    base = groups.add_parser("baseline", help="averaged-perceptron restorer").add_subparsers(
        dest="cmd", required=True, metavar="COMMAND")
    p = command(base, "train", cmd_baseline_train, "train a model on pairs")
    p.add_argument("--pairs", required=True)
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p = command(base, "restore", cmd_baseline_restore, "restore sources with a model")
    p.add_argument("--model", required=True)
    p.add_argument("--source", required=True, help="pairs file or one source per line")
    p.add_argument("--out", required=True)

    task = groups.add_parser("task", help="downstream task data").add_subparsers(
        dest="cmd", required=True, metavar="COMMAND")
    p = command(task, "ingest", cmd_task_ingest, "CoNLL columns -> task JSON-lines")
    p.add_argument("--format", required=True, choices=["conll03", "conll00"])
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p = command(task, "linearize", cmd_task_linearize, "task records -> input/target pairs")
    p.add_argument("--kind", required=True, choices=["ner", "openie", "tags", "multitask"])
    p.add_argument("--column", default="ner")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p = command(task, "delinearize", cmd_task_delinearize, "model outputs -> structures")
    p.add_argument("--kind", required=True, type=str.upper, choices=["NER", "OPENIE", "MULTITASK"])
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)

    rep = groups.add_parser("report", help="tables").add_subparsers(
        dest="cmd", required=True, metavar="COMMAND")
    p = command(rep, "render", cmd_report_render, "render JSON reports as a table")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--style", type=str.upper, choices=["TSV", "MARKDOWN"], default="TSV")
    p.add_argument("--out")
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        summary = args.fn(args)
    except Exception as exc:  # reported as one machine-readable line
        if args.verbose:
            log.exception("command failed")
        sys.stderr.write(json.dumps({"error": str(exc), "type": type(exc).__name__}) + "\n")
        return 1
    if summary and args.verbose:
        log.info("%s", json.dumps(summary, sort_keys=True))
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
