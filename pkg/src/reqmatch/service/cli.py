"""Command-line lifecycle: vocab, train, index, match, evaluate, synth, stats, serve.

Each subcommand is a thin wrapper over one library operation, so the CLI
and the HTTP server exercise the same code paths. Structured errors
(config, data, usage, shape) print one line to stderr and exit 1;
argparse handles unknown flags itself with usage text and exit 2.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from ..corpus import (
    corpus_stats,
    generate_synthetic,
    load_corpus_bundle,
    render_stats_table,
    save_corpus,
)
from ..encoder import EncoderConfig, load_checkpoint, save_checkpoint
from ..errors import ConfigError, DataError, ShapeError, UsageError
from ..evalkit import evaluate_checkpoint, load_splits, make_splits, save_splits
from ..matcher import build_index, load_index, save_index
from ..textprep import load_vocab, save_vocab, train_vocab
from ..training import (
    build_pipeline_data,
    load_plan,
    make_initial_checkpoint,
    run_pipeline,
)
from .config import load_service_config
from .http import create_app, load_state
from .responses import match_response


def cmd_vocab(args) -> int:
    corpus = load_corpus_bundle(args.corpus)
    texts = [p.text for p in corpus.paragraphs]
    texts += [r.description for r in corpus.requirements]
    vocab = train_vocab(texts, target_size=args.size, min_frequency=args.min_frequency)
    save_vocab(vocab, args.out)
    print(f"vocab: {len(vocab)} tokens -> {args.out}")
    return 0


def _parse_fractions(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError("--fractions takes three comma-separated numbers")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise UsageError(f"--fractions must be numeric, got {text!r}")


def _parse_ids(text: str) -> set:
    return {part for part in text.split(",") if part} if text else set()


def cmd_train(args) -> int:
    corpus = load_corpus_bundle(args.corpus)
    vocab = load_vocab(args.vocab)
    plan = load_plan(args.plan)
    splits = make_splits(
        [(a.paragraph_id, a.requirement_id) for a in corpus.annotations],
        _parse_ids(args.unseen),
        _parse_fractions(args.fractions),
        args.split_seed,
        languages={p.id: p.language for p in corpus.paragraphs},
    )
    data = build_pipeline_data(corpus, splits)
    config = EncoderConfig(
        vocab_size=len(vocab),
        hidden_dim=args.hidden_dim,
        num_layers=args.num_layers,
        num_heads=args.num_heads,
        ff_dim=args.ff_dim,
        max_len=args.max_len,
        dropout_prob=args.dropout,
    )
    os.makedirs(args.out, exist_ok=True)
    report_path = os.path.join(args.out, "stage_reports.jsonl")
    if os.path.exists(report_path):
        os.remove(report_path)  # reports append; a rerun starts a fresh log
    checkpoint = make_initial_checkpoint(config, vocab, rng_seed=args.init_seed)
    trained = run_pipeline(plan, data, checkpoint, report_path=report_path)
    save_checkpoint(trained, args.out)
    save_splits(splits, os.path.join(args.out, "splits.json"))
    print(f"checkpoint: {trained.describe()} -> {args.out}")
    if trained.best_validation is not None:
        print(f"best validation metric: {trained.best_validation:.6f}")
    return 0


def cmd_index(args) -> int:
    checkpoint = load_checkpoint(args.checkpoint)
    corpus = load_corpus_bundle(args.corpus)
    items = [(p.id, "paragraph", p.text) for p in corpus.paragraphs]
    items += [(r.id, "requirement", r.description) for r in corpus.requirements]
    index = build_index(items, checkpoint)
    save_index(index, args.out)
    counts = index.counts()
    print(
        f"index: {counts.get('paragraph', 0)} paragraphs, "
        f"{counts.get('requirement', 0)} requirements -> {args.out}"
    )
    return 0


def cmd_match(args) -> int:
    checkpoint = load_checkpoint(args.checkpoint)
    index = load_index(args.index)
    response = match_response(args.text, args.direction, args.k, checkpoint, index)
    for hit in response["hits"]:
        print(f"{hit['id']}\t{hit['score']:.6f}")
    return 0


def cmd_evaluate(args) -> int:
    checkpoint = load_checkpoint(args.checkpoint)
    corpus = load_corpus_bundle(args.corpus)
    splits = load_splits(args.splits)
    report = evaluate_checkpoint(
        checkpoint,
        splits,
        {r.id: r.description for r in corpus.requirements},
        {p.id: p.text for p in corpus.paragraphs},
        k=args.k,
    )
    cells = sorted(report.cells.items())
    if args.split is not None:
        cells = [c for c in cells if c[0][0] == args.split]
        if not cells:
            raise UsageError(f"no evaluated cells for split {args.split!r}")
    for (split, language), (recall, count) in cells:
        print(f"{split}\t{language}\trecall@{report.k}={recall:.6f}\tn={count}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2)
            fh.write("\n")
    return 0


def cmd_synth(args) -> int:
    corpus = generate_synthetic(
        seed=args.seed,
        n_requirements=args.requirements,
        paragraphs_per_requirement=args.paragraphs_per_requirement,
        vocab_themes=args.themes,
        distractor_fraction=args.distractor_fraction,
    )
    save_corpus(corpus, args.out)
    print(
        f"synthetic corpus: {len(corpus.paragraphs)} paragraphs, "
        f"{len(corpus.requirements)} requirements, "
        f"{len(corpus.annotations)} annotations -> {args.out}"
    )
    return 0


def cmd_stats(args) -> int:
    corpus = load_corpus_bundle(args.corpus)
    splits = load_splits(args.splits) if args.splits else None
    print(render_stats_table(corpus_stats(corpus, splits)))
    return 0


def cmd_serve(args) -> int:
    overrides = {
        "host": args.host,
        "port": args.port,
        "checkpoint_dir": args.checkpoint,
        "index_dir": args.index,
        "corpus_dir": args.corpus,
        "store_path": args.store,
        "default_k": args.default_k,
    }
    config = load_service_config(path=args.config, overrides=overrides)
    state = load_state(config)
    app = create_app(state)
    import uvicorn

    print(f"serving on http://{config.host}:{config.port}")
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reqmatch",
        description="Match report paragraphs to checklist requirements.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("vocab", help="learn a subword vocabulary from a corpus")
    p.add_argument("--corpus", required=True, help="corpus directory")
    p.add_argument("--out", required=True, help="vocabulary file to write")
    p.add_argument("--size", type=int, default=2000, help="target vocabulary size")
    p.add_argument("--min-frequency", type=int, default=2)
    p.set_defaults(func=cmd_vocab)

    p = sub.add_parser("train", help="run a staged training plan")
    p.add_argument("--corpus", required=True, help="corpus directory")
    p.add_argument("--vocab", required=True, help="vocabulary file")
    p.add_argument("--plan", required=True, help="JSON list of stage configs")
    p.add_argument("--out", required=True, help="checkpoint directory to write")
    p.add_argument("--unseen", default="", help="comma-separated requirement ids held out")
    p.add_argument("--fractions", default="0.7,0.15,0.15", help="train,val,test fractions")
    p.add_argument("--split-seed", type=int, default=0)
    p.add_argument("--init-seed", type=int, default=0)
    p.add_argument("--hidden-dim", type=int, default=64)
    p.add_argument("--num-layers", type=int, default=2)
    p.add_argument("--num-heads", type=int, default=4)
    p.add_argument("--ff-dim", type=int, default=256)
    p.add_argument("--max-len", type=int, default=128)
    p.add_argument("--dropout", type=float, default=0.1)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("index", help="embed a corpus into a searchable index")
    p.add_argument("--checkpoint", required=True, help="checkpoint directory")
    p.add_argument("--corpus", required=True, help="corpus directory")
    p.add_argument("--out", required=True, help="index directory to write")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("match", help="rank index entries against a query text")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--index", required=True)
    p.add_argument("--text", required=True, help="query text")
    p.add_argument(
        "--direction",
        default="requirements",
        help="requirements (text is a paragraph) or paragraphs (text is a requirement)",
    )
    p.add_argument("--k", type=int, default=5)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("evaluate", help="recall@k over held-out splits")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--splits", required=True, help="splits JSON file")
    p.add_argument("--split", default=None, help="restrict to one split name")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--out", default=None, help="optional JSON report file")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("synth", help="generate a synthetic labeled corpus")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--requirements", type=int, required=True)
    p.add_argument("--paragraphs-per-requirement", type=int, required=True)
    p.add_argument("--themes", type=int, default=8)
    p.add_argument("--distractor-fraction", type=float, default=0.2)
    p.add_argument("--out", required=True, help="corpus directory to write")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("stats", help="corpus statistics table")
    p.add_argument("--corpus", required=True)
    p.add_argument("--splits", default=None, help="optional splits JSON file")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("serve", help="run the HTTP matching service")
    p.add_argument("--config", default=None, help="JSON service config file")
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--checkpoint", default=None, help="checkpoint directory")
    p.add_argument("--index", default=None, help="index directory")
    p.add_argument("--corpus", default=None, help="corpus directory")
    p.add_argument("--store", default=None, help="annotation store JSONL path")
    p.add_argument("--default-k", type=int, default=None)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code else 0
    try:
        return args.func(args)
    except (ConfigError, DataError, ShapeError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
