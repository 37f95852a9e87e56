"""Command-line interface: prepare, index, recommend, evaluate, sweep, serve.

Exit codes: 0 on success, 1 on usage errors, 2 on data or artifact errors.
The artifacts directory can also come from the ``MJOBS_ARTIFACTS``
environment variable.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .artifacts import (
    load_artifacts,
    load_embedder_config,
    save_artifacts,
    read_corpus,
    write_corpus,
)
from .dense import (
    HashEmbedder,
    HttpEmbeddingProvider,
    ProviderEmbedder,
    build_dense_index,
    restore_embedder,
)
from .errors import MetajobsError
from .evaluation import (
    EvalConfig,
    comparison_as_dict,
    compare_rerank,
    format_comparison_table,
    format_report_table,
    report_as_dict,
    run_protocol,
    sweep,
    sweep_rows_as_csv,
)
from .ingest import ingest_corpus
from .lexical import build_sparse_index
from .ranker import RankerConfig, TokenOverlapScorer, recommend

ARTIFACTS_ENV = "MJOBS_ARTIFACTS"
DEFAULT_HASH_DIM = 256

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; this project reserves 2 for data errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _add_artifacts_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--artifacts",
        default=os.environ.get(ARTIFACTS_ENV),
        help=f"artifact directory (default: ${ARTIFACTS_ENV})",
    )


def _require_artifacts(args) -> str:
    if not args.artifacts:
        sys.stderr.write(
            f"an artifact directory is required (--artifacts or ${ARTIFACTS_ENV})\n"
        )
        raise SystemExit(1)
    return args.artifacts


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="metajobs", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_prepare = sub.add_parser("prepare", help="clean a raw export into corpus.jsonl")
    p_prepare.add_argument("--input", required=True, help="raw CSV export")
    p_prepare.add_argument("--out", required=True, help="directory for corpus.jsonl")

    p_index = sub.add_parser("index", help="build sparse and dense indexes")
    p_index.add_argument("--corpus", required=True, help="directory holding corpus.jsonl")
    p_index.add_argument("--embedder", choices=("hash", "provider"), default="hash")
    p_index.add_argument("--dim", type=int, default=None, help="hash embedder dimension")
    p_index.add_argument("--provider-url", default=None, help="embedding provider endpoint")
    p_index.add_argument("--synonyms", default=None, help="JSON file of token synonyms")

    p_rec = sub.add_parser("recommend", help="rank postings for a query")
    _add_artifacts_arg(p_rec)
    p_rec.add_argument("--query", required=True)
    p_rec.add_argument("--top-k", type=int, default=None)
    p_rec.add_argument("--rerank", action="store_true")
    p_rec.add_argument("--json", action="store_true", help="emit full JSON instead of a table")
    p_rec.add_argument("--provider-url", default=None)

    p_eval = sub.add_parser("evaluate", help="run the seeded evaluation protocol")
    _add_artifacts_arg(p_eval)
    p_eval.add_argument("--seeds", type=int, default=500)
    p_eval.add_argument("--rng-seed", type=int, required=True)
    p_eval.add_argument("--k", type=int, default=10)
    p_eval.add_argument("--rerank", action="store_true", help="compare fusion-only vs reranked")
    p_eval.add_argument("--bonus", action="store_true", help="enable the metadata bonus")
    p_eval.add_argument("--json-out", default=None, help="write the full report as JSON")
    p_eval.add_argument("--provider-url", default=None)

    p_sweep = sub.add_parser("sweep", help="grid over candidate sizes and fusion weights")
    _add_artifacts_arg(p_sweep)
    p_sweep.add_argument("--grid", choices=("default",), default="default")
    p_sweep.add_argument("--seeds", type=int, default=500)
    p_sweep.add_argument("--rng-seed", type=int, required=True)
    p_sweep.add_argument("--out", default=None, help="write CSV here instead of stdout")
    p_sweep.add_argument("--provider-url", default=None)

    p_serve = sub.add_parser("serve", help="serve the HTTP API")
    _add_artifacts_arg(p_serve)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--ui-dir", default=os.environ.get("MJOBS_UI_DIR"))
    p_serve.add_argument("--provider-url", default=None)

    return parser


def _cmd_prepare(args) -> int:
    corpus, report = ingest_corpus(args.input)
    write_corpus(args.out, corpus)
    with open(os.path.join(args.out, "ingest_report.json"), "w", encoding="utf-8") as fh:
        json.dump(report.__dict__, fh, indent=2)
        fh.write("\n")
    print(f"raw rows:     {report.raw_count}")
    print(f"kept:         {report.cleaned_count}")
    print(f"removed:      {report.removed_count}")
    for reason, count in sorted(report.removal_reasons.items()):
        print(f"  {reason}: {count}")
    print(f"wrote {os.path.join(args.out, 'corpus.jsonl')}")
    return 0


def _cmd_index(args) -> int:
    corpus = read_corpus(args.corpus)
    if args.embedder == "hash":
        synonyms = None
        if args.synonyms:
            with open(args.synonyms, encoding="utf-8") as fh:
                synonyms = json.load(fh)
        embedder = HashEmbedder(args.dim or DEFAULT_HASH_DIM, synonyms)
    else:
        if not args.provider_url:
            sys.stderr.write("--provider-url is required with --embedder provider\n")
            return 1
        embedder = ProviderEmbedder(HttpEmbeddingProvider(args.provider_url))
        if args.dim is not None and args.dim != embedder.dimension:
            sys.stderr.write(
                f"provider declares dimension {embedder.dimension}, --dim says {args.dim}\n"
            )
            return 1
    sparse = build_sparse_index(corpus.composites)
    dense = build_dense_index(corpus.composites, embedder)
    manifest = save_artifacts(args.corpus, corpus, sparse, dense, embedder.config())
    print(f"indexed {manifest.record_count} postings")
    print(f"embedder: {manifest.embedder_name} (dimension {manifest.embedding_dimension})")
    print(f"vocabulary: {len(sparse.vocabulary)} terms")
    return 0


def _load_for_query(args):
    directory = _require_artifacts(args)
    corpus, sparse, dense, _ = load_artifacts(directory)
    embedder = restore_embedder(
        load_embedder_config(directory), getattr(args, "provider_url", None)
    )
    return corpus, sparse, dense, embedder


def _cmd_recommend(args) -> int:
    corpus, sparse, dense, embedder = _load_for_query(args)
    cfg = RankerConfig()
    changes = {}
    if args.top_k is not None:
        changes["top_k"] = args.top_k
    if args.rerank:
        changes["rerank_enabled"] = True
    if changes:
        from dataclasses import replace

        cfg = replace(cfg, **changes)
    recs = recommend(
        args.query,
        corpus,
        sparse,
        dense,
        embedder,
        TokenOverlapScorer() if cfg.rerank_enabled else None,
        cfg,
    )
    if args.json:
        payload = [
            {
                "rank": rec.rank,
                "posting_id": rec.posting_id,
                "title": rec.posting.title,
                "company": rec.posting.company,
                "location": rec.posting.location,
                "s_final": rec.breakdown.s_final,
                "matched_keywords": list(rec.explanation.matched_keywords),
                "ranking_evidence": rec.explanation.ranking_evidence,
            }
            for rec in recs
        ]
        print(json.dumps(payload, indent=2, ensure_ascii=False))
        return 0
    if not recs:
        print("no results")
        return 0
    rows = [("rank", "score", "title", "company", "location", "matched")]
    for rec in recs:
        rows.append(
            (
                str(rec.rank),
                f"{rec.breakdown.s_final:.4f}",
                rec.posting.title[:40],
                rec.posting.company[:24],
                rec.posting.location[:20],
                " ".join(rec.explanation.matched_keywords)[:40],
            )
        )
    widths = [max(len(row[col]) for row in rows) for col in range(len(rows[0]))]
    for row in rows:
        print("  ".join(cell.ljust(widths[col]) for col, cell in enumerate(row)).rstrip())
    return 0


def _cmd_evaluate(args) -> int:
    corpus, sparse, dense, embedder = _load_for_query(args)
    from dataclasses import replace

    ranker = RankerConfig()
    if args.bonus:
        ranker = replace(ranker, bonus_enabled=True)
    eval_cfg = EvalConfig(rng_seed=args.rng_seed, n_seeds=args.seeds, k=args.k, ranker=ranker)
    if args.rerank:
        comparison = compare_rerank(
            corpus, sparse, dense, embedder, TokenOverlapScorer(), eval_cfg
        )
        print(format_comparison_table(comparison))
        payload = comparison_as_dict(comparison)
    else:
        report = run_protocol(corpus, sparse, dense, embedder, eval_cfg)
        print(format_report_table(report))
        payload = report_as_dict(report)
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        print(f"wrote {args.json_out}")
    return 0


def _cmd_sweep(args) -> int:
    corpus, sparse, dense, embedder = _load_for_query(args)
    eval_cfg = EvalConfig(rng_seed=args.rng_seed, n_seeds=args.seeds)
    rows = sweep(corpus, sparse, dense, embedder, eval_cfg)
    csv_text = sweep_rows_as_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(csv_text)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app_from_dir

    directory = _require_artifacts(args)
    app = create_app_from_dir(directory, provider_url=args.provider_url, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


_COMMANDS = {
    "prepare": _cmd_prepare,
    "index": _cmd_index,
    "recommend": _cmd_recommend,
    "evaluate": _cmd_evaluate,
    "sweep": _cmd_sweep,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except MetajobsError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
