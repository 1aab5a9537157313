"""Command-line pipeline: fetch, filter, prep, sentiment, terms, topics,
report, serve.

Every stage output records the corpus and config hashes it was built
from, so `report` can refuse to merge outputs from different snapshots.
Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import ingest, sentiment as sent
from .filtering import FilterConfig, filter_corpus
from .ingest import CorpusError, CorpusStore, DecodeError, TransportError, load_corpus
from .report import (ConsistencyError, PipelineConfig, atomic_write,
                     build_report, corpus_hash, serialize_report)
from .server import serve as serve_forever
from .termstats import ngram_counts, tfidf_scores
from .textprep import CleanedDocument, preprocess
from .topics import ThemeSpec, ThemeValidationError, build_topic_model, merge_topics


def _filter_config(config: PipelineConfig) -> FilterConfig:
    return FilterConfig(
        consecutive_special_threshold=config.consecutive_special_threshold,
        min_tokens_for_ratio=config.min_tokens_for_ratio,
        word_unique_ratio=config.word_unique_ratio,
        char_unique_ratio=config.char_unique_ratio,
    )


def _stage_header(args, config: PipelineConfig) -> dict:
    return {"corpus_hash": corpus_hash(args.corpus),
            "config_hash": config.config_hash}


def _read_json(path: Path) -> dict:
    return json.loads(path.read_text(encoding="utf-8"))


def _parallel_map(function, items, threads: int):
    if threads <= 1:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(function, items))


def _load_kept_reviews(args, config: PipelineConfig):
    filter_stage = _read_json(Path(args.out) / "filter.json")
    loaded = load_corpus(args.corpus, language=config.language or None)
    kept_ids = set(filter_stage["kept_ids"])
    return [r for r in loaded.reviews if r.review_id in kept_ids], filter_stage


def cmd_fetch(args, config: PipelineConfig) -> int:
    if args.fixture_dir:
        transport = ingest.FixtureTransport(args.fixture_dir)
    elif args.base_url:
        transport = ingest.HttpTransport(args.base_url,
                                         min_delay=args.request_delay)
    else:
        print("error: fetch needs --fixture-dir or --base-url",
              file=sys.stderr)
        return 1
    store = CorpusStore(args.corpus)
    stats = ingest.sync_corpus(transport, args.app_id, store,
                               page_size=args.page_size,
                               language=config.language)
    print(f"fetched={stats.fetched} deduped={stats.deduped} "
          f"pages={stats.pages} corpus_count={store.count}")
    return 0


def cmd_filter(args, config: PipelineConfig) -> int:
    loaded = load_corpus(args.corpus, language=config.language or None)
    result = filter_corpus(loaded.reviews, _filter_config(config))
    timestamps = [r.created_at for r in loaded.reviews]
    stage = {
        **_stage_header(args, config),
        "stats": {**result.stats.as_dict(), "total": len(loaded.reviews)},
        "kept_ids": [r.review_id for r in result.kept],
        "corpus_time_range": ([min(timestamps), max(timestamps)]
                              if timestamps else None),
    }
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    atomic_write(out / "filter.json", serialize_report(stage))
    print(f"kept={len(result.kept)} stats={stage['stats']}")
    return 0


def cmd_prep(args, config: PipelineConfig) -> int:
    kept, _ = _load_kept_reviews(args, config)
    docs = _parallel_map(preprocess, kept, args.threads)
    out = Path(args.out)
    lines = "".join(doc.to_json_line() + "\n" for doc in docs)
    atomic_write(out / "cleaned.jsonl", lines)
    meta = {**_stage_header(args, config), "documents": len(docs),
            "empty_documents": sum(1 for d in docs if d.empty)}
    atomic_write(out / "prep.json", serialize_report(meta))
    print(f"cleaned={len(docs)}")
    return 0


def _make_classifier(spec: str, config: PipelineConfig):
    if spec == "builtin":
        return sent.LexiconClassifier(threshold=config.sentiment_threshold)
    if spec.startswith("external:"):
        endpoint = spec[len("external:"):]
        if endpoint.startswith("http://") or endpoint.startswith("https://"):
            return sent.HttpClassifier(endpoint)
        return sent.SubprocessClassifier(shlex.split(endpoint))
    raise ValueError(f"unknown classifier {spec!r} "
                     "(use builtin or external:<endpoint>)")


def cmd_sentiment(args, config: PipelineConfig) -> int:
    kept, _ = _load_kept_reviews(args, config)
    classifier = _make_classifier(args.classifier, config)
    if isinstance(classifier, sent.LexiconClassifier):
        records = _parallel_map(
            lambda r: classifier.classify(r.review_id, r.text),
            kept, args.threads)
    else:
        records = classifier.classify_batch(
            [(r.review_id, r.text) for r in kept])

    created = {r.review_id: r.created_at for r in kept}
    trend = sent.sentiment_series(
        [(rec.label, created[rec.review_id]) for rec in records],
        granularity=config.granularity) if records else []
    distribution = {label.label_name: 0 for label in sent.LABEL_ORDER}
    for rec in records:
        distribution[rec.label.label_name] += 1

    stage = {
        **_stage_header(args, config),
        "classifier_id": classifier.classifier_id,
        "records": [rec.as_dict() for rec in records],
        "label_distribution": distribution,
        "trend": [bucket.as_dict() for bucket in trend],
    }
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    atomic_write(out / "sentiment.json", serialize_report(stage))
    print(f"labeled={len(records)} distribution={distribution}")

    if args.evaluate:
        gold = sent.load_gold_labels(args.evaluate)
        evaluation = sent.evaluate(records, gold)
        print(f"accuracy: {evaluation.accuracy:.4f}")
        print(f"{'class':>10} {'precision':>10} {'recall':>10} {'f1':>10}")
        for label, metrics in evaluation.per_class.items():
            print(f"{label.label_name:>10} {metrics.precision:>10.4f} "
                  f"{metrics.recall:>10.4f} {metrics.f1:>10.4f}")
    return 0


def _load_subset_docs(args, config: PipelineConfig) -> list[CleanedDocument]:
    docs = []
    with (Path(args.out) / "cleaned.jsonl").open(encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                docs.append(CleanedDocument.from_dict(json.loads(line)))
    if config.subset == "all":
        return docs
    if config.subset != "negative":
        raise ValueError(f"unknown subset {config.subset!r}")
    sentiment_stage = _read_json(Path(args.out) / "sentiment.json")
    negative_ids = {rec["review_id"] for rec in sentiment_stage["records"]
                    if rec["label"] == "negative"}
    return [doc for doc in docs if doc.review_id in negative_ids]


def cmd_terms(args, config: PipelineConfig) -> int:
    docs = _load_subset_docs(args, config)
    stems = [list(doc.stems) for doc in docs]
    non_empty = [s for s in stems if s]
    tables = {}
    for name, n in (("unigrams", 1), ("bigrams", 2), ("trigrams", 3)):
        table = (ngram_counts(stems, n, config.ngram_top_k) if non_empty
                 else None)
        tables[name] = table.as_dict() if table else {"n": n, "entries": []}
    tables["tfidf"] = (tfidf_scores(stems, config.tfidf_top_k).as_dict()
                       if non_empty else {"entries": []})
    stage = {**_stage_header(args, config), "subset": config.subset,
             "document_count": len(docs), "tables": tables}
    atomic_write(Path(args.out) / "terms.json", serialize_report(stage))
    print(f"terms over {len(docs)} documents")
    return 0


def cmd_topics(args, config: PipelineConfig) -> int:
    docs = _load_subset_docs(args, config)
    min_cluster_size = args.min_cluster_size or config.min_cluster_size
    model = build_topic_model(
        docs,
        min_cluster_size=min_cluster_size,
        min_samples=config.min_samples,
        lsa_dim=config.lsa_dim,
        target_dim=config.target_dim,
        top_k=config.keyword_top_k,
    )
    if model.n_topics == 0:
        print("warning: no clusters found (corpus smaller than "
              "min_cluster_size or no density structure)", file=sys.stderr)
    stage = {**_stage_header(args, config), "subset": config.subset,
             "embedder_id": model.embedder_id,
             "params": {"min_cluster_size": min_cluster_size,
                        "min_samples": config.min_samples,
                        "lsa_dim": config.lsa_dim,
                        "target_dim": config.target_dim},
             "model": model.as_dict()}
    atomic_write(Path(args.out) / "topics.json", serialize_report(stage))
    print(f"topics={model.n_topics} over {len(docs)} documents")
    return 0


def cmd_report(args, config: PipelineConfig) -> int:
    out = Path(args.out)
    filter_stage = _read_json(out / "filter.json")
    if Path(args.corpus).exists():
        current = corpus_hash(args.corpus)
        if filter_stage["corpus_hash"] != current:
            raise ConsistencyError(
                f"stage outputs were built from corpus "
                f"{filter_stage['corpus_hash']} but {args.corpus} now hashes "
                f"to {current}; rerun the pipeline")
    sentiment_stage = _read_json(out / "sentiment.json")
    terms_stage = _read_json(out / "terms.json")
    topics_path = out / "topics.json"
    topics_stage = _read_json(topics_path) if topics_path.exists() else None

    themes = None
    if args.themes and Path(args.themes).exists():
        spec = ThemeSpec.from_dict(_read_json(Path(args.themes)))
        model = topics_stage["model"] if topics_stage else None
        if model is None:
            raise ThemeValidationError("themes given but no topics stage")
        themes = merge_topics(model["topic_sizes"], model["ctfidf_vectors"],
                              spec, noise_count=model["noise_count"]).as_dict()

    report = build_report(filter_stage, sentiment_stage, terms_stage,
                          config, topics_stage, themes)
    atomic_write(out / "report.json", serialize_report(report))
    print(f"report written to {out / 'report.json'}")
    return 0


def cmd_serve(args, config: PipelineConfig) -> int:
    serve_forever(args.report, args.themes, port=args.port,
                  static_dir=args.static_dir)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reviewmonitor",
        description="Review monitoring pipeline: sentiment trends, term "
                    "statistics, and density-clustered topics.")
    parser.add_argument("--corpus", default="corpus.jsonl",
                        help="corpus JSONL path (default corpus.jsonl)")
    parser.add_argument("--config", default=None,
                        help="pipeline config JSON path")
    parser.add_argument("--out", default="out",
                        help="stage output directory (default out/)")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for per-document stages")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fetch", help="sync reviews into the corpus")
    p.add_argument("--app-id", required=True)
    p.add_argument("--fixture-dir", help="directory of fixture pages")
    p.add_argument("--base-url", help="live endpoint URL template")
    p.add_argument("--page-size", type=int, default=100)
    p.add_argument("--request-delay", type=float, default=1.0)

    sub.add_parser("filter", help="spam filter and length bucketing")
    sub.add_parser("prep", help="tokenize, destop, stem")

    p = sub.add_parser("sentiment", help="classify and build the trend")
    p.add_argument("--classifier", default="builtin",
                   help="builtin or external:<endpoint>")
    p.add_argument("--evaluate", help="gold label JSONL to score against")

    sub.add_parser("terms", help="n-gram and TF-IDF tables")

    p = sub.add_parser("topics", help="density-cluster into topics")
    p.add_argument("--min-cluster-size", type=int, default=None)

    p = sub.add_parser("report", help="assemble the monitoring report")
    p.add_argument("--themes", default=None, help="theme spec JSON")

    p = sub.add_parser("serve", help="serve the report and workbench")
    p.add_argument("--report", default="out/report.json")
    p.add_argument("--themes", default="out/themes.json")
    p.add_argument("--port", type=int, default=8787)
    p.add_argument("--static-dir", default=None)

    return parser


_COMMANDS = {
    "fetch": cmd_fetch,
    "filter": cmd_filter,
    "prep": cmd_prep,
    "sentiment": cmd_sentiment,
    "terms": cmd_terms,
    "topics": cmd_topics,
    "report": cmd_report,
    "serve": cmd_serve,
}

_DATA_ERRORS = (CorpusError, ConsistencyError, DecodeError, TransportError,
                ThemeValidationError, sent.InputError, sent.ProtocolError,
                sent.PartialBatchError, FileNotFoundError, ValueError,
                KeyError, json.JSONDecodeError)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        config = PipelineConfig.load(args.config)
        return _COMMANDS[args.command](args, config)
    except _DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
