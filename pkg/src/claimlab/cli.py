"""Command-line interface for the fact verification pipeline.

Subcommands: ingest, index, retrieve-docs, generate-claims,
analyze-entities, train-selector, select, train-nli, verdict,
evaluate, and run (the full experiment). Exit code 0 on success,
nonzero with a stage-tagged message otherwise.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .claim_gen import generate_augmentation_set, load_synthetic_claims, save_synthetic
from .claims import Label, load_claims
from .corpus import build_index, ingest_corpus
from .entity_analysis import analyze_claims
from .evaluation import build_report, count_mistakes, document_recall_at_k
from .experiment import (
    ALL_REGIMES,
    ExperimentConfig,
    StageError,
    load_docs,
    load_selections,
    load_verdicts,
    run_experiment,
    write_docs,
    write_selections,
    write_verdicts,
)
from .features import FeatureExtractor
from .kb import KnowledgeBase
from .nli import NliModel, train_nli, verdict_for_claim
from .retrieval import DocRetrievalConfig, DocumentRetriever
from .selection import (
    Regime,
    RelevanceModel,
    TrainingConfig,
    aggregate_sr,
    select_sentences,
    train_selector,
)


def _write_json(path: str, payload) -> None:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, ensure_ascii=False, sort_keys=True, indent=2)
        handle.write("\n")


def cmd_ingest(args) -> int:
    corpus = ingest_corpus(args.corpus)
    stats = {"pages": len(corpus), "sentences": corpus.sentence_count()}
    if args.out:
        _write_json(args.out, stats)
    print(f"ingested {stats['pages']} pages, {stats['sentences']} sentences")
    return 0


def cmd_index(args) -> int:
    corpus = ingest_corpus(args.corpus)
    index = build_index(corpus, args.granularity)
    _write_json(args.out, index.to_jsonable())
    print(f"indexed {index.doc_count} units at {args.granularity} granularity -> {args.out}")
    return 0


def cmd_retrieve_docs(args) -> int:
    corpus = ingest_corpus(args.corpus)
    index = build_index(corpus, "document")
    retriever = DocumentRetriever(
        corpus, index, DocRetrievalConfig(k=args.k, title_match_weight=args.title_match_weight)
    )
    claims = load_claims(args.claims)
    docs = {
        claim.claim_id: (
            retriever.retrieve_oracle(claim) if args.oracle_docs else retriever.retrieve(claim.text)
        )
        for claim in claims
    }
    write_docs(Path(args.out), docs)
    print(f"retrieved documents for {len(docs)} claims -> {args.out}")
    return 0


def cmd_generate_claims(args) -> int:
    claims = load_claims(args.claims)
    kb = KnowledgeBase.load(args.kb)
    synthetic = generate_augmentation_set(claims, kb, seed=args.seed)
    save_synthetic(args.out, synthetic)
    supported = sum(1 for c in claims if c.label is Label.SUPPORTED)
    print(f"generated {len(synthetic)} false claims from {supported} supported claims -> {args.out}")
    return 0


def cmd_analyze_entities(args) -> int:
    claims = load_claims(args.claims)
    kb = KnowledgeBase.load(args.kb)
    _write_json(args.out, analyze_claims(claims, kb))
    print(f"entity analysis over {len(claims)} claims -> {args.out}")
    return 0


def _load_corpus_bundle(corpus_path: str):
    corpus = ingest_corpus(corpus_path)
    sentence_index = build_index(corpus, "sentence")
    return corpus, sentence_index, FeatureExtractor.from_index(sentence_index)


def cmd_train_selector(args) -> int:
    corpus, sentence_index, extractor = _load_corpus_bundle(args.corpus)
    claims = load_claims(args.claims)
    synthetic = load_synthetic_claims(args.synthetic) if args.synthetic else []
    regime = Regime.from_string(args.regime)
    if regime is Regime.DATA_AUGMENTED and not synthetic:
        print("error: train-selector: regime 'da' needs --synthetic", file=sys.stderr)
        return 1
    model = train_selector(
        claims,
        synthetic,
        corpus,
        sentence_index,
        extractor,
        regime,
        TrainingConfig(
            epochs=args.epochs,
            learning_rate=args.learning_rate,
            seed=args.seed,
            negatives_per_positive=args.negatives_per_positive,
        ),
    )
    model.save(args.out)
    print(f"trained {regime.value} selector on {model.metadata['n_claims']} claims -> {args.out}")
    return 0


def cmd_select(args) -> int:
    corpus, _, extractor = _load_corpus_bundle(args.corpus)
    claims = load_claims(args.claims)
    docs = load_docs(args.docs)
    model = RelevanceModel.load(args.model)
    second = RelevanceModel.load(args.model2) if args.model2 else None
    selections = {}
    for claim in claims:
        pages = docs.get(claim.claim_id, [])
        ranked = select_sentences(model, extractor, claim, pages, corpus, args.k)
        if second is not None:
            other = select_sentences(second, extractor, claim, pages, corpus, args.k)
            ranked = aggregate_sr(ranked, other, args.k)
        selections[claim.claim_id] = ranked
    write_selections(Path(args.out), selections)
    print(f"selected evidence for {len(selections)} claims -> {args.out}")
    return 0


def cmd_train_nli(args) -> int:
    corpus, _, extractor = _load_corpus_bundle(args.corpus)
    claims = load_claims(args.claims)
    selections = load_selections(args.selections) if args.selections else {}
    model = train_nli(
        claims,
        selections,
        corpus,
        extractor,
        TrainingConfig(epochs=args.epochs, learning_rate=args.learning_rate, seed=args.seed),
    )
    model.save(args.out)
    print(f"trained verdict classifier on {model.metadata['n_pairs']} pairs -> {args.out}")
    return 0


def cmd_verdict(args) -> int:
    corpus, _, extractor = _load_corpus_bundle(args.corpus)
    claims = load_claims(args.claims)
    selections = load_selections(args.selections)
    model = NliModel.load(args.model)
    verdicts = {
        claim.claim_id: verdict_for_claim(
            model, extractor, corpus, claim, selections.get(claim.claim_id, [])
        )
        for claim in claims
    }
    write_verdicts(Path(args.out), verdicts)
    print(f"verdicts for {len(verdicts)} claims -> {args.out}")
    return 0


def cmd_evaluate(args) -> int:
    claims = load_claims(args.claims)
    if not args.selections and not args.verdicts and not args.docs:
        print("error: evaluate: need --selections, --verdicts, or --docs", file=sys.stderr)
        return 1
    payload: dict = {"n_claims": len(claims)}
    if args.selections:
        selections = load_selections(args.selections)
        predictions = {cid: [sid for sid, _ in ranked] for cid, ranked in selections.items()}
        verdicts = load_verdicts(args.verdicts) if args.verdicts else None
        report = build_report(claims, predictions, verdicts, k=args.k)
        payload["sentence_level"] = report.to_jsonable()
    elif args.verdicts:
        verdicts = load_verdicts(args.verdicts)
        predictions = {cid: evidence for cid, (label, evidence) in verdicts.items()}
        report = build_report(claims, predictions, verdicts, k=args.k)
        payload["sentence_level"] = report.to_jsonable()
    if args.docs:
        docs = load_docs(args.docs)
        refuted, supported = count_mistakes(docs, claims, args.k_docs, level="document")
        payload["document_level"] = {
            "k": args.k_docs,
            "recall_at_k": document_recall_at_k(docs, claims, args.k_docs),
            "refuted_mistakes": refuted,
            "supported_mistakes": supported,
        }
    _write_json(args.out, payload)
    print(f"evaluation report -> {args.out}")
    return 0


def cmd_run(args) -> int:
    overrides = {
        "corpus": args.corpus,
        "train_claims": args.train_claims,
        "dev_claims": args.dev_claims,
        "kb": args.kb,
        "out_dir": args.out_dir,
        "seed": args.seed,
        "k_docs": args.k_docs,
        "k_sentences": args.k_sentences,
        "oracle_docs": args.oracle_docs,
    }
    if args.regimes:
        overrides["regimes"] = tuple(args.regimes.split(","))
    if args.config:
        config = ExperimentConfig.from_file(args.config, **overrides)
    else:
        missing = [k for k in ("corpus", "train_claims", "dev_claims", "kb", "out_dir") if overrides.get(k) is None]
        if missing:
            print(f"error: run: missing required options: {', '.join(missing)}", file=sys.stderr)
            return 1
        filled = {k: v for k, v in overrides.items() if v is not None}
        if "regimes" not in filled:
            filled["regimes"] = ALL_REGIMES
        config = ExperimentConfig(**filled)
    report = run_experiment(config)
    for row in report["rows"]:
        line = (
            f"{row['dataset']:<12} {row['regime']:<9} recall@{row['k']}={row['recall_at_k']:.3f} "
            f"refuted_mistakes={row['refuted_mistakes']} supported_mistakes={row['supported_mistakes']}"
        )
        if "fever_score" in row:
            line += f" fever={row['fever_score']:.3f} label_acc={row['label_accuracy']:.3f}"
        print(line)
    print(f"report bundle -> {config.out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="claimlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse and validate a corpus dump")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_ingest)

    p = sub.add_parser("index", help="build and serialize a TF-IDF index")
    p.add_argument("--corpus", required=True)
    p.add_argument("--granularity", choices=("document", "sentence"), default="document")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_index)

    p = sub.add_parser("retrieve-docs", help="top-k candidate pages per claim")
    p.add_argument("--corpus", required=True)
    p.add_argument("--claims", required=True)
    p.add_argument("--k", type=int, default=20)
    p.add_argument("--title-match-weight", type=float, default=2.0)
    p.add_argument("--oracle-docs", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_retrieve_docs)

    p = sub.add_parser("generate-claims", help="synthesize false claims from supported ones")
    p.add_argument("--claims", required=True)
    p.add_argument("--kb", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_generate_claims)

    p = sub.add_parser("analyze-entities", help="entity count/relatedness tables and chi-squared")
    p.add_argument("--claims", required=True)
    p.add_argument("--kb", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_analyze_entities)

    p = sub.add_parser("train-selector", help="train the sentence relevance model")
    p.add_argument("--regime", required=True, choices=[r.value for r in Regime])
    p.add_argument("--claims", required=True)
    p.add_argument("--synthetic")
    p.add_argument("--corpus", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epochs", type=int, default=2)
    p.add_argument("--learning-rate", type=float, default=0.1)
    p.add_argument("--negatives-per-positive", type=int, default=15)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_train_selector)

    p = sub.add_parser("select", help="rank evidence sentences for claims")
    p.add_argument("--model", required=True)
    p.add_argument("--model2", help="second model; results are aggregated by confidence")
    p.add_argument("--claims", required=True)
    p.add_argument("--docs", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_select)

    p = sub.add_parser("train-nli", help="train the three-way verdict classifier")
    p.add_argument("--claims", required=True)
    p.add_argument("--selections", help="ranked evidence for NEI training pairs")
    p.add_argument("--corpus", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epochs", type=int, default=2)
    p.add_argument("--learning-rate", type=float, default=0.1)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_train_nli)

    p = sub.add_parser("verdict", help="classify claims from their selected evidence")
    p.add_argument("--model", required=True)
    p.add_argument("--selections", required=True)
    p.add_argument("--claims", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_verdict)

    p = sub.add_parser("evaluate", help="recall@k, mistakes, overall score, label accuracy")
    p.add_argument("--claims", required=True)
    p.add_argument("--selections")
    p.add_argument("--verdicts")
    p.add_argument("--docs")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--k-docs", type=int, default=20)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_evaluate)

    p = sub.add_parser("run", help="full pipeline experiment")
    p.add_argument("--config", help="JSON config file; flags override its fields")
    p.add_argument("--corpus")
    p.add_argument("--train-claims")
    p.add_argument("--dev-claims")
    p.add_argument("--kb")
    p.add_argument("--seed", type=int)
    p.add_argument("--k-docs", type=int)
    p.add_argument("--k-sentences", type=int)
    p.add_argument("--regimes", help="comma-separated subset of baseline,sup,ref,sr,da")
    p.add_argument("--oracle-docs", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--out-dir")
    p.set_defaults(fn=cmd_run)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
