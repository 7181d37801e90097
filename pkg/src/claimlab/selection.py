"""Trainable sentence selection: negative sampling, regimes, ranking.

The relevance scorer is a logistic model over engineered lexical
features. It stands behind the same train/score surface a heavier
encoder would use, so the pipeline treats the scorer as pluggable.
Training draws 15 negatives per positive from a TF-IDF ranker in three
groups (same-document, other-document, fresh-document) and, each
epoch, keeps only the hardest negatives so positives and negatives
stay balanced.
"""

from __future__ import annotations

import enum
import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Union

from .claims import Claim, Label
from .corpus import Corpus, InvertedIndex, SentenceId, display_title, tfidf_rank
from .features import SELECTION_FEATURE_NAMES, FeatureExtractor, feature_schema_hash
from .util import stable_seed

# Reference learning rate for a transformer-backed scorer; the linear
# model default below is what this implementation actually trains with.
TRANSFORMER_REFERENCE_LR = 2.5e-6


class Regime(enum.Enum):
    BASELINE = "baseline"
    SUP_ONLY = "sup"
    REF_ONLY = "ref"
    DATA_AUGMENTED = "da"

    @classmethod
    def from_string(cls, raw: str) -> "Regime":
        for regime in cls:
            if raw.lower() in (regime.value, regime.name.lower()):
                return regime
        raise ValueError(f"unknown training regime {raw!r}")


@dataclass(frozen=True)
class TrainingConfig:
    """Defaults suit the linear scorer (2 epochs, lr 0.1). A
    transformer-backed scorer would instead fine-tune at
    TRANSFORMER_REFERENCE_LR."""

    epochs: int = 2
    learning_rate: float = 0.1
    seed: int = 0
    negatives_per_positive: int = 15

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.negatives_per_positive < 1:
            raise ValueError("negatives_per_positive must be >= 1")


def _sigmoid(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


@dataclass
class RelevanceModel:
    weights: list[float]
    bias: float
    metadata: dict = field(default_factory=dict)

    def score(self, features: Sequence[float]) -> float:
        """Relevance probability in (0, 1)."""
        z = self.bias + sum(w * x for w, x in zip(self.weights, features))
        return _sigmoid(z)

    def save(self, path: Union[str, Path]) -> None:
        payload = {
            "schema": "claimlab/relevance-model/v1",
            "feature_names": list(SELECTION_FEATURE_NAMES),
            "feature_schema_hash": feature_schema_hash(SELECTION_FEATURE_NAMES),
            "weights": self.weights,
            "bias": self.bias,
            "metadata": self.metadata,
        }
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, ensure_ascii=False, sort_keys=True, indent=2)
            handle.write("\n")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RelevanceModel":
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
        if payload.get("schema") != "claimlab/relevance-model/v1":
            raise ValueError(f"unsupported model schema in {path}")
        expected = feature_schema_hash(SELECTION_FEATURE_NAMES)
        if payload.get("feature_schema_hash") != expected:
            raise ValueError("model was trained with a different feature schema")
        return cls(weights=list(payload["weights"]), bias=payload["bias"], metadata=payload.get("metadata", {}))


def candidate_text(corpus: Corpus, sid: SentenceId) -> str:
    """"<title>. <sentence>": the page title is prepended to each candidate
    so pronoun-heavy evidence keeps its subject."""
    text = corpus.get_sentence(sid)
    if text is None:
        raise ValueError(f"unresolvable sentence id {tuple(sid)!r}")
    return f"{display_title(sid.page_id)}. {text}"


def sample_negatives(
    claim: Claim,
    corpus: Corpus,
    index: InvertedIndex,
    positives: set[SentenceId],
    rng_seed: int,
    negatives_per_positive: int = 15,
) -> list[SentenceId]:
    """Up to 15 TF-IDF-ranked negatives per positive, in three groups.

    Per positive: group A is the top third from documents containing a
    positive sentence; group B the top third from documents containing
    none; group C one top-ranked sentence from each of several fresh
    documents (seeded choice among eligible documents) that are neither
    positive-bearing nor previously sampled for this claim. Groups may
    run short when the corpus cannot supply them; no positive is ever
    returned and no sentence repeats. Output order is A, B, C per
    positive, so callers can recover the partition.
    """
    if index.granularity != "sentence":
        raise ValueError("negative sampling needs a sentence-granularity index")
    if not positives:
        raise ValueError(f"claim {claim.claim_id} has no positive sentences")
    per_group = max(1, negatives_per_positive // 3)
    ranked = tfidf_rank(index, claim.text, k=index.doc_count)
    ranked_ids = [sid for sid, _ in ranked]

    positive_pages = {sid.page_id for sid in positives}
    used_sentences: set[SentenceId] = set(positives)
    used_documents: set[str] = set(positive_pages)
    rng = random.Random(rng_seed)
    out: list[SentenceId] = []

    for _ in sorted(positives):
        group_a = [
            sid
            for sid in ranked_ids
            if sid.page_id in positive_pages and sid not in used_sentences
        ][:per_group]
        used_sentences.update(group_a)

        group_b = [
            sid
            for sid in ranked_ids
            if sid.page_id not in positive_pages and sid not in used_sentences
        ][:per_group]
        used_sentences.update(group_b)
        used_documents.update(sid.page_id for sid in group_b)

        # Eligible fresh documents, keyed to each one's best-ranked sentence.
        fresh: dict[str, SentenceId] = {}
        for sid in ranked_ids:
            if sid.page_id in used_documents or sid in used_sentences:
                continue
            fresh.setdefault(sid.page_id, sid)
        pages = sorted(fresh)
        chosen = rng.sample(pages, k=min(per_group, len(pages)))
        group_c = [fresh[page] for page in sorted(chosen)]
        used_sentences.update(group_c)
        used_documents.update(chosen)

        out.extend(group_a + group_b + group_c)
    return out


def _regime_claims(
    claims: Sequence[Claim], synthetic_claims: Sequence[Claim], regime: Regime
) -> list[Claim]:
    supported = [c for c in claims if c.label is Label.SUPPORTED]
    refuted = [c for c in claims if c.label is Label.REFUTED]
    if regime is Regime.BASELINE:
        return [c for c in claims if c.label in (Label.SUPPORTED, Label.REFUTED)]
    if regime is Regime.SUP_ONLY:
        return supported
    if regime is Regime.REF_ONLY:
        return refuted
    if regime is Regime.DATA_AUGMENTED:
        base = [c for c in claims if c.label in (Label.SUPPORTED, Label.REFUTED)]
        return base + list(synthetic_claims)
    raise ValueError(f"unhandled regime {regime!r}")


def _example_features(
    extractor: FeatureExtractor, corpus: Corpus, claim: Claim, sid: SentenceId
) -> list[float]:
    doc = corpus.documents[sid.page_id]
    position_of = {idx: i for i, (idx, _) in enumerate(doc.sentences)}
    denom = max(1, len(doc.sentences) - 1)
    position = position_of[sid.line_index] / denom
    text = corpus.get_sentence(sid) or ""
    return extractor.selection_features(claim.text, display_title(sid.page_id), text, position)


def _mean_logistic_loss(model: RelevanceModel, batch: list[tuple[list[float], int]]) -> float:
    eps = 1e-12
    total = 0.0
    for features, target in batch:
        p = min(max(model.score(features), eps), 1 - eps)
        total += -(target * math.log(p) + (1 - target) * math.log(1 - p))
    return total / len(batch)


def train_selector(
    claims: Sequence[Claim],
    synthetic_claims: Sequence[Claim],
    corpus: Corpus,
    index: InvertedIndex,
    extractor: FeatureExtractor,
    regime: Regime,
    config: TrainingConfig = TrainingConfig(),
) -> RelevanceModel:
    """Train the relevance scorer under one data regime.

    Each epoch re-scores the whole negative pool, keeps the hardest
    negatives so positive and negative counts match, and runs one full
    pass of per-example gradient descent on the logistic loss in a
    seeded shuffled order.
    """
    training_claims = _regime_claims(claims, synthetic_claims, regime)
    if not training_claims:
        raise ValueError(f"no training claims for regime {regime.value!r}")

    positives: list[tuple[tuple, list[float]]] = []
    negatives: list[tuple[tuple, list[float]]] = []
    for claim in training_claims:
        gold = sorted(sid for sid in claim.gold_sentences() if corpus.get_sentence(sid) is not None)
        if not gold:
            continue
        for sid in gold:
            positives.append(((claim.claim_id, sid), _example_features(extractor, corpus, claim, sid)))
        sampled = sample_negatives(
            claim,
            corpus,
            index,
            set(gold),
            rng_seed=stable_seed(config.seed, "negatives", claim.claim_id),
            negatives_per_positive=config.negatives_per_positive,
        )
        for sid in sampled:
            negatives.append(((claim.claim_id, sid), _example_features(extractor, corpus, claim, sid)))
    if not positives:
        raise ValueError(f"regime {regime.value!r} selected no trainable positives")

    # Warm start from the TF-IDF ranker: before any update the scorer
    # orders candidates by cosine, so the first epoch's hardest
    # negatives are the lexically closest ones rather than ties.
    weights = [0.0] * len(SELECTION_FEATURE_NAMES)
    weights[SELECTION_FEATURE_NAMES.index("tfidf_cosine")] = 1.0
    model = RelevanceModel(weights=weights, bias=0.0)
    lr = config.learning_rate
    for epoch in range(config.epochs):
        keep = min(len(positives), len(negatives))
        hardest = sorted(negatives, key=lambda item: (-model.score(item[1]), item[0]))[:keep]
        batch = [(features, 1) for _, features in positives]
        batch += [(features, 0) for _, features in hardest]
        random.Random(stable_seed(config.seed, "shuffle", epoch)).shuffle(batch)
        for features, target in batch:
            predicted = model.score(features)
            gradient = predicted - target
            for i, x in enumerate(features):
                model.weights[i] -= lr * gradient * x
            model.bias -= lr * gradient
    model.metadata = {
        "regime": regime.value,
        "seed": config.seed,
        "epochs": config.epochs,
        "learning_rate": config.learning_rate,
        "negatives_per_positive": config.negatives_per_positive,
        "n_claims": len(training_claims),
        "n_positives": len(positives),
        "n_negatives": len(negatives),
    }
    return model


RankedEvidence = list[tuple[SentenceId, float]]


def select_sentences(
    model: RelevanceModel,
    extractor: FeatureExtractor,
    claim: Claim,
    candidate_pages: Sequence[str],
    corpus: Corpus,
    k: int,
) -> RankedEvidence:
    """Score every non-empty sentence of the candidate pages; top-k.

    Duplicate pages are scored once; ties break by sentence id.
    """
    scored: RankedEvidence = []
    seen_pages = set()
    for page_id in candidate_pages:
        if page_id in seen_pages:
            continue
        seen_pages.add(page_id)
        doc = corpus.documents.get(page_id)
        if doc is None:
            continue
        denom = max(1, len(doc.sentences) - 1)
        title = display_title(page_id)
        for position, (line_index, text) in enumerate(doc.sentences):
            if not text:
                continue
            features = extractor.selection_features(claim.text, title, text, position / denom)
            scored.append((SentenceId(page_id, line_index), model.score(features)))
    scored.sort(key=lambda item: (-item[1], item[0]))
    return scored[:k]


def aggregate_sr(sup: RankedEvidence, ref: RankedEvidence, k: int) -> RankedEvidence:
    """Merge two ranked lists by confidence; shared ids keep their max score."""
    best: dict[SentenceId, float] = {}
    for sid, score in list(sup) + list(ref):
        if sid not in best or score > best[sid]:
            best[sid] = score
    merged = sorted(best.items(), key=lambda item: (-item[1], item[0]))
    return merged[:k]
