"""Three-way claim classification over (claim, evidence sentence) pairs.

Each of a claim's top evidence sentences is classified independently as
supported / refuted / not-enough-info; the claim verdict is the
majority vote, with ties broken by the fixed precedence
NotEnoughInfo, Supported, Refuted.
"""

from __future__ import annotations

import json
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence, Union

from .claims import Claim, Label
from .corpus import Corpus, SentenceId
from .features import PAIR_FEATURE_NAMES, FeatureExtractor, feature_schema_hash
from .selection import RankedEvidence, TrainingConfig, candidate_text
from .util import stable_seed

# Argmax ties resolve in this order; it is also the vote tie-break.
CLASS_ORDER = (Label.NOT_ENOUGH_INFO, Label.SUPPORTED, Label.REFUTED)

# NEI training pairs come from each NEI claim's own top retrieved sentences.
NEI_PAIRS_PER_CLAIM = 2


def extract_pair_features(
    extractor: FeatureExtractor, claim_text: str, evidence_candidate: str
) -> list[float]:
    return extractor.pair_features(claim_text, evidence_candidate)


@dataclass
class NliModel:
    weights: list[list[float]]  # one weight vector per class, CLASS_ORDER
    biases: list[float]
    metadata: dict = field(default_factory=dict)

    def probabilities(self, features: Sequence[float]) -> list[float]:
        logits = [
            b + sum(w * x for w, x in zip(ws, features))
            for ws, b in zip(self.weights, self.biases)
        ]
        peak = max(logits)
        exps = [math.exp(z - peak) for z in logits]
        total = sum(exps)
        return [e / total for e in exps]

    def save(self, path: Union[str, Path]) -> None:
        payload = {
            "schema": "claimlab/nli-model/v1",
            "classes": [label.value for label in CLASS_ORDER],
            "feature_names": list(PAIR_FEATURE_NAMES),
            "feature_schema_hash": feature_schema_hash(PAIR_FEATURE_NAMES),
            "weights": self.weights,
            "biases": self.biases,
            "metadata": self.metadata,
        }
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, ensure_ascii=False, sort_keys=True, indent=2)
            handle.write("\n")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "NliModel":
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
        if payload.get("schema") != "claimlab/nli-model/v1":
            raise ValueError(f"unsupported model schema in {path}")
        if payload.get("feature_schema_hash") != feature_schema_hash(PAIR_FEATURE_NAMES):
            raise ValueError("model was trained with a different feature schema")
        return cls(
            weights=[list(ws) for ws in payload["weights"]],
            biases=list(payload["biases"]),
            metadata=payload.get("metadata", {}),
        )


def classify_pair(
    model: NliModel, extractor: FeatureExtractor, claim_text: str, evidence_text: str
) -> tuple[Label, list[float]]:
    """Argmax class for one pair; exact ties resolve by CLASS_ORDER."""
    probs = model.probabilities(extract_pair_features(extractor, claim_text, evidence_text))
    best = 0
    for i in range(1, len(CLASS_ORDER)):
        if probs[i] > probs[best]:
            best = i
    return CLASS_ORDER[best], probs


def aggregate_verdict(labels: Sequence[Label]) -> Label:
    """Majority vote; ties go to the earliest label in CLASS_ORDER.

    An empty list means no evidence was retrieved, which is
    NotEnoughInfo by definition.
    """
    if not labels:
        return Label.NOT_ENOUGH_INFO
    counts = Counter(labels)
    top = max(counts.values())
    for label in CLASS_ORDER:
        if counts.get(label, 0) == top:
            return label
    raise AssertionError("unreachable")


def _training_pairs(
    claims: Sequence[Claim],
    selections: Mapping[int, RankedEvidence],
    corpus: Corpus,
    extractor: FeatureExtractor,
) -> list[tuple[list[float], int]]:
    pairs = []
    for claim in claims:
        if claim.label is Label.NOT_ENOUGH_INFO:
            retrieved = selections.get(claim.claim_id, [])[:NEI_PAIRS_PER_CLAIM]
            sids = [sid for sid, _ in retrieved]
        else:
            sids = sorted(claim.gold_sentences())
        target = CLASS_ORDER.index(claim.label)
        for sid in sids:
            if corpus.get_sentence(sid) is None:
                continue
            features = extract_pair_features(extractor, claim.text, candidate_text(corpus, sid))
            pairs.append((features, target))
    return pairs


def train_nli(
    claims: Sequence[Claim],
    selections: Mapping[int, RankedEvidence],
    corpus: Corpus,
    extractor: FeatureExtractor,
    config: TrainingConfig = TrainingConfig(),
) -> NliModel:
    """Seeded gradient descent on softmax cross-entropy over pair features.

    Supported/refuted claims pair with each gold evidence sentence;
    NEI claims pair with their own top retrieved sentences. All three
    classes must be present.
    """
    pairs = _training_pairs(claims, selections, corpus, extractor)
    present = {target for _, target in pairs}
    missing = [CLASS_ORDER[i].value for i in range(len(CLASS_ORDER)) if i not in present]
    if missing:
        raise ValueError(f"training data has no pairs for class(es): {', '.join(missing)}")

    n_features = len(PAIR_FEATURE_NAMES)
    model = NliModel(
        weights=[[0.0] * n_features for _ in CLASS_ORDER],
        biases=[0.0] * len(CLASS_ORDER),
    )
    lr = config.learning_rate
    for epoch in range(config.epochs):
        batch = list(pairs)
        random.Random(stable_seed(config.seed, "nli-shuffle", epoch)).shuffle(batch)
        for features, target in batch:
            probs = model.probabilities(features)
            for c in range(len(CLASS_ORDER)):
                gradient = probs[c] - (1.0 if c == target else 0.0)
                weights = model.weights[c]
                for i, x in enumerate(features):
                    weights[i] -= lr * gradient * x
                model.biases[c] -= lr * gradient
    model.metadata = {
        "seed": config.seed,
        "epochs": config.epochs,
        "learning_rate": config.learning_rate,
        "n_pairs": len(pairs),
    }
    return model


def verdict_for_claim(
    model: NliModel,
    extractor: FeatureExtractor,
    corpus: Corpus,
    claim: Claim,
    evidence: RankedEvidence,
) -> tuple[Label, list[SentenceId]]:
    """Classify each retrieved sentence separately, then majority-vote."""
    labels = []
    predicted = []
    for sid, _ in evidence:
        if corpus.get_sentence(sid) is None:
            continue
        label, _ = classify_pair(model, extractor, claim.text, candidate_text(corpus, sid))
        labels.append(label)
        predicted.append(sid)
    return aggregate_verdict(labels), predicted
