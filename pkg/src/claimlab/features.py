"""Engineered lexical features for relevance scoring and claim classification.

A candidate string is the page title (disambiguation suffix stripped)
joined to the sentence text as "<title>. <sentence>", mirroring how
candidates are presented everywhere in the pipeline.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Mapping

from .corpus import InvertedIndex, token_spans, tokenize
from .util import sha256_hex

SELECTION_FEATURE_NAMES = (
    "unigram_overlap",
    "bigram_overlap",
    "tfidf_cosine",
    "idf_weighted_overlap",
    "entity_spans_in_title",
    "entity_spans_in_body",
    "log_body_length",
    "title_in_claim",
    "sentence_position",
    "claim_tokens_missing",
)

PAIR_FEATURE_NAMES = SELECTION_FEATURE_NAMES + (
    "negation_cue_mismatch",
    "numeral_mismatch",
    "evidence_tokens_missing",
)

# Cue words whose presence on one side but not the other often flips polarity.
_NEGATION_CUES = ("not", "only", "never", "no")


def feature_schema_hash(names: tuple[str, ...]) -> str:
    return sha256_hex("\n".join(names))


def split_candidate(candidate: str) -> tuple[str, str]:
    """Recover (title, body) from a "<title>. <body>" candidate string."""
    head, sep, tail = candidate.partition(". ")
    if not sep:
        return "", candidate
    return head, tail


def _bigrams(tokens: list[str]) -> set[tuple[str, str]]:
    return set(zip(tokens, tokens[1:]))


def _capitalized_spans(text: str) -> list[tuple[str, ...]]:
    """Maximal runs of >=2 consecutive capitalized tokens (entity proxy)."""
    spans = []
    run: list[str] = []
    last_index = None
    for i, (_, _, tok) in enumerate(token_spans(text)):
        if tok[0].isupper():
            if last_index is not None and i == last_index + 1:
                run.append(tok.lower())
            else:
                if len(run) >= 2:
                    spans.append(tuple(run))
                run = [tok.lower()]
            last_index = i
        else:
            if len(run) >= 2:
                spans.append(tuple(run))
            run = []
            last_index = None
    if len(run) >= 2:
        spans.append(tuple(run))
    return spans


def contains_subsequence(haystack: list[str], needle: list[str]) -> bool:
    if not needle or len(needle) > len(haystack):
        return False
    return any(haystack[i : i + len(needle)] == needle for i in range(len(haystack) - len(needle) + 1))


def _negation_cues(text: str, tokens: set[str]) -> set[str]:
    cues = {c for c in _NEGATION_CUES if c in tokens}
    if "n't" in text.lower():
        cues.add("n't")
    return cues


class FeatureExtractor:
    """Deterministic feature vectors backed by a corpus idf table."""

    def __init__(self, idf: Mapping[str, float], default_idf: float):
        self._idf = dict(idf)
        self._default_idf = default_idf

    @classmethod
    def from_index(cls, index: InvertedIndex) -> "FeatureExtractor":
        idf = {token: index.idf(token) for token in index.vocabulary}
        return cls(idf=idf, default_idf=index.idf("\x00never-a-token"))

    def idf(self, token: str) -> float:
        return self._idf.get(token, self._default_idf)

    def _cosine(self, left: list[str], right: list[str]) -> float:
        left_tf, right_tf = Counter(left), Counter(right)
        dot = 0.0
        for token, count in left_tf.items():
            if token in right_tf:
                dot += count * right_tf[token] * self.idf(token) ** 2
        if dot == 0.0:
            return 0.0
        left_norm = math.sqrt(sum((c * self.idf(t)) ** 2 for t, c in left_tf.items()))
        right_norm = math.sqrt(sum((c * self.idf(t)) ** 2 for t, c in right_tf.items()))
        return dot / (left_norm * right_norm)

    def selection_features(
        self, claim_text: str, title: str, body: str, position: float = 0.0
    ) -> list[float]:
        claim_tokens = tokenize(claim_text)
        claim_set = set(claim_tokens)
        title_tokens = tokenize(title)
        body_tokens = tokenize(body)
        candidate_tokens = title_tokens + body_tokens
        candidate_set = set(candidate_tokens)

        overlap = len(claim_set & candidate_set)
        unigram = overlap / max(1, len(claim_set))

        claim_bigrams = _bigrams(claim_tokens)
        bigram = len(claim_bigrams & _bigrams(candidate_tokens)) / max(1, len(claim_bigrams))

        cosine = self._cosine(claim_tokens, candidate_tokens)

        claim_idf_mass = sum(self.idf(t) for t in claim_set)
        idf_overlap = (
            sum(self.idf(t) for t in claim_set & candidate_set) / claim_idf_mass
            if claim_idf_mass > 0
            else 0.0
        )

        spans = _capitalized_spans(claim_text)
        title_set = set(title_tokens)
        body_set = set(body_tokens)
        spans_in_title = (
            sum(1 for s in spans if set(s) <= title_set) / len(spans) if spans else 0.0
        )
        spans_in_body = (
            sum(1 for s in spans if set(s) <= body_set) / len(spans) if spans else 0.0
        )

        log_body_len = math.log(1 + len(body_tokens))
        title_in_claim = 1.0 if contains_subsequence(claim_tokens, title_tokens) else 0.0
        missing = len(claim_set - candidate_set) / max(1, len(claim_set))

        return [
            unigram,
            bigram,
            cosine,
            idf_overlap,
            spans_in_title,
            spans_in_body,
            log_body_len,
            title_in_claim,
            float(position),
            missing,
        ]

    def selection_features_from_candidate(self, claim_text: str, candidate: str) -> list[float]:
        """Contract form for callers that only have the combined string."""
        title, body = split_candidate(candidate)
        return self.selection_features(claim_text, title, body, position=0.0)

    def pair_features(self, claim_text: str, candidate: str) -> list[float]:
        """Selection features plus polarity cues for claim classification."""
        base = self.selection_features_from_candidate(claim_text, candidate)

        claim_tokens = set(tokenize(claim_text))
        candidate_tokens = set(tokenize(candidate))
        claim_cues = _negation_cues(claim_text, claim_tokens)
        candidate_cues = _negation_cues(candidate, candidate_tokens)
        negation = 1.0 if claim_cues != candidate_cues else 0.0

        claim_numerals = {t for t in claim_tokens if t.isdigit()}
        candidate_numerals = {t for t in candidate_tokens if t.isdigit()}
        numeral = 1.0 if claim_numerals != candidate_numerals else 0.0

        extra = len(candidate_tokens - claim_tokens) / max(1, len(candidate_tokens))

        return base + [negation, numeral, extra]
