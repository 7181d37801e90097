"""Document retrieval: title-mention bonus plus TF-IDF cosine.

A local, deterministic stand-in for search-API document retrieval. A
page whose (suffix-stripped) title occurs as a contiguous token
subsequence of the claim gets a fixed bonus on top of its cosine
score; with the default weight a title match strictly dominates any
cosine score.
"""

from __future__ import annotations

from dataclasses import dataclass

from .claims import Claim
from .corpus import Corpus, InvertedIndex, display_title, tfidf_rank, tokenize
from .features import contains_subsequence


@dataclass(frozen=True)
class DocRetrievalConfig:
    k: int = 20
    title_match_weight: float = 2.0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.title_match_weight < 0:
            raise ValueError("title_match_weight must be non-negative")


class DocumentRetriever:
    """Ranks candidate pages for a claim over a document-granularity index."""

    def __init__(self, corpus: Corpus, index: InvertedIndex, config: DocRetrievalConfig = DocRetrievalConfig()):
        if index.granularity != "document":
            raise ValueError("document retrieval needs a document-granularity index")
        self.corpus = corpus
        self.index = index
        self.config = config
        self._title_tokens = {
            page_id: tokenize(display_title(page_id)) for page_id in corpus.documents
        }

    def scored_candidates(self, claim_text: str) -> list[tuple[str, float]]:
        """All candidate pages with combined scores, best first.

        Every page whose title matches gets the bonus, even when titles
        match overlapping claim spans; longest-match resolution belongs
        to entity linking, not retrieval.
        """
        claim_tokens = tokenize(claim_text)
        scores = dict(tfidf_rank(self.index, claim_text, k=self.index.doc_count))
        if claim_tokens:
            for page_id, title_tokens in self._title_tokens.items():
                if title_tokens and contains_subsequence(claim_tokens, title_tokens):
                    scores[page_id] = scores.get(page_id, 0.0) + self.config.title_match_weight
        ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
        return ranked

    def retrieve(self, claim_text: str) -> list[str]:
        """Top-k page ids for the claim; empty when nothing matches."""
        return [page_id for page_id, _ in self.scored_candidates(claim_text)[: self.config.k]]

    def retrieve_oracle(self, claim: Claim) -> list[str]:
        """Plain retrieval with the claim's gold pages appended.

        Gold pages already present keep their ranked position; the rest
        are appended after the retrieved pages, deduplicated.
        """
        pages = self.retrieve(claim.text)
        present = set(pages)
        for page_id in claim.gold_pages():
            if page_id not in present:
                pages.append(page_id)
                present.add(page_id)
        return pages
