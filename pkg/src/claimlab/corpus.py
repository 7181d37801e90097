"""Corpus ingestion, sentence lookup, and TF-IDF inverted indexing.

The dump format is wiki-pages compatible JSON lines: each line is an
object with "id" (page title) and "lines" (newline-joined sentences,
tab-separated fields: sentence index, sentence text, ignored anchors).
"""

from __future__ import annotations

import json
import logging
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple, Optional, Union

logger = logging.getLogger(__name__)

# Unicode alphanumerics; underscores split (page ids use them as spaces).
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

_DISAMBIGUATION_RE = re.compile(r"\s*\([^()]*\)\s*$")


def tokenize(text: str) -> list[str]:
    """Lowercase and split on any non-alphanumeric character."""
    return _TOKEN_RE.findall(text.lower())


def token_spans(text: str) -> list[tuple[int, int, str]]:
    """Case-preserving tokens with (start, end) character offsets."""
    return [(m.start(), m.end(), m.group()) for m in _TOKEN_RE.finditer(text)]


def strip_disambiguation(title: str) -> str:
    """Drop a trailing parenthetical like "Blind Faith (miniseries)"."""
    return _DISAMBIGUATION_RE.sub("", title)


def display_title(page_id: str) -> str:
    """Human-readable page title: underscores to spaces, suffix stripped."""
    return strip_disambiguation(page_id.replace("_", " ")).strip()


class SentenceId(NamedTuple):
    page_id: str
    line_index: int


@dataclass(frozen=True)
class Document:
    """A titled page with index-addressed sentences.

    Empty-text sentences are retained (they exist in dumps) but are
    never offered as retrieval candidates.
    """

    page_id: str
    sentences: tuple[tuple[int, str], ...]

    def line_texts(self) -> dict[int, str]:
        return {idx: text for idx, text in self.sentences}


@dataclass
class Corpus:
    documents: dict[str, Document] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.documents)

    def add(self, doc: Document) -> None:
        if doc.page_id in self.documents:
            raise ValueError(f"duplicate page_id {doc.page_id!r}")
        self.documents[doc.page_id] = doc

    def get_sentence(self, sid: SentenceId) -> Optional[str]:
        """Sentence text for (page_id, line_index), or None if absent."""
        doc = self.documents.get(sid.page_id)
        if doc is None:
            return None
        return doc.line_texts().get(sid.line_index)

    def sentence_count(self) -> int:
        return sum(len(d.sentences) for d in self.documents.values())


def parse_dump_line(raw: str) -> Document:
    """Parse one dump JSON line into a Document.

    Malformed sentence entries (missing or non-integer index, or an
    index that does not increase) are skipped with a warning. Fields
    after the sentence text are anchor annotations and are discarded.
    """
    obj = json.loads(raw)
    page_id = obj["id"]
    if not page_id:
        raise ValueError("page with empty id")
    sentences: list[tuple[int, str]] = []
    last_index = -1
    for entry in obj.get("lines", "").split("\n"):
        if entry == "":
            continue
        fields = entry.split("\t")
        try:
            idx = int(fields[0])
        except ValueError:
            logger.warning("page %r: skipping malformed sentence line %r", page_id, entry[:80])
            continue
        if idx <= last_index:
            logger.warning("page %r: skipping non-increasing sentence index %d", page_id, idx)
            continue
        text = fields[1] if len(fields) > 1 else ""
        sentences.append((idx, text))
        last_index = idx
    return Document(page_id=page_id, sentences=tuple(sentences))


def document_to_dump_line(doc: Document) -> str:
    """Re-serialize a document; only anchor annotations are lost."""
    lines = "\n".join(f"{idx}\t{text}" for idx, text in doc.sentences)
    return json.dumps({"id": doc.page_id, "lines": lines}, ensure_ascii=False)


def ingest_corpus(path: Union[str, Path]) -> Corpus:
    """Load a corpus from a dump file or a directory of *.jsonl files.

    Raises on unreadable paths and on duplicate page ids; malformed
    sentence lines inside a page are skipped, not fatal.
    """
    path = Path(path)
    if path.is_dir():
        files = sorted(p for p in path.iterdir() if p.suffix in (".jsonl", ".json"))
        if not files:
            raise FileNotFoundError(f"no .jsonl dump files under {path}")
    else:
        files = [path]
    corpus = Corpus()
    for file in files:
        with open(file, "r", encoding="utf-8") as handle:
            for raw in handle:
                raw = raw.strip()
                if not raw:
                    continue
                corpus.add(parse_dump_line(raw))
    return corpus


@dataclass
class InvertedIndex:
    """Postings over documents or title-prefixed sentences.

    vocabulary maps token -> document frequency; postings maps token ->
    [(identifier, term frequency), ...] sorted by identifier. Norms are
    the TF-IDF vector lengths used by the cosine ranker.
    """

    granularity: str
    doc_count: int
    vocabulary: dict[str, int]
    postings: dict[str, list[tuple]]
    norms: dict

    def idf(self, token: str) -> float:
        df = self.vocabulary.get(token, 0)
        return math.log((self.doc_count + 1) / (df + 1)) + 1.0

    def to_jsonable(self) -> dict:
        """Canonical serialization; identical corpora serialize identically."""

        def ident(i):
            return list(i) if isinstance(i, tuple) else i

        return {
            "granularity": self.granularity,
            "doc_count": self.doc_count,
            "vocabulary": dict(sorted(self.vocabulary.items())),
            "postings": {
                tok: [[ident(i), tf] for i, tf in plist]
                for tok, plist in sorted(self.postings.items())
            },
            "norms": [[ident(i), n] for i, n in sorted(self.norms.items())],
        }


def _iter_units(corpus: Corpus, granularity: str) -> Iterable[tuple[object, list[str]]]:
    if granularity == "document":
        for page_id in sorted(corpus.documents):
            doc = corpus.documents[page_id]
            tokens: list[str] = []
            for _, text in doc.sentences:
                tokens.extend(tokenize(text))
            yield page_id, tokens
    elif granularity == "sentence":
        for page_id in sorted(corpus.documents):
            doc = corpus.documents[page_id]
            title_tokens = tokenize(display_title(page_id))
            for idx, text in doc.sentences:
                if not text:
                    continue
                yield SentenceId(page_id, idx), title_tokens + tokenize(text)
    else:
        raise ValueError(f"unknown granularity {granularity!r}")


def build_index(corpus: Corpus, granularity: str = "document") -> InvertedIndex:
    """Build a TF-IDF index; at sentence granularity the page title's
    tokens are prepended to each sentence's token stream."""
    if not corpus.documents:
        raise ValueError("cannot index an empty corpus")
    units = list(_iter_units(corpus, granularity))
    doc_count = len(units)
    vocabulary: dict[str, int] = {}
    postings: dict[str, list[tuple]] = {}
    counts = []
    for ident, tokens in units:
        tf = Counter(tokens)
        counts.append((ident, tf))
        for token in tf:
            vocabulary[token] = vocabulary.get(token, 0) + 1
    index = InvertedIndex(
        granularity=granularity,
        doc_count=doc_count,
        vocabulary=vocabulary,
        postings=postings,
        norms={},
    )
    for ident, tf in counts:
        norm_sq = 0.0
        for token, count in tf.items():
            postings.setdefault(token, []).append((ident, count))
            weight = count * index.idf(token)
            norm_sq += weight * weight
        index.norms[ident] = math.sqrt(norm_sq)
    for plist in postings.values():
        plist.sort(key=lambda item: item[0])
    return index


def tfidf_rank(index: InvertedIndex, query: str, k: int) -> list[tuple]:
    """Top-k units by TF-IDF cosine against the query.

    tf is the raw count and idf = ln((N+1)/(df+1)) + 1. Only units
    sharing at least one token with the query can score, so an
    out-of-vocabulary query yields an empty list. Ties break by
    identifier ascending.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    query_tf = Counter(tokenize(query))
    dots: dict = {}
    query_norm_sq = 0.0
    for token, qcount in query_tf.items():
        idf = index.idf(token)
        qweight = qcount * idf
        query_norm_sq += qweight * qweight
        for ident, tf in index.postings.get(token, ()):
            dots[ident] = dots.get(ident, 0.0) + qweight * tf * idf
    if not dots or query_norm_sq == 0.0:
        return []
    query_norm = math.sqrt(query_norm_sq)
    scored = []
    for ident, dot in dots.items():
        norm = index.norms.get(ident, 0.0)
        if norm == 0.0:
            continue
        scored.append((ident, dot / (query_norm * norm)))
    scored.sort(key=lambda item: (-item[1], item[0]))
    return scored[:k]
