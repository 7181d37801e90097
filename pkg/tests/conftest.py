import json

import pytest

from claimlab.claims import Claim, Label
from claimlab.corpus import Corpus, Document
from claimlab.kb import EntityRecord, KnowledgeBase


def make_corpus(pages: dict[str, list[str]]) -> Corpus:
    corpus = Corpus()
    for page_id, texts in pages.items():
        corpus.add(Document(page_id=page_id, sentences=tuple(enumerate(texts))))
    return corpus


def make_claim(claim_id, label, text, evidence=()):
    """evidence: iterable of groups, each group an iterable of (page, line)."""
    raw = tuple(
        tuple((None, None, page, line) for page, line in group) for group in evidence
    )
    if label is Label.NOT_ENOUGH_INFO and not raw:
        raw = (((None, None, None, None),),)
    return Claim(claim_id=claim_id, label=label, text=text, evidence=raw)


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as handle:
        for row in rows:
            handle.write(json.dumps(row) + "\n")
    return path


@pytest.fixture
def tv_kb() -> KnowledgeBase:
    """Small KB mirroring the sitcom/actor/broadcaster world."""
    records = [
        EntityRecord("P01", "Johnny Galecki", ("Johnny Galecki",), ("ACTOR",), ("S01",)),
        EntityRecord("P02", "Stan Beeman", ("Stan Beeman",), ("ACTOR",), ("S03",)),
        EntityRecord(
            "S01",
            "The Big Bang Theory",
            ("The Big Bang Theory", "Big Bang"),
            ("SITCOM",),
            ("P01", "N01"),
        ),
        EntityRecord("S02", "Friends", ("Friends",), ("SITCOM",), ("N01",)),
        EntityRecord("S03", "The Americans", ("The Americans",), ("DRAMA",), ("P02",)),
        EntityRecord("N01", "CBS", ("CBS",), ("NETWORK",), ("S01", "S02")),
        EntityRecord("N02", "BBC", ("BBC",), ("NETWORK",), ()),
    ]
    return KnowledgeBase(records)
