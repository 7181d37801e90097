import json

from claimlab.claims import Label, load_claims
from claimlab.corpus import ingest_corpus
from claimlab.kb import KnowledgeBase, link_entities
from claimlab.worldgen import WorldConfig, build_world, write_world


def test_default_world_shape(tmp_path):
    config = WorldConfig()
    world = build_world(config)
    paths = write_world(world, tmp_path)
    corpus = ingest_corpus(paths["corpus"])
    assert len(corpus) == config.n_persons + config.n_shows + config.n_networks + config.n_towns
    train = load_claims(paths["train"])
    dev = load_claims(paths["dev"])
    assert len(train) == 100
    assert len(dev) == 126
    kb = KnowledgeBase.load(paths["kb"])
    assert len(kb.entities) == config.n_persons + config.n_shows + config.n_networks + 3


def test_world_is_deterministic():
    first = build_world(WorldConfig(seed=9))
    second = build_world(WorldConfig(seed=9))
    assert json.dumps(first.pages) == json.dumps(second.pages)
    assert first.train_rows == second.train_rows
    assert first.dev_rows == second.dev_rows


def test_gold_evidence_resolves_and_claims_link(tmp_path):
    paths = write_world(build_world(WorldConfig()), tmp_path)
    corpus = ingest_corpus(paths["corpus"])
    kb = KnowledgeBase.load(paths["kb"])
    for claim in load_claims(paths["train"]) + load_claims(paths["dev"]):
        for group in claim.evidence_groups():
            for sid in group:
                assert corpus.get_sentence(sid) is not None, claim
        if claim.label is not Label.NOT_ENOUGH_INFO and "sitcom" in claim.text:
            assert len(link_entities(claim.text, kb)) == 2


def test_dev_two_entity_supported_have_person_page_gold(tmp_path):
    paths = write_world(build_world(WorldConfig()), tmp_path)
    dev = load_claims(paths["dev"])
    for claim in dev:
        if claim.label is Label.SUPPORTED and "sitcom" in claim.text:
            gold_page = claim.evidence_groups()[0][0].page_id
            assert claim.text.startswith(gold_page)
