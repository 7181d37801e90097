"""Fact verification pipeline over a local wiki-style corpus.

Stages: corpus ingestion and TF-IDF indexing, document retrieval,
knowledge-base entity linking and adversarial claim generation,
entity-distribution analysis, trainable sentence selection, three-way
claim classification, and metric evaluation. Everything is seeded and
deterministic so experiments reproduce byte-for-byte.
"""

__version__ = "0.1.0"
