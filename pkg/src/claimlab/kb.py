"""Local knowledge base: alias-dictionary entity linking and sibling lookup.

The KB file is JSON lines, one entity per line:
{"id": ..., "name": ..., "aliases": [...], "parents": [...], "relations": [...]}

Linking is a deterministic longest-match scan over the claim's tokens,
case-sensitive on the original text and aligned to token boundaries. It
stands in for a neural linker and sits behind a small surface
(link_entities) so a stronger one can be swapped in.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Union

from .corpus import token_spans, tokenize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EntityRecord:
    entity_id: str
    canonical_name: str
    aliases: tuple[str, ...]
    parent_ids: tuple[str, ...]
    relation_ids: tuple[str, ...]


@dataclass(frozen=True)
class EntityMention:
    entity_id: str
    start: int
    end: int
    surface: str


class KnowledgeBase:
    def __init__(self, records: Iterable[EntityRecord]):
        self.entities: dict[str, EntityRecord] = {}
        for record in records:
            if record.entity_id in self.entities:
                raise ValueError(f"duplicate entity id {record.entity_id!r}")
            if not record.canonical_name:
                raise ValueError(f"entity {record.entity_id!r} has an empty name")
            self.entities[record.entity_id] = record

        # alias -> owning entity; collisions resolve to the lowest id.
        self._alias_owner: dict[str, str] = {}
        for eid in sorted(self.entities):
            for alias in self.entities[eid].aliases:
                if alias and alias not in self._alias_owner:
                    self._alias_owner[alias] = eid

        # first surface token -> aliases sorted longest first, for the scanner.
        self._alias_by_first_token: dict[str, list[tuple[str, int]]] = {}
        for alias in self._alias_owner:
            token_count = len(tokenize(alias))
            first = _first_token(alias)
            if token_count == 0 or first is None:
                continue
            self._alias_by_first_token.setdefault(first, []).append((alias, token_count))
        for entries in self._alias_by_first_token.values():
            entries.sort(key=lambda item: (-len(item[0]), item[0]))

        self._children_of: dict[str, set[str]] = {}
        for eid, record in self.entities.items():
            for parent in record.parent_ids:
                self._children_of.setdefault(parent, set()).add(eid)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "KnowledgeBase":
        records = []
        with open(path, "r", encoding="utf-8") as handle:
            for raw in handle:
                raw = raw.strip()
                if not raw:
                    continue
                obj = json.loads(raw)
                eid = str(obj["id"])
                name = obj["name"]
                aliases = list(obj.get("aliases", []))
                if name not in aliases:
                    aliases.insert(0, name)
                parents = tuple(p for p in obj.get("parents", []) if p != eid)
                relations = tuple(r for r in obj.get("relations", []) if r != eid)
                records.append(
                    EntityRecord(
                        entity_id=eid,
                        canonical_name=name,
                        aliases=tuple(aliases),
                        parent_ids=parents,
                        relation_ids=relations,
                    )
                )
        return cls(records)

    def require(self, entity_id: str) -> EntityRecord:
        record = self.entities.get(entity_id)
        if record is None:
            raise KeyError(f"unknown entity {entity_id!r}")
        return record

    def siblings(self, entity_id: str) -> set[str]:
        """Entities sharing at least one parent, the entity itself excluded."""
        record = self.require(entity_id)
        out: set[str] = set()
        for parent in record.parent_ids:
            out.update(self._children_of.get(parent, ()))
        out.discard(entity_id)
        return out

    def alias_owner(self, alias: str) -> str:
        return self._alias_owner[alias]

    def aliases_starting_with(self, token: str) -> list[tuple[str, int]]:
        return self._alias_by_first_token.get(token, [])


def _first_token(alias: str) -> str | None:
    spans = token_spans(alias)
    return spans[0][2] if spans else None


def link_entities(text: str, kb: KnowledgeBase) -> list[EntityMention]:
    """Longest-match alias scan, left to right, non-overlapping spans."""
    spans = token_spans(text)
    mentions: list[EntityMention] = []
    i = 0
    while i < len(spans):
        start_char = spans[i][0]
        best: tuple[str, int] | None = None
        for alias, token_count in kb.aliases_starting_with(spans[i][2]):
            j = i + token_count - 1
            if j >= len(spans):
                continue
            end_char = spans[j][1]
            if text[start_char:end_char] == alias:
                best = (alias, j)
                break  # entries are longest-first
        if best is None:
            i += 1
            continue
        alias, j = best
        end_char = spans[j][1]
        mentions.append(
            EntityMention(
                entity_id=kb.alias_owner(alias),
                start=start_char,
                end=end_char,
                surface=text[start_char:end_char],
            )
        )
        i = j + 1
    return mentions
