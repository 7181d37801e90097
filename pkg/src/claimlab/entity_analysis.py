"""Entity-distribution analysis over labeled claims.

Builds 2x2 contingency tables (rows = a claim condition, columns =
refuted/supported) for entity counts and pairwise direct relatedness,
and runs Pearson's chi-squared test with optional Yates continuity
correction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .claims import Claim, Label
from .kb import KnowledgeBase, link_entities

# chi^2(1) critical values; the statistic is reported instead of a p-value.
CHI2_CRITICAL_P01 = 6.635
CHI2_CRITICAL_P10 = 2.706


@dataclass(frozen=True)
class ContingencyTable2x2:
    """Rows = condition / not-condition, columns = refuted / supported."""

    cells: tuple[tuple[int, int], tuple[int, int]]

    def __post_init__(self):
        for row in self.cells:
            for value in row:
                if value < 0:
                    raise ValueError("contingency cells must be non-negative")

    @property
    def row_totals(self) -> tuple[int, int]:
        return (self.cells[0][0] + self.cells[0][1], self.cells[1][0] + self.cells[1][1])

    @property
    def col_totals(self) -> tuple[int, int]:
        return (self.cells[0][0] + self.cells[1][0], self.cells[0][1] + self.cells[1][1])

    @property
    def total(self) -> int:
        return sum(self.row_totals)


@dataclass(frozen=True)
class ChiSquaredResult:
    statistic: float
    degrees_of_freedom: int
    yates_corrected: bool


def chi_squared(table: ContingencyTable2x2, yates: bool = False) -> ChiSquaredResult:
    """Pearson's chi-squared on a 2x2 table.

    With Yates correction each |O - E| is reduced by 0.5, floored at
    zero. Expected counts come from the marginal products over the
    grand total; any zero marginal makes the table degenerate.
    """
    rows, cols = table.row_totals, table.col_totals
    if min(rows) == 0 or min(cols) == 0:
        raise ValueError("degenerate table: zero row or column marginal")
    total = table.total
    correction = 0.5 if yates else 0.0
    statistic = 0.0
    for i in range(2):
        for j in range(2):
            expected = rows[i] * cols[j] / total
            diff = max(abs(table.cells[i][j] - expected) - correction, 0.0)
            statistic += diff * diff / expected
    return ChiSquaredResult(statistic=statistic, degrees_of_freedom=1, yates_corrected=yates)


def directly_related(entity_a: str, entity_b: str, kb: KnowledgeBase) -> bool:
    """True when any relation edge joins the two entities, either direction."""
    record_a = kb.require(entity_a)
    record_b = kb.require(entity_b)
    return entity_b in record_a.relation_ids or entity_a in record_b.relation_ids


def _verifiable(claims: Sequence[Claim]) -> list[Claim]:
    return [c for c in claims if c.label in (Label.REFUTED, Label.SUPPORTED)]


def _column(label: Label) -> int:
    return 0 if label is Label.REFUTED else 1


def entity_count_table(claims: Sequence[Claim], kb: KnowledgeBase) -> ContingencyTable2x2:
    """Rows: <=1 linked entity vs >=2; columns: refuted vs supported."""
    cells = [[0, 0], [0, 0]]
    for claim in _verifiable(claims):
        row = 0 if len(link_entities(claim.text, kb)) <= 1 else 1
        cells[row][_column(claim.label)] += 1
    return ContingencyTable2x2(cells=(tuple(cells[0]), tuple(cells[1])))


def relatedness_table(claims: Sequence[Claim], kb: KnowledgeBase) -> ContingencyTable2x2:
    """Rows: directly related vs not; only claims with >=2 mentions count.

    A claim is directly related when ANY pair of its linked entities
    shares a relation edge.
    """
    cells = [[0, 0], [0, 0]]
    for claim in _verifiable(claims):
        mentions = link_entities(claim.text, kb)
        if len(mentions) < 2:
            continue
        entity_ids = sorted({m.entity_id for m in mentions})
        related = any(
            directly_related(a, b, kb) for a, b in itertools.combinations(entity_ids, 2)
        )
        cells[0 if related else 1][_column(claim.label)] += 1
    return ContingencyTable2x2(cells=(tuple(cells[0]), tuple(cells[1])))


def _chi_squared_entry(table: ContingencyTable2x2) -> dict:
    entry: dict = {}
    for key, yates in (("uncorrected", False), ("yates", True)):
        try:
            result = chi_squared(table, yates=yates)
            entry[key] = {
                "statistic": result.statistic,
                "significant_p_lt_0_01": result.statistic > CHI2_CRITICAL_P01,
                "not_significant_p_gt_0_1": result.statistic < CHI2_CRITICAL_P10,
            }
        except ValueError as exc:
            entry[key] = {"statistic": None, "error": str(exc)}
    return entry


def analyze_claims(claims: Sequence[Claim], kb: KnowledgeBase) -> dict:
    """Full analysis payload: both tables, both statistics, significance flags."""
    counts = entity_count_table(claims, kb)
    related = relatedness_table(claims, kb)
    return {
        "entity_count_table": {
            "rows": ["<=1 entity", ">=2 entities"],
            "columns": [Label.REFUTED.value, Label.SUPPORTED.value],
            "cells": [list(row) for row in counts.cells],
        },
        "relatedness_table": {
            "rows": ["directly related", "not directly related"],
            "columns": [Label.REFUTED.value, Label.SUPPORTED.value],
            "cells": [list(row) for row in related.cells],
        },
        "chi_squared": {
            "entity_count": _chi_squared_entry(counts),
            "relatedness": _chi_squared_entry(related),
        },
        "critical_values": {"p_0_01": CHI2_CRITICAL_P01, "p_0_1": CHI2_CRITICAL_P10},
    }
