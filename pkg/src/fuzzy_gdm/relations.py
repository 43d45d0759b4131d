"""Cooperative / conflicting relations between criteria and the greedy criteria partition."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from itertools import combinations

from .problem import DecisionProblem, SatisfactionMatrix
from .tfn import AREA_EPS, TFN, extended_subtract, signed_area

log = logging.getLogger(__name__)


class PairClass(enum.Enum):
    COOPERATIVE = "cooperative"
    CONFLICTIVE = "conflictive"
    IRRELEVANT = "irrelevant"


def pair_diff(sm: SatisfactionMatrix, i: int, j: int, k: int) -> TFN:
    """Difference of the satisfaction of alternatives ``i`` and ``j`` on criterion ``k``."""
    if i == j:
        raise ValueError("pair_diff needs two distinct alternatives")
    return extended_subtract(sm.entry(i, k), sm.entry(j, k))


def _sign(area: float) -> int:
    if abs(area) < AREA_EPS:
        return 0
    return 1 if area > 0 else -1


def classify_pair(sm: SatisfactionMatrix, i: int, j: int, k: int, l: int) -> PairClass:
    if k == l:
        raise ValueError("classify_pair needs two distinct criteria")
    s = _sign(signed_area(pair_diff(sm, i, j, k))) * _sign(signed_area(pair_diff(sm, i, j, l)))
    if s > 0:
        return PairClass.COOPERATIVE
    if s < 0:
        return PairClass.CONFLICTIVE
    return PairClass.IRRELEVANT


@dataclass(frozen=True)
class RelationDegrees:
    cp: float
    cf: float
    degenerate: bool = False

    @property
    def ir(self) -> float:
        return 0.0 if self.degenerate else 1.0 - self.cp - self.cf


def relation_degrees(sm: SatisfactionMatrix, k: int, l: int) -> RelationDegrees:
    """Cooperative and conflicting degree of criteria ``k`` and ``l``.

    Each unordered alternative pair is weighted by ``|mode diff on k| + |mode diff on l|``;
    the denominator runs over all pairs, irrelevant ones included. If every
    weight is zero the degrees are ``(0, 0)`` and the result is flagged.
    """
    if k == l:
        raise ValueError("relation_degrees needs two distinct criteria")
    m = sm.shape[0]
    cp = cf = ap = 0.0
    for i, j in combinations(range(m), 2):
        dk = pair_diff(sm, i, j, k)
        dl = pair_diff(sm, i, j, l)
        weight = abs(dk.mode) + abs(dl.mode)
        ap += weight
        cls = classify_pair(sm, i, j, k, l)
        if cls is PairClass.COOPERATIVE:
            cp += weight
        elif cls is PairClass.CONFLICTIVE:
            cf += weight
    if ap == 0.0:
        log.warning("criteria %d and %d: all alternative pairs have zero weight", k, l)
        return RelationDegrees(0.0, 0.0, degenerate=True)
    return RelationDegrees(cp / ap, cf / ap)


@dataclass
class RelationTable:
    n: int
    degrees: dict[tuple[int, int], RelationDegrees]

    def __getitem__(self, pair: tuple[int, int]) -> RelationDegrees:
        k, l = pair
        return self.degrees[(k, l) if k < l else (l, k)]

    def affinity(self, k: int, l: int) -> float:
        d = self[k, l]
        return d.cp - d.cf

    @property
    def degenerate_pairs(self) -> list[tuple[int, int]]:
        return [pair for pair, d in self.degrees.items() if d.degenerate]


def relation_table(sm: SatisfactionMatrix) -> RelationTable:
    n = sm.shape[1]
    return RelationTable(n, {(k, l): relation_degrees(sm, k, l) for k, l in combinations(range(n), 2)})


@dataclass(frozen=True)
class PartitionStep:
    criterion: int
    affinity: float
    subset: int
    opened: bool  # True when the criterion seeded a new subset


@dataclass
class CriteriaPartition:
    subsets: list[tuple[int, ...]]
    trace: list[PartitionStep] = field(default_factory=list)

    def subset_of(self, criterion: int) -> int:
        for q, s in enumerate(self.subsets):
            if criterion in s:
                return q
        raise KeyError(criterion)


def partition_from_table(table: RelationTable) -> CriteriaPartition:
    """Greedy partition: grow the current subset with the unassigned criterion of
    highest affinity while that affinity is positive, otherwise seed a new subset
    with it. Ties go to the lowest criterion index.
    """
    n = table.n
    if n == 0:
        return CriteriaPartition([])
    subsets = [[0]]
    trace = [PartitionStep(0, 0.0, 0, True)]
    remaining = list(range(1, n))
    while remaining:
        current = subsets[-1]
        best, best_p = None, -float("inf")
        for c in remaining:
            p = sum(table.affinity(i, c) for i in current)
            if p > best_p:
                best, best_p = c, p
        remaining.remove(best)
        if best_p > 0:
            current.append(best)
            trace.append(PartitionStep(best, best_p, len(subsets) - 1, False))
        else:
            subsets.append([best])
            trace.append(PartitionStep(best, best_p, len(subsets) - 1, True))
    return CriteriaPartition([tuple(s) for s in subsets], trace)


def partition_criteria(sm: SatisfactionMatrix) -> CriteriaPartition:
    return partition_from_table(relation_table(sm))


@dataclass
class RelationshipReport:
    tables: dict[str, RelationTable]
    partitions: dict[str, CriteriaPartition]


def analyze_relations(p: DecisionProblem) -> RelationshipReport:
    tables: dict[str, RelationTable] = {}
    partitions: dict[str, CriteriaPartition] = {}
    for dm in p.dms:
        table = relation_table(dm.satisfaction)
        tables[dm.id] = table
        partitions[dm.id] = partition_from_table(table)
    return RelationshipReport(tables, partitions)
