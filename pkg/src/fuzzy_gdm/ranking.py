"""Final satisfaction degrees, their integration across DMs, and the crisp ranking."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .problem import DecisionMakerProfile, DecisionProblem
from .relations import CriteriaPartition, analyze_relations
from .tfn import TFN, rank_score, weighted_sum

DEFAULT_TIE_TOL = 0.005


@dataclass
class RankingResult:
    per_dm_final: dict[str, list[TFN]]
    dominant_subsets: dict[str, tuple[int, ...]]
    integrated: list[TFN]
    scores: list[float]
    order: list[int]
    ties: list[list[int]] = field(default_factory=list)


def select_dominant_subset(partition: CriteriaPartition, weights: Sequence[float]) -> tuple[int, ...]:
    """Subset with the largest total weight; the earliest subset wins ties."""
    best, best_w = None, -np.inf
    for subset in partition.subsets:
        total = float(sum(weights[c] for c in subset))
        if total > best_w:
            best, best_w = subset, total
    if best is None:
        raise ValueError("partition has no subsets")
    return best


def final_degree(dm: DecisionMakerProfile, subset: Sequence[int], weights: Sequence[float]) -> list[TFN]:
    """Weighted sum over ``subset`` of each alternative's satisfaction (weights not renormalised)."""
    if not subset:
        raise ValueError("subset must be nonempty")
    sm = dm.satisfaction
    m = sm.shape[0]
    return [weighted_sum((float(weights[c]), sm.entry(a, c)) for c in subset) for a in range(m)]


def integrate_final_degrees(per_dm: Sequence[Sequence[TFN]], dm_weights: Sequence[float]) -> list[TFN]:
    if len(per_dm) != len(dm_weights):
        raise ValueError("need one weight per decision maker")
    m = len(per_dm[0])
    return [weighted_sum((float(wd), row[a]) for wd, row in zip(dm_weights, per_dm)) for a in range(m)]


def rank_alternatives(integrated: Sequence[TFN], tie_tol: float = DEFAULT_TIE_TOL
                      ) -> tuple[list[float], list[int], list[list[int]]]:
    """Scores, best-first order, and groups of neighbours closer than ``tie_tol``.

    The order is strict (stable on exact equality); tie groups are informational.
    """
    scores = [rank_score(t) for t in integrated]
    order = sorted(range(len(scores)), key=lambda a: -scores[a])
    ties: list[list[int]] = []
    group = order[:1]
    for prev, cur in zip(order, order[1:]):
        if scores[prev] - scores[cur] < tie_tol:
            group.append(cur)
        else:
            if len(group) > 1:
                ties.append(group)
            group = [cur]
    if len(group) > 1:
        ties.append(group)
    return scores, order, ties


def rank_problem(p: DecisionProblem, weights: Sequence[float],
                 partitions: Mapping[str, CriteriaPartition] | None = None,
                 tie_tol: float = DEFAULT_TIE_TOL) -> RankingResult:
    """Run the ranking stage for every DM using the consensus ``weights``."""
    if partitions is None:
        partitions = analyze_relations(p).partitions
    per_dm: dict[str, list[TFN]] = {}
    subsets: dict[str, tuple[int, ...]] = {}
    for dm in p.dms:
        subset = select_dominant_subset(partitions[dm.id], weights)
        subsets[dm.id] = subset
        per_dm[dm.id] = final_degree(dm, subset, weights)
    integrated = integrate_final_degrees([per_dm[dm.id] for dm in p.dms], [dm.weight for dm in p.dms])
    scores, order, ties = rank_alternatives(integrated, tie_tol)
    return RankingResult(per_dm, subsets, integrated, scores, order, ties)
