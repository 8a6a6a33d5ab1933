"""Correspondence between the micro and macro clusterings.

The two pipelines partition the same users independently; shared-member
counts between cluster pairs measure how well the partitions agree, and
per-archetype share differences quantify the systematic bias between the
event-level and shape-level views.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MismatchedUniverseError
from .trajectory import Archetype


@dataclass
class OverlapMatrix:
    """Shared-member counts between micro clusters (rows) and macro clusters
    (columns)."""

    micro_ids: list
    macro_keys: list
    counts: np.ndarray

    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class OverlapEdge:
    micro_id: object
    macro_key: object
    count: int
    pattern: str  # one-to-one | one-to-many | many-to-one | many-to-many


def _check_universe(a_users, b_users, what: str):
    a, b = set(a_users), set(b_users)
    if a != b:
        only_a = len(a - b)
        only_b = len(b - a)
        raise MismatchedUniverseError(
            f"{what} cover different users ({only_a} only in first, {only_b} only in second)"
        )


def overlap(micro_members: dict, macro_members: dict) -> OverlapMatrix:
    """Exact shared-member counts between two clusterings of one user set.

    Both arguments map a cluster id to its member user ids. Row sums equal
    micro cluster sizes and column sums macro cluster sizes.
    """
    micro_users = [u for members in micro_members.values() for u in members]
    macro_users = [u for members in macro_members.values() for u in members]
    _check_universe(micro_users, macro_users, "clusterings")
    micro_ids = list(micro_members)
    macro_keys = list(macro_members)
    macro_sets = {key: set(macro_members[key]) for key in macro_keys}
    counts = np.zeros((len(micro_ids), len(macro_keys)), dtype=int)
    for i, mid in enumerate(micro_ids):
        members = set(micro_members[mid])
        for j, key in enumerate(macro_keys):
            counts[i, j] = len(members & macro_sets[key])
    return OverlapMatrix(micro_ids=micro_ids, macro_keys=macro_keys, counts=counts)


def significant_edges(m: OverlapMatrix, min_fraction: float = 0.25) -> list[OverlapEdge]:
    """Cluster pairs whose overlap is large relative to the smaller cluster.

    An edge (i, j) is significant when counts[i, j] >= min_fraction times
    the smaller of the two cluster sizes. Each edge is classified by how
    many significant partners each endpoint has.
    """
    row_sizes = m.counts.sum(axis=1)
    col_sizes = m.counts.sum(axis=0)
    significant = np.zeros_like(m.counts, dtype=bool)
    for i in range(m.counts.shape[0]):
        for j in range(m.counts.shape[1]):
            smaller = min(row_sizes[i], col_sizes[j])
            if m.counts[i, j] > 0 and m.counts[i, j] >= min_fraction * smaller:
                significant[i, j] = True
    row_degree = significant.sum(axis=1)
    col_degree = significant.sum(axis=0)
    edges = []
    for i, j in zip(*np.nonzero(significant)):
        if row_degree[i] == 1 and col_degree[j] == 1:
            pattern = "one-to-one"
        elif row_degree[i] > 1 and col_degree[j] == 1:
            pattern = "one-to-many"
        elif row_degree[i] == 1 and col_degree[j] > 1:
            pattern = "many-to-one"
        else:
            pattern = "many-to-many"
        edges.append(
            OverlapEdge(
                micro_id=m.micro_ids[i],
                macro_key=m.macro_keys[j],
                count=int(m.counts[i, j]),
                pattern=pattern,
            )
        )
    return edges


def restrict_to_top_macro(micro_members: dict, macro_members: dict, top: int = 12):
    """Keep only the ``top`` largest macro clusters and intersect the micro
    clustering with the surviving user set.

    Users outside the kept macro clusters drop from both sides so the two
    clusterings stay defined over one universe; emptied micro clusters drop.
    """
    kept_macro = dict(
        sorted(macro_members.items(), key=lambda kv: -len(kv[1]))[:top]
    )
    universe = {u for members in kept_macro.values() for u in members}
    kept_micro = {}
    for mid, members in micro_members.items():
        inside = [u for u in members if u in universe]
        if inside:
            kept_micro[mid] = inside
    return kept_micro, kept_macro


@dataclass
class ArchetypeComparison:
    """Per-archetype shares under both analyses and their signed difference."""

    micro_share: dict[Archetype, float]
    macro_share: dict[Archetype, float]

    @property
    def difference(self) -> dict[Archetype, float]:
        return {a: self.macro_share[a] - self.micro_share[a] for a in Archetype}


def archetype_table(
    micro_labels: dict[str, Archetype], macro_labels: dict[str, Archetype]
) -> ArchetypeComparison:
    """Shares and signed macro-minus-micro differences per archetype."""
    _check_universe(micro_labels, macro_labels, "labelings")
    n = len(micro_labels)
    micro_share = {
        a: sum(1 for v in micro_labels.values() if v is a) / n for a in Archetype
    }
    macro_share = {
        a: sum(1 for v in macro_labels.values() if v is a) / n for a in Archetype
    }
    return ArchetypeComparison(micro_share=micro_share, macro_share=macro_share)
