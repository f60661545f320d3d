"""Bisimilarity for charts: witnesses, stratification levels, quotients.

Two states are bisimilar when they output the same variables and every
transition of one can be matched by an equally-labelled transition of
the other into bisimilar states.  The coarsest such relation is
computed by partition refinement; the stratified approximants (level 0
relates everything, level n+1 additionally requires output equality and
matching into level n) give the finite levels used by the distance
modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .chart import Chart, Prechart, disjoint_union, state_key

__all__ = [
    "Partition", "bisimilar", "stratified_level", "quotient",
    "is_bisimulation", "coarsest_partition",
]


@dataclass(frozen=True)
class Partition:
    """Blocks of an equivalence relation on a prechart's states."""

    blocks: tuple

    def __post_init__(self):
        seen = set()
        for b in self.blocks:
            if not b:
                raise ValueError("empty partition block")
            if seen & b:
                raise ValueError("overlapping partition blocks")
            seen |= b

    def as_map(self) -> dict:
        m = {}
        for i, b in enumerate(self.blocks):
            for q in b:
                m[q] = i
        return m

    def same_block(self, q1, q2) -> bool:
        m = self.as_map()
        return m[q1] == m[q2]


def _refine_once(p: Prechart, assign: dict, order: list, with_outputs: bool) -> dict:
    """One refinement round; block ids are renumbered in first-seen order."""
    tmap = p.transition_map()
    omap = p.output_map()
    sigs = {}
    for q in order:
        succ = frozenset((a, assign[r]) for (a, r) in tmap[q])
        if with_outputs:
            sigs[q] = (assign[q], frozenset(omap[q]), succ)
        else:
            sigs[q] = (assign[q], succ)
    fresh: dict = {}
    new = {}
    for q in order:
        s = sigs[q]
        if s not in fresh:
            fresh[s] = len(fresh)
        new[q] = fresh[s]
    return new


def coarsest_partition(p: Prechart) -> Partition:
    """Coarsest bisimulation partition (outputs respected from the start)."""
    order = sorted(p.states, key=state_key)
    omap = p.output_map()
    fresh: dict = {}
    assign = {}
    for q in order:
        s = frozenset(omap[q])
        if s not in fresh:
            fresh[s] = len(fresh)
        assign[q] = fresh[s]
    while True:
        new = _refine_once(p, assign, order, with_outputs=False)
        if len(set(new.values())) == len(set(assign.values())):
            assign = new
            break
        assign = new
    blocks: dict = {}
    for q in order:
        blocks.setdefault(assign[q], []).append(q)
    return Partition(tuple(frozenset(blocks[i]) for i in sorted(blocks)))


def bisimilar(c1: Chart, c2: Chart):
    """Decide bisimilarity of two charts' start states.

    Returns (True, witness relation on original state ids) or
    (False, n) where n is the least level at which the starts separate.
    """
    union, s1, s2 = disjoint_union(c1, c2)
    part = coarsest_partition(union)
    m = part.as_map()
    if m[s1] == m[s2]:
        witness = frozenset(
            (q1, q2)
            for q1 in c1.states for q2 in c2.states
            if m[f"L:{q1}"] == m[f"R:{q2}"]
        )
        return True, witness
    level = stratified_level(c1, c2)
    return False, level + 1


def stratified_level(c1: Chart, c2: Chart):
    """Largest n with the starts related at level n; math.inf when bisimilar.

    Level 0 is the total relation; level n+1 requires equal outputs and
    transition matching into level n.
    """
    union, s1, s2 = disjoint_union(c1, c2)
    order = sorted(union.states, key=state_key)
    assign = {q: 0 for q in order}
    level = 0
    while True:
        new = _refine_once(union, assign, order, with_outputs=True)
        if new[s1] != new[s2]:
            return level
        if len(set(new.values())) == len(set(assign.values())):
            return math.inf
        assign = new
        level += 1


def is_bisimulation(c1: Chart, c2: Chart, relation) -> bool:
    """Check the two bisimulation clauses for a relation on Q1 x Q2."""
    rel = set(relation)
    t1, t2 = c1.prechart.transition_map(), c2.prechart.transition_map()
    o1, o2 = c1.prechart.output_map(), c2.prechart.output_map()
    for (q1, q2) in rel:
        if o1[q1] != o2[q2]:
            return False
        for (a, r1) in t1[q1]:
            if not any(b == a and (r1, r2) in rel for (b, r2) in t2[q2]):
                return False
        for (a, r2) in t2[q2]:
            if not any(b == a and (r1, r2) in rel for (b, r1) in t1[q1]):
                return False
    return True


def quotient(p: Prechart):
    """Prechart of bisimilarity classes; returns (quotient, state -> class id).

    The graph of the returned map is itself a bisimulation, and
    quotienting twice gives an isomorphic result.
    """
    part = coarsest_partition(p)
    m = part.as_map()
    states = frozenset(m.values())
    trans = frozenset((m[q], a, m[r]) for (q, a, r) in p.trans)
    outs = frozenset((m[q], v) for (q, v) in p.outs)
    return Prechart(states, trans, outs), m
