"""Exact (non-induced) subgraph containment by backtracking.

Host adjacency is held as Python-int bitsets, so the candidate set for a
pattern vertex is the AND of its mapped neighbours' host neighbourhoods,
filtered by host degree and by the vertices already used.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

from ..graphs import BipartiteGraph, GeneralGraph, Pattern, subdivide

__all__ = [
    "Verdict",
    "Containment",
    "PatternMatcher",
    "contains_subgraph",
    "contains_subdivision",
    "host_bitsets",
]


class Verdict(enum.Enum):
    YES = "yes"
    NO = "no"
    BUDGET_EXCEEDED = "budget_exceeded"


@dataclass(frozen=True)
class Containment:
    verdict: Verdict
    embedding: Optional[dict[int, int]]
    nodes: int

    @property
    def found(self) -> bool:
        return self.verdict is Verdict.YES


class _OutOfBudget(Exception):
    pass


def as_general(G) -> GeneralGraph:
    if isinstance(G, BipartiteGraph):
        return G.to_general()
    if isinstance(G, Pattern):
        return G.graph()
    return G


def host_bitsets(G) -> list[int]:
    G = as_general(G)
    bits = []
    for v in range(G.n):
        b = 0
        for w in G.neighbours(v):
            b |= 1 << w
        bits.append(b)
    return bits


class PatternMatcher:
    """Reusable search plans for one pattern graph ``H``.

    Plans are computed once; :meth:`find` then runs against any host given
    as a list of adjacency bitsets.
    """

    def __init__(self, H):
        H = as_general(H)
        self.H = H
        self.n = H.n
        self.num_edges = H.num_edges
        self.deg = H.degrees()
        self.min_degree = min(self.deg, default=0)
        self._plans: dict[tuple[int, ...], tuple[list[int], list[list[int]]]] = {}

    def _order(self, first: tuple[int, ...]) -> list[int]:
        H = self.H
        order = list(first)
        placed = set(order)
        remaining = [x for x in range(H.n) if x not in placed]
        while remaining:
            x = min(
                remaining,
                key=lambda x: (-sum(1 for y in H.neighbours(x) if y in placed), -self.deg[x], x),
            )
            remaining.remove(x)
            order.append(x)
            placed.add(x)
        return order

    def plan(self, first: tuple[int, ...] = ()):
        p = self._plans.get(first)
        if p is None:
            order = self._order(first)
            pos = {x: i for i, x in enumerate(order)}
            back = [[y for y in self.H.neighbours(x) if pos[y] < pos[x]] for x in order]
            p = self._plans[first] = (order, back)
        return p

    def find(
        self,
        bits: Sequence[int],
        budget: Optional[int] = None,
        anchor: Optional[tuple[int, int]] = None,
        anchor_vertex: Optional[int] = None,
    ) -> Containment:
        """Search the host ``bits`` for a copy of the pattern.

        ``anchor=(u, v)`` only looks for copies using host edge ``uv``;
        ``anchor_vertex=w`` only for copies using host vertex ``w``.
        """
        nG = len(bits)
        if self.n > nG:
            return Containment(Verdict.NO, None, 0)
        if self.n == 0:
            return Containment(Verdict.YES, {}, 0)
        hdeg = [b.bit_count() for b in bits]
        maxd = max(self.deg)
        by_degree = []
        for d in range(maxd + 1):
            mask = 0
            for v in range(nG):
                if hdeg[v] >= d:
                    mask |= 1 << v
            by_degree.append(mask)

        state = {"nodes": 0}
        deg = self.deg

        def run(first: tuple[int, ...], images: tuple[int, ...]):
            order, back = self.plan(first)
            img: dict[int, int] = {}
            used = 0
            for k, (x, v) in enumerate(zip(first, images)):
                if not (by_degree[deg[x]] >> v) & 1 or (used >> v) & 1:
                    return None
                for y in back[k]:
                    if not (bits[v] >> img[y]) & 1:
                        return None
                img[x] = v
                used |= 1 << v

            def extend(k: int, used: int) -> bool:
                if k == len(order):
                    return True
                x = order[k]
                mask = by_degree[deg[x]] & ~used
                for y in back[k]:
                    mask &= bits[img[y]]
                while mask:
                    low = mask & -mask
                    mask ^= low
                    state["nodes"] += 1
                    if budget is not None and state["nodes"] > budget:
                        raise _OutOfBudget
                    img[x] = low.bit_length() - 1
                    if extend(k + 1, used | low):
                        return True
                img.pop(x, None)
                return False

            return dict(img) if extend(len(first), used) else None

        try:
            found = None
            if anchor is not None:
                u, v = anchor
                for x, y in self.H.edges():
                    for a, b in ((u, v), (v, u)):
                        found = run((x, y), (a, b))
                        if found is not None:
                            break
                    if found is not None:
                        break
            elif anchor_vertex is not None:
                for x in range(self.n):
                    found = run((x,), (anchor_vertex,))
                    if found is not None:
                        break
            else:
                found = run((), ())
        except _OutOfBudget:
            return Containment(Verdict.BUDGET_EXCEEDED, None, state["nodes"])
        if found is None:
            return Containment(Verdict.NO, None, state["nodes"])
        return Containment(Verdict.YES, found, state["nodes"])


def contains_subgraph(G, H, budget: Optional[int] = None, anchor: Optional[tuple[int, int]] = None) -> Containment:
    """Does ``G`` contain ``H`` as a (not necessarily induced) subgraph?

    On ``YES`` the embedding maps every vertex of ``H`` injectively to a
    vertex of ``G`` with every edge of ``H`` landing on an edge of ``G``.
    ``budget`` caps the number of search nodes; running out yields
    ``Verdict.BUDGET_EXCEEDED`` deterministically.
    """
    G, H = as_general(G), as_general(H)
    if H.n > G.n or H.num_edges > G.num_edges:
        return Containment(Verdict.NO, None, 0)
    return PatternMatcher(H).find(host_bitsets(G), budget=budget, anchor=anchor)


def contains_subdivision(G, P, budget: Optional[int] = None) -> Containment:
    """Containment of the 1-subdivision of ``P`` in ``G``."""
    return contains_subgraph(G, subdivide(as_general(P)), budget)
