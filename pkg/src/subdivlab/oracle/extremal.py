"""Exact extremal numbers ex(n, H) for tiny n.

Two independent search strategies:

``exhaustive``
    Branch and bound over the C(n, 2) vertex pairs in lexicographic order,
    include-first.  H-freeness is hereditary, so a pair is only included if
    no copy of H runs through it, and a branch is cut once the edges it can
    still reach do not beat the best graph found.

``pruned``
    Vertex extension with isomorph rejection.  Removing a minimum-degree
    vertex from an n-vertex graph with e edges leaves at least
    ``e - floor(2e/n)`` edges, so to find every H-free graph on n vertices
    with at least E edges it suffices to extend every H-free graph on n-1
    vertices with at least ``E - floor(2E/n)`` edges by a vertex of minimum
    degree.  Graphs at each level are deduplicated up to isomorphism
    (colour-refinement invariant, then an exact isomorphism test).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Optional

from ..errors import InvalidParams, TooLarge
from ..graphs import GeneralGraph, build_graph
from .containment import PatternMatcher, as_general

__all__ = ["ExtremalRecord", "extremal_number", "EXHAUSTIVE_LIMIT", "PRUNED_LIMIT"]

EXHAUSTIVE_LIMIT = 10
PRUNED_LIMIT = 14


@dataclass(frozen=True)
class ExtremalRecord:
    n: int
    pattern: str
    value: int
    witness: GeneralGraph
    mode: str


def _graph_from_bits(bits: list[int]) -> GeneralGraph:
    n = len(bits)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if (bits[u] >> v) & 1]
    return build_graph(n, edges)


def _exhaustive(n: int, matcher: PatternMatcher) -> tuple[int, list[int]]:
    pairs = list(combinations(range(n), 2))
    total = len(pairs)
    bits = [0] * n
    best = [-1, None]

    def rec(i: int, count: int) -> None:
        if count + (total - i) <= best[0]:
            return
        if i == total:
            best[0], best[1] = count, list(bits)
            return
        u, v = pairs[i]
        bits[u] |= 1 << v
        bits[v] |= 1 << u
        if count + 1 < matcher.num_edges or not matcher.find(bits, anchor=(u, v)).found:
            rec(i + 1, count + 1)
        bits[u] &= ~(1 << v)
        bits[v] &= ~(1 << u)
        rec(i + 1, count)

    rec(0, 0)
    return best[0], best[1]


def _refine_key(bits: tuple[int, ...]) -> tuple:
    """Isomorphism invariant: edge count plus stable colour-refinement histogram."""
    n = len(bits)
    nbrs = [[w for w in range(n) if (bits[v] >> w) & 1] for v in range(n)]
    colour = [len(nb) for nb in nbrs]
    for _ in range(n):
        sig = [(colour[v], tuple(sorted(colour[w] for w in nbrs[v]))) for v in range(n)]
        palette = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [palette[s] for s in sig]
        if len(palette) == len(set(colour)):
            colour = new
            break
        colour = new
    return tuple(sorted(sig))


def _isomorphic(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    # Same order and size: a monomorphism is an isomorphism.
    return PatternMatcher(_graph_from_bits(list(a))).find(list(b)).found


def _pruned(n: int, matcher: PatternMatcher, target: int) -> list[tuple[int, ...]]:
    """All H-free graphs on n vertices with >= target edges, up to isomorphism."""
    thresholds = {n: target}
    for k in range(n, 1, -1):
        T = thresholds[k]
        thresholds[k - 1] = T - (2 * T) // k
    level: list[tuple[int, ...]] = [(0,)]
    for k in range(1, n):
        need = thresholds[k + 1]
        buckets: dict[tuple, list[tuple[int, ...]]] = {}
        out: list[tuple[int, ...]] = []
        for g in level:
            degs = [b.bit_count() for b in g]
            e = sum(degs) // 2
            lo = max(0, need - e)
            hi = min(k, min(degs) + 1 if degs else 0)
            for d in range(lo, hi + 1):
                for S in combinations(range(k), d):
                    mask = 0
                    for w in S:
                        mask |= 1 << w
                    # new vertex must have minimum degree in the extension
                    if any(degs[w] + ((mask >> w) & 1) < d for w in range(k)):
                        continue
                    ext = [g[w] | (1 << k) if (mask >> w) & 1 else g[w] for w in range(k)]
                    ext.append(mask)
                    if d >= matcher.min_degree and e + d >= matcher.num_edges:
                        if matcher.find(ext, anchor_vertex=k).found:
                            continue
                    key = (e + d, _refine_key(tuple(ext)))
                    bucket = buckets.setdefault(key, [])
                    cand = tuple(ext)
                    if any(_isomorphic(cand, other) for other in bucket):
                        continue
                    bucket.append(cand)
                    out.append(cand)
        level = out
    return level


def _describe(H: GeneralGraph) -> str:
    return f"graph({H.n} vertices, {H.num_edges} edges)"


def extremal_number(
    n: int,
    H,
    mode: str = "pruned",
    name: Optional[str] = None,
    _cache: Optional[dict[int, int]] = None,
) -> ExtremalRecord:
    """Maximum edge count of an ``H``-free graph on ``n`` vertices, with a witness."""
    H = as_general(H)
    if mode == "canonical-pruned":
        mode = "pruned"
    if mode not in ("exhaustive", "pruned"):
        raise InvalidParams(f"unknown mode {mode!r}")
    limit = EXHAUSTIVE_LIMIT if mode == "exhaustive" else PRUNED_LIMIT
    if n > limit:
        raise TooLarge(f"n={n} exceeds the {mode} limit of {limit}")
    if n < 0:
        raise InvalidParams("n must be non-negative")
    label = name or _describe(H)
    if H.num_edges == 0:
        raise InvalidParams("pattern must have at least one edge")
    matcher = PatternMatcher(H)
    if n < H.n:
        witness = build_graph(n, combinations(range(n), 2))
        return ExtremalRecord(n, label, comb(n, 2), witness, mode)

    if mode == "exhaustive":
        value, bits = _exhaustive(n, matcher)
        return ExtremalRecord(n, label, value, _graph_from_bits(bits), mode)

    # Lower bound: extremal graph on n-1 vertices plus a vertex of degree
    # min_degree(H) - 1, which no copy of H can use.
    prev = extremal_number(n - 1, H, mode, name)
    target = prev.value + max(0, min(matcher.min_degree - 1, n - 1))
    graphs = _pruned(n, matcher, target)
    best = max(graphs, key=lambda g: (sum(b.bit_count() for b in g), g))
    value = sum(b.bit_count() for b in best) // 2
    return ExtremalRecord(n, label, value, _graph_from_bits(list(best)), mode)
