"""Host-graph generators: random bipartite hosts, deletion-method lower-bound
witnesses, and the symplectic generalized quadrangle incidence graph."""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import InvalidParameter, TooLarge
from .graphs import BipartiteGraph, GeneralGraph, build_graph, make_pattern, subdivide
from .oracle.containment import PatternMatcher, Verdict, host_bitsets

__all__ = [
    "random_bipartite",
    "lower_bound_exponent",
    "deletion_probability_exponent",
    "DeletionReport",
    "deletion_lower_bound",
    "list_six_cycles",
    "is_prime",
    "gq_incidence",
    "EXACT_LIMIT_T3",
    "EXACT_LIMIT_ORACLE",
]

EXACT_LIMIT_T3 = 40
EXACT_LIMIT_ORACLE = 60


def random_bipartite(nA: int, nB: int, p: float, seed: int) -> BipartiteGraph:
    """Each of the ``nA * nB`` pairs independently with probability ``p``."""
    if not 0 <= p <= 1:
        raise InvalidParameter("p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    a, b = np.nonzero(rng.random((nA, nB)) < p)
    return BipartiteGraph.from_arrays(nA, nB, a, b)


def lower_bound_exponent(t: int) -> Fraction:
    """``3/2 - (t - 3/2)/(t^2 - t - 1)``, exactly."""
    return Fraction(3, 2) - Fraction(2 * t - 3, 2 * (t * t - t - 1))


def deletion_probability_exponent(t: int) -> Fraction:
    """Exponent of n in the sampling probability: ``-(t - 3/2)/(t^2 - t - 1) - 1/2``."""
    return -Fraction(2 * t - 3, 2 * (t * t - t - 1)) - Fraction(1, 2)


@dataclass(frozen=True)
class DeletionReport:
    n: int
    t: int
    seed: int
    constant: float
    p: float
    exponent: str
    initial_edges: int
    copies_found: int
    deleted: int
    final_edges: int
    target: float
    ratio: float
    exact: bool
    verified: Optional[bool]

    def to_dict(self) -> dict:
        return asdict(self)


def list_six_cycles(bits: list[int]):
    """Yield every 6-cycle once, as a tuple of vertices starting at its minimum.

    The second vertex is smaller than the last, fixing the direction.
    """
    n = len(bits)
    for v0 in range(n):
        above = ~((1 << (v0 + 1)) - 1)
        path = [v0]

        def walk(x: int, seen: int):
            if len(path) == 6:
                if (bits[x] >> v0) & 1 and path[1] < path[5]:
                    yield tuple(path)
                return
            m = bits[x] & above & ~seen
            while m:
                low = m & -m
                m ^= low
                y = low.bit_length() - 1
                path.append(y)
                yield from walk(y, seen | low)
                path.pop()

        yield from walk(v0, 1 << v0)


def _cycle_edges(cyc: tuple[int, ...]) -> list[tuple[int, int]]:
    return [tuple(sorted((cyc[i], cyc[(i + 1) % 6]))) for i in range(6)]


def deletion_lower_bound(
    n: int,
    t: int,
    seed: int,
    constant: float = 1.0,
    exact: bool = True,
    budget: Optional[int] = None,
) -> tuple[GeneralGraph, DeletionReport]:
    """Sample ``G(n, p)`` and delete one edge from every copy of ``H_t`` found.

    For t = 3 copies are 6-cycles and are listed directly; for t >= 4 the
    containment oracle is run in a find-delete-repeat loop.  In exact mode
    the output is guaranteed ``H_t``-free; otherwise the search is capped by
    ``budget`` and the report says so.
    """
    if t < 3 or n < 1:
        raise InvalidParameter("need t >= 3 and n >= 1")
    if constant <= 0:
        raise InvalidParameter("constant must be positive")
    limit = EXACT_LIMIT_T3 if t == 3 else EXACT_LIMIT_ORACLE
    if exact and n > limit:
        raise TooLarge(f"exact mode supports n <= {limit} for t={t}")

    rng = np.random.default_rng(seed)
    p = min(1.0, constant * n ** float(deletion_probability_exponent(t)))
    pairs = list(itertools.combinations(range(n), 2))
    keep = rng.random(len(pairs)) < p
    bits = [0] * n
    initial = 0
    for (u, v), k in zip(pairs, keep.tolist()):
        if k:
            bits[u] |= 1 << v
            bits[v] |= 1 << u
            initial += 1

    def delete(edge):
        u, v = edge
        bits[u] &= ~(1 << v)
        bits[v] &= ~(1 << u)

    def present(edge):
        return (bits[edge[0]] >> edge[1]) & 1

    copies = deleted = 0
    complete = True
    if t == 3:
        nodes = 0
        for cyc in list_six_cycles(list(bits)):
            nodes += 1
            if budget is not None and not exact and nodes > budget:
                complete = False
                break
            copies += 1
            edges = _cycle_edges(cyc)
            if all(present(e) for e in edges):
                delete(edges[int(rng.integers(6))])
                deleted += 1
    else:
        matcher = PatternMatcher(subdivide(make_pattern(1, t)))
        H_edges = list(matcher.H.edges())
        while True:
            found = matcher.find(bits, budget=None if exact else budget)
            if found.verdict is Verdict.BUDGET_EXCEEDED:
                complete = False
                break
            if not found.found:
                break
            copies += 1
            x, y = H_edges[int(rng.integers(len(H_edges)))]
            delete((found.embedding[x], found.embedding[y]))
            deleted += 1

    G = build_graph(n, [(u, v) for u, v in pairs if (bits[u] >> v) & 1])
    verified = None
    if n <= EXACT_LIMIT_ORACLE:
        H = subdivide(make_pattern(1, t))
        verified = not PatternMatcher(H).find(host_bitsets(G)).found

    expo = lower_bound_exponent(t)
    target = n ** float(expo)
    report = DeletionReport(
        n=n,
        t=t,
        seed=seed,
        constant=constant,
        p=p,
        exponent=str(expo),
        initial_edges=initial,
        copies_found=copies,
        deleted=deleted,
        final_edges=G.num_edges,
        target=target,
        ratio=G.num_edges / target,
        exact=exact and complete,
        verified=verified,
    )
    return G, report


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    f = 2
    while f * f <= q:
        if q % f == 0:
            return False
        f += 1
    return True


def _normalise(vec, q):
    for x in vec:
        if x:
            inv = pow(x, q - 2, q)
            return tuple((y * inv) % q for y in vec)
    return None


def _symplectic(x, y, q):
    # antidiagonal alternating form x0y3 - x3y0 + x1y2 - x2y1
    return (x[0] * y[3] - x[3] * y[0] + x[1] * y[2] - x[2] * y[1]) % q


def gq_incidence(q: int) -> BipartiteGraph:
    """Point-line incidence graph of the symplectic quadrangle W(3, q).

    A holds the points of PG(3, q), B the totally isotropic lines, both
    sorted (points lexicographically by normalised coordinates, lines by
    their sorted point indices).
    """
    if not is_prime(q):
        raise InvalidParameter(f"q={q} is not prime")
    points = sorted(
        {_normalise(v, q) for v in itertools.product(range(q), repeat=4) if any(v)}
    )
    index = {pt: i for i, pt in enumerate(points)}
    lines = set()
    for i, x in enumerate(points):
        for y in points[i + 1:]:
            if _symplectic(x, y, q) == 0:
                span = {
                    _normalise(tuple((a * xi + b * yi) % q for xi, yi in zip(x, y)), q)
                    for a in range(q)
                    for b in range(q)
                    if a or b
                }
                lines.add(tuple(sorted(index[pt] for pt in span)))
    lines = sorted(lines)
    a_idx, b_idx = [], []
    for j, line in enumerate(lines):
        for i in line:
            a_idx.append(i)
            b_idx.append(j)
    return BipartiteGraph.from_arrays(len(points), len(lines), a_idx, b_idx)
