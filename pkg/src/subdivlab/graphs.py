"""Graph representations, pattern constructors and codegree machinery.

Vertex ids are dense integers.  A :class:`BipartiteGraph` stores part A as
ids ``0 .. nA-1`` and part B as ``nA .. nA+nB-1``, so part membership is a
single comparison.  All graphs are immutable once built.
"""

from __future__ import annotations

import bisect
import enum
from collections import deque
from dataclasses import dataclass
from math import comb, inf
from typing import Iterable, Iterator, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import (
    DuplicateEdge,
    EmptyGraph,
    InvalidEdge,
    InvalidPair,
    InvalidParams,
    InvalidSubset,
)

__all__ = [
    "BipartiteGraph",
    "GeneralGraph",
    "NeighbourhoodWeights",
    "EdgeClass",
    "Pattern",
    "build_bipartite",
    "build_graph",
    "codegree",
    "neighbourhood_weights",
    "total_weight",
    "classify_edge",
    "light_threshold",
    "make_pattern",
    "subdivide",
    "subdivide_bipartite",
    "degree_stats",
    "is_K_almost_regular",
    "is_balanced",
    "girth",
]


def _adjacency_from_arrays(n: int, src: np.ndarray, dst: np.ndarray) -> tuple[tuple[int, ...], ...]:
    """Sorted neighbour tuples for vertices ``0..n-1`` from a directed arc list."""
    order = np.lexsort((dst, src))
    src = src[order]
    dst = dst[order].tolist()
    bounds = np.searchsorted(src, np.arange(n + 1)).tolist()
    return tuple(tuple(dst[bounds[v]:bounds[v + 1]]) for v in range(n))


class BipartiteGraph:
    """Bipartite graph with parts A (ids ``[0, nA)``) and B (ids ``[nA, nA+nB)``)."""

    __slots__ = ("nA", "nB", "_adj", "_biadj")

    def __init__(self, nA: int, nB: int, adjacency: tuple[tuple[int, ...], ...]):
        # Trusted constructor: use build_bipartite / from_arrays for validation.
        self.nA = nA
        self.nB = nB
        self._adj = adjacency
        self._biadj = None

    @classmethod
    def from_arrays(cls, nA: int, nB: int, a_idx, b_idx) -> "BipartiteGraph":
        """Build from parallel arrays of A-indices and B-indices (B counted from 0)."""
        if nA < 0 or nB < 0:
            raise InvalidParams("part sizes must be non-negative")
        a = np.asarray(a_idx, dtype=np.int64).ravel()
        b = np.asarray(b_idx, dtype=np.int64).ravel()
        if a.shape != b.shape:
            raise InvalidEdge("endpoint arrays differ in length")
        if a.size:
            if a.min() < 0 or a.max() >= nA or b.min() < 0 or b.max() >= nB:
                raise InvalidEdge("edge endpoint out of range")
            keys = a * max(nB, 1) + b
            if np.unique(keys).size != keys.size:
                raise DuplicateEdge("duplicate edge")
        gb = b + nA
        src = np.concatenate([a, gb])
        dst = np.concatenate([gb, a])
        return cls(nA, nB, _adjacency_from_arrays(nA + nB, src, dst))

    @property
    def partA(self) -> range:
        return range(self.nA)

    @property
    def partB(self) -> range:
        return range(self.nA, self.nA + self.nB)

    @property
    def num_vertices(self) -> int:
        return self.nA + self.nB

    @property
    def num_edges(self) -> int:
        return sum(len(self._adj[v]) for v in self.partA)

    def in_A(self, v: int) -> bool:
        return 0 <= v < self.nA

    def in_B(self, v: int) -> bool:
        return self.nA <= v < self.nA + self.nB

    def neighbours(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> list[int]:
        return [len(nb) for nb in self._adj]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self._adj[u]
        i = bisect.bisect_left(nb, v)
        return i < len(nb) and nb[i] == v

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as ``(a, b)`` global id pairs, A-endpoint first, sorted."""
        for a in self.partA:
            for b in self._adj[a]:
                yield a, b

    def biadjacency(self) -> sp.csr_matrix:
        """``nA x nB`` 0/1 CSR matrix (cached)."""
        if self._biadj is None:
            indptr = np.zeros(self.nA + 1, dtype=np.int64)
            indptr[1:] = np.cumsum([len(self._adj[a]) for a in self.partA])
            indices = np.fromiter(
                (b - self.nA for a in self.partA for b in self._adj[a]),
                dtype=np.int64,
                count=int(indptr[-1]),
            )
            data = np.ones(indices.size, dtype=np.int64)
            self._biadj = sp.csr_matrix((data, indices, indptr), shape=(self.nA, self.nB))
        return self._biadj

    def to_general(self) -> "GeneralGraph":
        return GeneralGraph(self.num_vertices, self._adj)

    def induced(self, A_ids: Sequence[int], B_ids: Sequence[int]) -> tuple["BipartiteGraph", tuple[int, ...]]:
        """Subgraph induced on the given A- and B-vertices, re-indexed.

        Returns the new graph and ``origin`` where ``origin[new_id]`` is the
        id in this graph.
        """
        A_ids = sorted(A_ids)
        B_ids = sorted(B_ids)
        index = {v: i for i, v in enumerate(A_ids)}
        index.update({v: len(A_ids) + j for j, v in enumerate(B_ids)})
        a_idx, b_idx = [], []
        for a in A_ids:
            for b in self._adj[a]:
                j = index.get(b)
                if j is not None:
                    a_idx.append(index[a])
                    b_idx.append(j - len(A_ids))
        g = BipartiteGraph.from_arrays(len(A_ids), len(B_ids), a_idx, b_idx)
        return g, tuple(A_ids) + tuple(B_ids)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BipartiteGraph)
            and self.nA == other.nA
            and self.nB == other.nB
            and self._adj == other._adj
        )

    def __hash__(self) -> int:
        return hash((self.nA, self.nB, self._adj))

    def __repr__(self) -> str:
        return f"BipartiteGraph(nA={self.nA}, nB={self.nB}, edges={self.num_edges})"


class GeneralGraph:
    """Simple undirected graph on ``0..n-1``."""

    __slots__ = ("n", "_adj")

    def __init__(self, n: int, adjacency: tuple[tuple[int, ...], ...]):
        self.n = n
        self._adj = adjacency

    @classmethod
    def from_arrays(cls, n: int, u_idx, v_idx) -> "GeneralGraph":
        u = np.asarray(u_idx, dtype=np.int64).ravel()
        v = np.asarray(v_idx, dtype=np.int64).ravel()
        if u.size:
            if min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n:
                raise InvalidEdge("edge endpoint out of range")
            if np.any(u == v):
                raise InvalidEdge("self-loop")
            lo, hi = np.minimum(u, v), np.maximum(u, v)
            keys = lo * n + hi
            if np.unique(keys).size != keys.size:
                raise DuplicateEdge("duplicate edge")
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        return cls(n, _adjacency_from_arrays(n, src, dst))

    @property
    def num_vertices(self) -> int:
        return self.n

    @property
    def num_edges(self) -> int:
        return sum(len(nb) for nb in self._adj) // 2

    def neighbours(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> list[int]:
        return [len(nb) for nb in self._adj]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self._adj[u]
        i = bisect.bisect_left(nb, v)
        return i < len(nb) and nb[i] == v

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in self._adj[u]:
                if u < v:
                    yield u, v

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        pairs = list(self.edges())
        if not pairs:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        arr = np.asarray(pairs, dtype=np.int64)
        return arr[:, 0], arr[:, 1]

    def __eq__(self, other) -> bool:
        return isinstance(other, GeneralGraph) and self.n == other.n and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self.n, self._adj))

    def __repr__(self) -> str:
        return f"GeneralGraph(n={self.n}, edges={self.num_edges})"


def build_bipartite(nA: int, nB: int, edges: Iterable[tuple[int, int]]) -> BipartiteGraph:
    """Build a bipartite graph from ``(a-index, b-index)`` pairs, both 0-based."""
    edges = list(edges)
    if not edges:
        return BipartiteGraph.from_arrays(nA, nB, [], [])
    a, b = zip(*edges)
    return BipartiteGraph.from_arrays(nA, nB, a, b)


def build_graph(n: int, edges: Iterable[tuple[int, int]]) -> GeneralGraph:
    edges = list(edges)
    if n < 0:
        raise InvalidParams("vertex count must be non-negative")
    if not edges:
        return GeneralGraph(n, tuple(() for _ in range(n)))
    u, v = zip(*edges)
    return GeneralGraph.from_arrays(n, u, v)


# -- codegrees and the neighbourhood graph ---------------------------------


def _check_pair(G: BipartiteGraph, u: int, v: int) -> None:
    if u == v or not (G.in_A(u) and G.in_A(v)):
        raise InvalidPair(f"({u}, {v}) is not a pair of distinct A-vertices")


def codegree(G: BipartiteGraph, u: int, v: int) -> int:
    """Number of common neighbours of two distinct A-vertices."""
    _check_pair(G, u, v)
    nu, nv = G.neighbours(u), G.neighbours(v)
    if len(nu) > len(nv):
        nu, nv = nv, nu
    return len(set(nu).intersection(nv))


class EdgeClass(enum.Enum):
    ABSENT = "absent"
    LIGHT = "light"
    HEAVY = "heavy"


def light_threshold(s: int, t: int) -> int:
    """Codegree at which a pair stops being light: C(s+t-1, 2)."""
    return comb(s + t - 1, 2)


class NeighbourhoodWeights:
    """Pairwise codegrees on part A of a bipartite host.

    Stored as a symmetric sparse ``nA x nA`` matrix with zero diagonal;
    zero codegrees are not stored.  ``matrix[u, v]`` is ``d(u, v)``.
    """

    __slots__ = ("base", "matrix")

    def __init__(self, base: BipartiteGraph, matrix: sp.csr_matrix):
        self.base = base
        self.matrix = matrix

    def weight(self, u: int, v: int) -> int:
        _check_pair(self.base, u, v)
        m = self.matrix
        lo, hi = m.indptr[u], m.indptr[u + 1]
        i = lo + np.searchsorted(m.indices[lo:hi], v)
        if i < hi and m.indices[i] == v:
            return int(m.data[i])
        return 0

    def row(self, u: int) -> tuple[np.ndarray, np.ndarray]:
        """``(neighbours, codegrees)`` of ``u`` in the neighbourhood graph."""
        m = self.matrix
        lo, hi = m.indptr[u], m.indptr[u + 1]
        return m.indices[lo:hi], m.data[lo:hi]

    def items(self) -> Iterator[tuple[tuple[int, int], int]]:
        """Nonzero weights keyed by canonical ``(min, max)`` pair."""
        coo = sp.triu(self.matrix, k=1).tocoo()
        order = np.lexsort((coo.col, coo.row))
        for u, v, w in zip(coo.row[order].tolist(), coo.col[order].tolist(), coo.data[order].tolist()):
            yield (u, v), w

    def as_dict(self) -> dict[tuple[int, int], int]:
        return dict(self.items())

    def total(self) -> int:
        return int(self.matrix.sum()) // 2

    def total_weight(self, U: Iterable[int]) -> int:
        return total_weight(self, U)

    def band(self, lo: int, hi: float = inf) -> sp.csr_matrix:
        """Boolean matrix of pairs with ``lo <= codegree < hi``."""
        m = self.matrix.copy()
        keep = m.data >= lo
        if hi != inf:
            keep &= m.data < hi
        m.data = keep
        m.eliminate_zeros()
        return m.astype(bool).tocsr()

    def light_matrix(self, s: int, t: int) -> sp.csr_matrix:
        return self.band(1, light_threshold(s, t))

    def heavy_matrix(self, s: int, t: int) -> sp.csr_matrix:
        return self.band(light_threshold(s, t))


def neighbourhood_weights(G: BipartiteGraph) -> NeighbourhoodWeights:
    """Codegrees of all A-pairs.

    ``M @ M.T`` sums, over every b in B, the outer product of b's
    A-neighbourhood indicator with itself, i.e. it enumerates the wedges
    through B; the diagonal (degrees) is then dropped.
    """
    M = G.biadjacency()
    W = (M @ M.T).tocsr()
    W.setdiag(0)
    W.eliminate_zeros()
    W.sort_indices()
    return NeighbourhoodWeights(G, W)


def total_weight(W: NeighbourhoodWeights, U: Iterable[int]) -> int:
    """Sum of codegrees over all pairs inside ``U``."""
    idx = sorted(set(U))
    if any(not W.base.in_A(u) for u in idx):
        raise InvalidSubset("subset must lie in part A")
    if len(idx) < 2:
        return 0
    sub = W.matrix[idx][:, idx]
    return int(sub.sum()) // 2


def classify_edge(W: NeighbourhoodWeights, u: int, v: int, s: int, t: int) -> EdgeClass:
    if s < 1 or t < 3:
        raise InvalidParams("need s >= 1 and t >= 3")
    d = W.weight(u, v)
    if d == 0:
        return EdgeClass.ABSENT
    return EdgeClass.LIGHT if d < light_threshold(s, t) else EdgeClass.HEAVY


# -- patterns and subdivisions ---------------------------------------------


@dataclass(frozen=True)
class Pattern:
    """``L_{s,t}``: K_{s+t-1} minus the edges inside the s-set S.

    Vertices ``0..s-1`` form S and ``s..s+t-2`` form T.
    """

    s: int
    t: int
    S: tuple[int, ...]
    T: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def num_vertices(self) -> int:
        return self.s + self.t - 1

    def label(self, v: int) -> str:
        return f"S{v}" if v < self.s else f"T{v - self.s}"

    def edge_label(self, e: tuple[int, int]) -> str:
        x, y = sorted(e)
        return f"{self.label(x)}-{self.label(y)}"

    def graph(self) -> GeneralGraph:
        return build_graph(self.num_vertices, self.edges)


def make_pattern(s: int, t: int) -> Pattern:
    if s < 1 or t < 3:
        raise InvalidParams(f"L_{{s,t}} needs s >= 1 and t >= 3, got s={s}, t={t}")
    S = tuple(range(s))
    T = tuple(range(s, s + t - 1))
    edges = tuple(
        (x, y)
        for x in range(s + t - 1)
        for y in range(x + 1, s + t - 1)
        if x in T or y in T
    )
    return Pattern(s, t, S, T, edges)


def _as_general(P) -> GeneralGraph:
    if isinstance(P, Pattern):
        return P.graph()
    if isinstance(P, BipartiteGraph):
        return P.to_general()
    return P


def subdivide(P) -> GeneralGraph:
    """1-subdivision: original vertices keep their ids, edge ``k`` becomes vertex ``n+k``."""
    L = _as_general(P)
    us, vs = [], []
    for k, (x, y) in enumerate(L.edges()):
        mid = L.n + k
        us += [x, y]
        vs += [mid, mid]
    return GeneralGraph.from_arrays(L.n + L.num_edges, us, vs)


def subdivide_bipartite(P) -> BipartiteGraph:
    """1-subdivision as a bipartite host: A = original vertices, B = edges."""
    L = _as_general(P)
    a_idx, b_idx = [], []
    for k, (x, y) in enumerate(L.edges()):
        a_idx += [x, y]
        b_idx += [k, k]
    return BipartiteGraph.from_arrays(L.n, L.num_edges, a_idx, b_idx)


# -- degree statistics -----------------------------------------------------


def degree_stats(G) -> tuple[int, int]:
    if G.num_vertices == 0:
        raise EmptyGraph("graph has no vertices")
    degs = G.degrees()
    return min(degs), max(degs)


def is_K_almost_regular(G, K: float) -> bool:
    lo, hi = degree_stats(G)
    return hi <= K * lo


def is_balanced(G: BipartiteGraph) -> bool:
    return G.nB <= 2 * G.nA and G.nA <= 2 * G.nB


def girth(G) -> float:
    """Length of a shortest cycle (``inf`` for forests), by BFS from every vertex."""
    best = inf
    n = G.num_vertices
    for root in range(n):
        dist = [-1] * n
        parent = [-1] * n
        dist[root] = 0
        queue = deque([root])
        while queue:
            x = queue.popleft()
            if 2 * dist[x] + 1 >= best:
                break
            for y in G.neighbours(x):
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y:
                    best = min(best, dist[x] + dist[y] + 1)
    return best
