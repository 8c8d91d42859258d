"""Extraction of a balanced, almost-regular bipartite subgraph from a dense graph.

The procedure:

1. bipartition: a proper 2-colouring when the input is bipartite, otherwise a
   seeded random balanced split improved by local max-cut moves;
2. dyadic degree buckets ``[2^i, 2^(i+1))`` on each side;
3. keep the bucket pair maximising ``e / m^(1+alpha)`` (lowest indices win ties);
4. trim the larger side by lowest degree until balanced, dropping isolated
   vertices as they appear;
5. repeat 2-4 until the degree ratio is at most ``K_target`` or
   ``ceil(log2 n)`` rounds have run.

The density target ``e(G') >= (C/10) m^(1+alpha)`` is reported, not enforced.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .errors import DegenerateOutput, InvalidParams, TooSparse
from .graphs import BipartiteGraph, GeneralGraph, degree_stats, is_balanced

__all__ = [
    "RegularizeParams",
    "RegularizeReport",
    "default_K_target",
    "regularize",
    "verify_regularization",
]

Number = Union[int, float, Fraction]


def default_K_target(alpha: Number) -> float:
    """``60 * 2^(1 + 1/alpha^2)``; ``inf`` once it overflows a float."""
    try:
        return 60.0 * 2.0 ** (1.0 + 1.0 / float(alpha) ** 2)
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class RegularizeParams:
    alpha: Number
    C: float = 1.0
    K_target: Optional[float] = None
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise InvalidParams("alpha must lie in (0, 1)")
        if self.C < 1:
            raise InvalidParams("C must be at least 1")
        if self.K_target is None:
            object.__setattr__(self, "K_target", default_K_target(self.alpha))
        if self.K_target < 1:
            raise InvalidParams("K_target must be at least 1")


@dataclass(frozen=True)
class RegularizeReport:
    subgraph: BipartiteGraph
    m: int
    achieved_K: float
    achieved_density_ratio: float
    balanced: bool
    # origin[v] is the input-graph id of subgraph vertex v
    origin: tuple[int, ...] = field(repr=False)
    rounds: int = 0

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "nA": self.subgraph.nA,
            "nB": self.subgraph.nB,
            "edges": self.subgraph.num_edges,
            "achieved_K": self.achieved_K,
            "density_ratio": self.achieved_density_ratio,
            "balanced": self.balanced,
            "rounds": self.rounds,
        }


def _two_colouring(G: GeneralGraph) -> Optional[np.ndarray]:
    """Side per vertex if ``G`` is bipartite, components oriented to balance sides."""
    colour = [-1] * G.n
    comps = []
    for root in range(G.n):
        if colour[root] >= 0:
            continue
        colour[root] = 0
        members = [root]
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in G.neighbours(x):
                if colour[y] < 0:
                    colour[y] = 1 - colour[x]
                    members.append(y)
                    queue.append(y)
                elif colour[y] == colour[x]:
                    return None
        comps.append(members)
    side = np.array(colour, dtype=np.int8)
    sizes = [0, 0]
    for members in sorted(comps, key=lambda c: (-len(c), c[0])):
        zeros = sum(1 for v in members if colour[v] == 0)
        ones = len(members) - zeros
        flip = sizes[0] + zeros > sizes[1] + ones
        if flip:
            side[members] = 1 - side[members]
            zeros, ones = ones, zeros
        sizes[0] += zeros
        sizes[1] += ones
    return side


def _local_max_cut(n: int, u: np.ndarray, v: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    side = np.zeros(n, dtype=np.int8)
    perm = rng.permutation(n)
    side[perm[n // 2:]] = 1
    src = np.concatenate([u, v])
    dst = np.concatenate([v, u])
    order = np.argsort(src, kind="stable")
    bounds = np.searchsorted(src[order], np.arange(n + 1))
    nbrs = [dst[order[bounds[x]:bounds[x + 1]]] for x in range(n)]
    # each flip strictly increases the cut, so this terminates
    changed = True
    while changed:
        changed = False
        for x in rng.permutation(n).tolist():
            same = int(np.count_nonzero(side[nbrs[x]] == side[x]))
            if 2 * same > len(nbrs[x]):
                side[x] ^= 1
                changed = True
    return side


def _bucket(deg: np.ndarray) -> np.ndarray:
    out = np.full(deg.shape, -1, dtype=np.int64)
    pos = deg > 0
    out[pos] = np.floor(np.log2(deg[pos])).astype(np.int64)
    # guard against floating error at exact powers of two
    out[pos] += (2 ** (out[pos] + 1) <= deg[pos]).astype(np.int64)
    out[pos] -= (2 ** out[pos] > deg[pos]).astype(np.int64)
    return out


class _Work:
    """Mutable working subgraph: crossing edges plus an alive mask."""

    def __init__(self, n: int, side: np.ndarray, u: np.ndarray, v: np.ndarray):
        cross = side[u] != side[v]
        a = np.where(side[u] == 0, u, v)[cross]
        b = np.where(side[u] == 0, v, u)[cross]
        self.n = n
        self.side = side
        self.a, self.b = a, b
        self.alive = np.ones(n, dtype=bool)

    def live_edges(self) -> np.ndarray:
        return self.alive[self.a] & self.alive[self.b]

    def degrees(self) -> np.ndarray:
        keep = self.live_edges()
        return np.bincount(self.a[keep], minlength=self.n) + np.bincount(self.b[keep], minlength=self.n)

    def drop_isolated(self) -> np.ndarray:
        deg = self.degrees()
        self.alive &= deg > 0
        return self.degrees()

    def sizes(self) -> tuple[int, int]:
        return int(np.sum(self.alive & (self.side == 0))), int(np.sum(self.alive & (self.side == 1)))

    def rebalance(self) -> None:
        while True:
            deg = self.drop_isolated()
            nA, nB = self.sizes()
            if nA == 0 or nB == 0 or (nA <= 2 * nB and nB <= 2 * nA):
                return
            big, small = (0, nB) if nA > nB else (1, nA)
            excess = (nA if big == 0 else nB) - 2 * small
            cand = np.flatnonzero(self.alive & (self.side == big))
            order = np.lexsort((cand, deg[cand]))
            self.alive[cand[order[:excess]]] = False

    def bucket_round(self, exponent: float) -> None:
        deg = self.drop_isolated()
        keep = self.live_edges()
        bk = _bucket(deg)
        ea, eb = bk[self.a[keep]], bk[self.b[keep]]
        if ea.size == 0:
            self.alive[:] = False
            return
        nbk = int(bk.max()) + 1
        edge_counts = np.bincount(ea * nbk + eb, minlength=nbk * nbk).reshape(nbk, nbk)
        live = self.alive
        countA = np.bincount(bk[live & (self.side == 0)], minlength=nbk)
        countB = np.bincount(bk[live & (self.side == 1)], minlength=nbk)
        m = countA[:, None] + countB[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            score = np.where(edge_counts > 0, edge_counts / np.power(m, exponent, dtype=float), -1.0)
        # argmax returns the first maximum in row-major order: lowest indices win
        i, j = np.unravel_index(int(np.argmax(score)), score.shape)
        self.alive &= ((self.side == 0) & (bk == i)) | ((self.side == 1) & (bk == j))
        self.rebalance()


def regularize(G: GeneralGraph, p: RegularizeParams) -> RegularizeReport:
    n = G.n
    e = G.num_edges
    exponent = 1.0 + float(p.alpha)
    if n == 0 or e < p.C * n ** exponent:
        raise TooSparse(f"e(G)={e} below C*n^(1+alpha)={p.C * n ** exponent:.6g}")
    u, v = G.edge_arrays()
    side = _two_colouring(G)
    if side is None:
        side = _local_max_cut(n, u, v, np.random.default_rng(p.seed))
    work = _Work(n, side, u, v)
    work.rebalance()

    max_rounds = max(1, math.ceil(math.log2(n)))
    rounds = 0
    achieved = math.inf
    while rounds < max_rounds:
        work.bucket_round(exponent)
        rounds += 1
        deg = work.degrees()
        alive_deg = deg[work.alive]
        if alive_deg.size == 0:
            break
        achieved = float(alive_deg.max()) / float(alive_deg.min())
        if achieved <= p.K_target:
            break

    A_ids = np.flatnonzero(work.alive & (side == 0)).tolist()
    B_ids = np.flatnonzero(work.alive & (side == 1)).tolist()
    if len(A_ids) + len(B_ids) < 4 or not A_ids or not B_ids:
        raise DegenerateOutput(f"extraction left {len(A_ids) + len(B_ids)} vertices")
    if achieved > p.K_target:
        raise DegenerateOutput(f"degree ratio {achieved:.6g} still above K_target after {rounds} rounds")

    index = {x: i for i, x in enumerate(A_ids)}
    index.update({x: j for j, x in enumerate(B_ids)})
    keep = work.live_edges()
    a_idx = [index[x] for x in work.a[keep].tolist()]
    b_idx = [index[x] for x in work.b[keep].tolist()]
    H = BipartiteGraph.from_arrays(len(A_ids), len(B_ids), a_idx, b_idx)
    return _report(H, tuple(A_ids + B_ids), p.alpha, rounds)


def _report(H: BipartiteGraph, origin, alpha: Number, rounds: int) -> RegularizeReport:
    lo, hi = degree_stats(H)
    m = H.num_vertices
    return RegularizeReport(
        subgraph=H,
        m=m,
        achieved_K=hi / lo if lo else math.inf,
        achieved_density_ratio=H.num_edges / m ** (1.0 + float(alpha)),
        balanced=is_balanced(H),
        origin=origin,
        rounds=rounds,
    )


def verify_regularization(r: RegularizeReport, p: RegularizeParams) -> bool:
    """Recompute every stored field of ``r`` from the subgraph; True iff all agree."""
    H = r.subgraph
    if H.num_vertices == 0 or r.m != H.num_vertices or len(r.origin) != H.num_vertices:
        return False
    lo, hi = degree_stats(H)
    if lo < 1:
        return False
    K = hi / lo
    ratio = H.num_edges / r.m ** (1.0 + float(p.alpha))
    return (
        is_balanced(H)
        and r.balanced
        and math.isclose(K, r.achieved_K, rel_tol=1e-12)
        and K <= p.K_target
        and math.isclose(ratio, r.achieved_density_ratio, rel_tol=1e-12)
    )
