"""Direct numerical checks of the codegree inequalities behind the embedding.

Each checker validates its hypotheses first and raises
:class:`PreconditionFailed` when they do not hold; ``holds=False`` on a
valid input would contradict the inequality itself, i.e. a bug.  All
comparisons are done in exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Optional, Union

from ..errors import InvalidParams, InvalidSubset, PreconditionFailed
from ..graphs import BipartiteGraph, NeighbourhoodWeights, make_pattern, neighbourhood_weights, subdivide
from .containment import Verdict, contains_subgraph

__all__ = [
    "LemmaReport",
    "ORACLE_HOST_LIMIT",
    "ORACLE_PATTERN_LIMIT",
    "ASSUMED_FREE_BUDGET",
    "count_light_pairs",
    "check_freeness",
    "check_locallydense",
    "check_manylight",
    "check_turan_step",
    "check_lightcorollary",
]

ORACLE_HOST_LIMIT = 60
ORACLE_PATTERN_LIMIT = 12
# node cap for the confirming search when the caller already vouches for freeness
ASSUMED_FREE_BUDGET = 200_000

Real = Union[int, float, Fraction]


@dataclass(frozen=True)
class LemmaReport:
    lemma: str
    holds: bool
    lhs: Fraction
    rhs: Fraction
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "holds": self.holds,
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "lhs_exact": str(self.lhs),
            "rhs_exact": str(self.rhs),
            **self.details,
        }


def _weights(G: BipartiteGraph, W: Optional[NeighbourhoodWeights]) -> NeighbourhoodWeights:
    if W is None:
        return neighbourhood_weights(G)
    if W.base is not G:
        raise InvalidParams("weights belong to a different host")
    return W


def _subset(G: BipartiteGraph, U: Iterable[int]) -> list[int]:
    idx = sorted(set(U))
    if any(not G.in_A(u) for u in idx):
        raise InvalidSubset("subset must lie in part A")
    return idx


def _min_degree_A(G: BipartiteGraph) -> int:
    return min((G.degree(a) for a in G.partA), default=0)


def count_light_pairs(W: NeighbourhoodWeights, s: int, t: int, U: Optional[Iterable[int]] = None) -> int:
    """Light pairs of the neighbourhood graph, optionally restricted to ``U``."""
    L = W.light_matrix(s, t)
    if U is not None:
        idx = sorted(set(U))
        L = L[idx][:, idx]
    return int(L.nnz) // 2


def check_freeness(G: BipartiteGraph, s: int, t: int, assume_free: bool, budget: Optional[int] = None) -> str:
    """Establish that ``G`` has no copy of the subdivided ``L_{s,t}``.

    Returns ``"verified"`` when the oracle could decide it, ``"asserted"``
    when the caller vouched for it beyond oracle limits.  With
    ``assume_free`` the confirming search is capped at
    ``ASSUMED_FREE_BUDGET`` nodes unless ``budget`` says otherwise.
    """
    H = subdivide(make_pattern(s, t))
    if budget is None and assume_free:
        budget = ASSUMED_FREE_BUDGET
    if G.num_vertices <= ORACLE_HOST_LIMIT and H.n <= ORACLE_PATTERN_LIMIT:
        res = contains_subgraph(G, H, budget=budget)
        if res.verdict is Verdict.YES:
            raise PreconditionFailed(f"host contains the subdivision of L_{{{s},{t}}}")
        if res.verdict is Verdict.NO:
            return "verified"
    if assume_free:
        return "asserted"
    raise PreconditionFailed(
        f"freeness cannot be verified (host {G.num_vertices} vertices, pattern {H.n}); "
        "pass assume_free to assert it"
    )


def check_locallydense(
    G: BipartiteGraph, U: Iterable[int], delta: Real, W: Optional[NeighbourhoodWeights] = None
) -> LemmaReport:
    """``W(U) >= delta^2/(2n) * C(|U|, 2)`` whenever ``delta*|U| >= 2n``."""
    idx = _subset(G, U)
    n = G.nB
    d = Fraction(delta)
    if n == 0 or d <= 0:
        raise PreconditionFailed("need a nonempty B and positive delta")
    if _min_degree_A(G) < d:
        raise PreconditionFailed(f"minimum A-degree {_min_degree_A(G)} below delta={delta}")
    if d * len(idx) < 2 * n:
        raise PreconditionFailed(f"delta*|U| = {float(d * len(idx)):.6g} < 2n = {2 * n}")
    W = _weights(G, W)
    lhs = Fraction(W.total_weight(idx))
    rhs = d * d / (2 * n) * comb(len(idx), 2)
    return LemmaReport("locallydense", lhs >= rhs, lhs, rhs, {"U_size": len(idx), "n": n})


def check_manylight(
    G: BipartiteGraph,
    s: int,
    t: int,
    assume_free: bool = False,
    budget: Optional[int] = None,
    W: Optional[NeighbourhoodWeights] = None,
) -> LemmaReport:
    """Light pairs number at least ``W(A)/(4(s+t)^3)`` when ``W(A) >= 8(s+t)^2 n``."""
    n = G.nB
    W = _weights(G, W)
    total = W.total()
    need = 8 * (s + t) ** 2 * n
    if total < need:
        raise PreconditionFailed(f"W(A) = {total} below 8(s+t)^2 n = {need}")
    freeness = check_freeness(G, s, t, assume_free, budget)
    light = count_light_pairs(W, s, t)
    bound = Fraction(total, 4 * (s + t) ** 3)
    return LemmaReport(
        "manylight",
        light >= bound,
        Fraction(light),
        bound,
        {"weight_A": total, "freeness": freeness, "n": n},
    )


def check_turan_step(
    G: BipartiteGraph,
    b: int,
    s: int,
    t: int,
    assume_free: bool = False,
    budget: Optional[int] = None,
    W: Optional[NeighbourhoodWeights] = None,
) -> LemmaReport:
    """Inside ``N(b)`` at least ``(s+t-2) C(k/(s+t-2), 2) >= k^2/(4(s+t-2))`` pairs are light."""
    if not G.in_B(b):
        raise InvalidSubset(f"{b} is not a B-vertex")
    r = s + t - 2
    k = G.degree(b)
    if k < 2 * r:
        raise PreconditionFailed(f"deg(b) = {k} below 2(s+t-2) = {2 * r}")
    freeness = check_freeness(G, s, t, assume_free, budget)
    W = _weights(G, W)
    light = count_light_pairs(W, s, t, G.neighbours(b))
    x = Fraction(k, r)
    intermediate = r * x * (x - 1) / 2
    bound = Fraction(k * k, 4 * r)
    return LemmaReport(
        "turan",
        light >= intermediate and intermediate >= bound,
        Fraction(light),
        bound,
        {"degree": k, "intermediate": float(intermediate), "freeness": freeness},
    )


def check_lightcorollary(
    G: BipartiteGraph,
    U: Iterable[int],
    s: int,
    t: int,
    delta: Real,
    assume_free: bool = False,
    budget: Optional[int] = None,
    W: Optional[NeighbourhoodWeights] = None,
) -> LemmaReport:
    """Light pairs inside ``U`` number at least ``delta^2/(8(s+t)^3 n) C(|U|, 2)``."""
    idx = _subset(G, U)
    n = G.nB
    d = Fraction(delta)
    if n == 0 or d <= 0:
        raise PreconditionFailed("need a nonempty B and positive delta")
    if _min_degree_A(G) < d:
        raise PreconditionFailed(f"minimum A-degree {_min_degree_A(G)} below delta={delta}")
    if len(idx) < 2:
        raise PreconditionFailed("|U| must be at least 2")
    if len(idx) < 8 * (s + t) * n / d:
        raise PreconditionFailed(f"|U| = {len(idx)} below 8(s+t)n/delta = {float(8 * (s + t) * n / d):.6g}")
    freeness = check_freeness(G, s, t, assume_free, budget)
    W = _weights(G, W)
    light = count_light_pairs(W, s, t, idx)
    bound = d * d / (8 * (s + t) ** 3 * n) * comb(len(idx), 2)
    return LemmaReport(
        "lightcorollary",
        light >= bound,
        Fraction(light),
        bound,
        {"U_size": len(idx), "freeness": freeness, "n": n},
    )
