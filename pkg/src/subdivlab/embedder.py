"""Constructive embedding of the 1-subdivision of ``L_{s,t}`` into a dense
balanced bipartite host.

Two routes:

* heavy-clique shortcut: ``s+t-1`` A-vertices pairwise of codegree at least
  ``C(s+t-1, 2)`` carry the subdivision directly, choosing distinct
  midpoints greedily;
* light path: branch vertices ``u_1..u_{t-1}`` chosen one by one among
  vertices light to all earlier ones, then ``v_1..v_s`` chosen greedily so
  that no B-vertex lies in three branch neighbourhoods at once, which makes
  the smallest common neighbour of each pattern edge a valid midpoint.

Every counting threshold of the argument is evaluated exactly as written,
multiplied by ``EmbedParams.slack``.  A threshold that fails raises
:class:`ThresholdFailure` carrying the full :class:`EmbedTrace`.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

import numpy as np

from .errors import (
    InvalidBranchSet,
    InvalidParams,
    InvariantViolation,
    PreconditionFailed,
    SelectionFailure,
    ThresholdFailure,
)
from .graphs import (
    BipartiteGraph,
    GeneralGraph,
    NeighbourhoodWeights,
    Pattern,
    degree_stats,
    is_balanced,
    light_threshold,
    make_pattern,
    neighbourhood_weights,
)
from .regularizer import RegularizeParams, RegularizeReport, regularize

__all__ = [
    "EmbedParams",
    "SubdivisionCertificate",
    "EmbedTrace",
    "EmbedResult",
    "PipelineResult",
    "delta_exponent",
    "delta_threshold",
    "find_heavy_clique",
    "find_branch_vertices",
    "find_s_vertices",
    "assemble_subdivision",
    "validate_certificate",
    "embed",
    "pipeline_embed",
    "kab_parameters",
]

HEAVY_CLIQUE_EXACT_LIMIT = 6


class _OutOfBudget(Exception):
    pass


@dataclass(frozen=True)
class EmbedParams:
    s: int
    t: int
    # None: use the host's own max/min degree ratio
    K: Optional[float] = None
    c: float = 1.0
    slack: float = 1.0
    heavy_budget: int = 200_000

    def __post_init__(self):
        if self.s < 1 or self.t < 3:
            raise InvalidParams("need s >= 1 and t >= 3")
        if self.K is not None and self.K < 1:
            raise InvalidParams("K must be at least 1")
        if self.c <= 0:
            raise InvalidParams("c must be positive")
        # slack = 0 switches every counting threshold off
        if self.slack < 0:
            raise InvalidParams("slack must be non-negative")


def kab_parameters(a: int, b: int) -> tuple[int, int]:
    """``(s, t)`` with ``K_{a,b}`` inside ``L_{s,t}``: s = b, t = a + 1."""
    if not 2 <= a <= b:
        raise InvalidParams("need 2 <= a <= b")
    return b, a + 1


def delta_exponent(t: int) -> Fraction:
    return Fraction(t - 2, 2 * t - 3)


def delta_threshold(s: int, t: int, c: float, n: int) -> float:
    """Minimum degree ``c * n^((t-2)/(2t-3))`` demanded of the host."""
    if t < 3 or n < 1 or c <= 0:
        raise InvalidParams("need t >= 3, n >= 1, c > 0")
    return c * n ** float(delta_exponent(t))


# -- certificates and traces -----------------------------------------------


@dataclass(frozen=True)
class SubdivisionCertificate:
    """Branch images of pattern vertices and midpoint images of pattern edges."""

    s: int
    t: int
    branch: dict[int, int]
    midpoints: dict[tuple[int, int], int]
    mode: str

    def pattern(self) -> Pattern:
        return make_pattern(self.s, self.t)

    def translate(self, origin: Sequence[int]) -> "SubdivisionCertificate":
        return SubdivisionCertificate(
            self.s,
            self.t,
            {x: origin[v] for x, v in self.branch.items()},
            {e: origin[b] for e, b in self.midpoints.items()},
            self.mode,
        )

    def to_dict(self) -> dict:
        P = self.pattern()
        return {
            "branch": {P.label(x): v for x, v in sorted(self.branch.items())},
            "midpoints": {P.edge_label(e): b for e, b in sorted(self.midpoints.items())},
        }


@dataclass
class BranchStep:
    index: int
    u: Optional[int]
    u0_size: int
    u_size: int
    u_demanded: float
    light_degree: int
    light_count: int
    threshold: float


@dataclass
class SelectStep:
    index: int
    v: int
    rejected_pair: int
    rejected_prior: int


@dataclass
class EmbedTrace:
    s: int
    t: int
    n: int
    nA: int
    delta: int
    K: float
    slack: float
    rho: float
    delta_required: float
    mode: Optional[str] = None
    heavy_clique: Optional[list[int]] = None
    branch_steps: list[BranchStep] = field(default_factory=list)
    select_steps: list[SelectStep] = field(default_factory=list)
    v_size: Optional[int] = None
    v_bound: Optional[float] = None
    failure: Optional[dict] = None

    def steps(self) -> list[dict]:
        out = []
        if self.heavy_clique is not None:
            out.append({"kind": "heavy-clique", "vertices": self.heavy_clique})
        out += [{"kind": "branch", **asdict(st)} for st in self.branch_steps]
        out += [{"kind": "select", **asdict(st)} for st in self.select_steps]
        return out

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "t": self.t,
            "n": self.n,
            "nA": self.nA,
            "delta": self.delta,
            "K": self.K,
            "slack": self.slack,
            "rho": self.rho,
            "delta_required": self.delta_required,
            "mode": self.mode,
            "v_size": self.v_size,
            "v_bound": self.v_bound,
            "failure": self.failure,
            "steps": self.steps(),
        }


def _new_trace(G: BipartiteGraph, p: EmbedParams) -> EmbedTrace:
    lo, hi = degree_stats(G)
    if lo == 0:
        raise PreconditionFailed("host has isolated vertices; minimum degree must be positive")
    K = p.K if p.K is not None else hi / lo
    if hi > K * lo:
        raise PreconditionFailed(f"degrees span [{lo}, {hi}], not within [delta, {K} delta]")
    n = G.nB
    rho = lo * lo / (32 * (p.s + p.t) ** 3 * n)
    return EmbedTrace(
        s=p.s,
        t=p.t,
        n=n,
        nA=G.nA,
        delta=lo,
        K=K,
        slack=p.slack,
        rho=rho,
        delta_required=delta_threshold(p.s, p.t, p.c, n),
    )


# -- heavy-clique shortcut -------------------------------------------------


def find_heavy_clique(
    W: NeighbourhoodWeights, s: int, t: int, budget: Optional[int] = 200_000
) -> Optional[list[int]]:
    """``s+t-1`` A-vertices pairwise heavy, or None.

    Exact for cliques of size up to 6; above that the search stops after
    ``budget`` nodes and reports absence.
    """
    q = s + t - 1
    H = W.heavy_matrix(s, t)
    nA = H.shape[0]
    if nA < q:
        return None
    hdeg = np.diff(H.indptr)
    viable = hdeg >= q - 1
    limit = None if q <= HEAVY_CLIQUE_EXACT_LIMIT else budget
    nodes = 0

    def nbrs(v: int) -> np.ndarray:
        row = H.indices[H.indptr[v]:H.indptr[v + 1]]
        return row[viable[row]]

    def grow(clique: list[int], cand: np.ndarray) -> Optional[list[int]]:
        nonlocal nodes
        if len(clique) == q:
            return clique
        if len(clique) + cand.size < q:
            return None
        for i, w in enumerate(cand.tolist()):
            if len(clique) + cand.size - i < q:
                break
            nodes += 1
            if limit is not None and nodes > limit:
                raise _OutOfBudget
            later = cand[i + 1:]
            found = grow(clique + [w], np.intersect1d(later, nbrs(w), assume_unique=True))
            if found:
                return found
        return None

    try:
        for v in np.flatnonzero(viable).tolist():
            cand = nbrs(v)
            found = grow([v], cand[cand > v])
            if found:
                return found
    except _OutOfBudget:
        return None
    return None


# -- light path ------------------------------------------------------------


def _row_mask(L, u: int, nA: int) -> np.ndarray:
    mask = np.zeros(nA, dtype=bool)
    mask[L.indices[L.indptr[u]:L.indptr[u + 1]]] = True
    return mask


def _triple_blockers(G: BipartiteGraph, X: Sequence[int]) -> set[int]:
    """B-vertices adjacent to at least two of the A-vertices in ``X``."""
    seen: set[int] = set()
    twice: set[int] = set()
    for x in X:
        for b in G.neighbours(x):
            if b in seen:
                twice.add(b)
            else:
                seen.add(b)
    return twice


def find_branch_vertices(
    G: BipartiteGraph,
    W: NeighbourhoodWeights,
    p: EmbedParams,
    trace: Optional[EmbedTrace] = None,
) -> tuple[list[int], EmbedTrace]:
    """Choose ``u_1..u_{t-1}``: pairwise light, no triple sharing a B-vertex,
    and with many vertices light to every chosen one."""
    if trace is None:
        trace = _new_trace(G, p)
    s, t = p.s, p.t
    nA, n, delta = G.nA, G.nB, trace.delta
    L = W.light_matrix(s, t)
    corollary_size = 8 * (s + t) * n / delta

    def fail(step, size, demanded, reason):
        trace.failure = {"step": step, "size": size, "demanded": demanded, "reason": reason}
        raise ThresholdFailure(step, size, demanded, trace, reason)

    us: list[int] = []
    common = np.ones(nA, dtype=bool)  # vertices light to every chosen u
    for i in range(1, t):
        u0 = common if i > 1 else np.ones(nA, dtype=bool)
        u0_size = int(u0.sum())
        U = u0.copy()
        for b in _triple_blockers(G, us):
            U[list(G.neighbours(b))] = False
        u_size = int(U.sum())
        if i == 1:
            demanded = p.slack * corollary_size
            reason = "|A| below 8(s+t)n/delta"
        else:
            half = 0.5 * trace.rho ** (i - 1) * nA
            demanded = p.slack * max(half, corollary_size)
            reason = "candidate set U too small" + (
                " for 8(s+t)n/delta" if corollary_size >= half else ""
            )
        step = BranchStep(i, None, u0_size, u_size, demanded, 0, 0, p.slack * trace.rho ** i * nA)
        trace.branch_steps.append(step)
        if u_size == 0 or u_size < demanded:
            fail(i, u_size, demanded, reason)

        idx = np.flatnonzero(U)
        sub = L[idx][:, idx]
        within = np.asarray(sub.sum(axis=1)).ravel()
        k = int(np.argmax(within))  # first maximum: smallest id among ties
        u = int(idx[k])
        step.u = u
        step.light_degree = int(within[k])
        common = u0 & _row_mask(L, u, nA)
        step.light_count = int(common.sum())
        us.append(u)
        if step.light_count < step.threshold:
            fail(i, step.light_count, step.threshold, "too few vertices light to all chosen u")
    return us, trace


def find_s_vertices(
    G: BipartiteGraph,
    W: NeighbourhoodWeights,
    us: Sequence[int],
    p: EmbedParams,
    trace: Optional[EmbedTrace] = None,
) -> list[int]:
    """Greedy ``v_1..v_s`` light to every ``u`` with all branch triples
    having empty common neighbourhood."""
    if trace is None:
        trace = _new_trace(G, p)
    s, t = p.s, p.t
    if len(us) != t - 1 or len(set(us)) != t - 1:
        raise InvalidBranchSet(f"need {t - 1} distinct u's")
    thr = light_threshold(s, t)
    for i, a in enumerate(us):
        for b in us[i + 1:]:
            if not 1 <= W.weight(a, b) < thr:
                raise InvalidBranchSet(f"u-pair ({a}, {b}) is not light")

    L = W.light_matrix(s, t)
    V = np.ones(G.nA, dtype=bool)
    for u in us:
        V &= _row_mask(L, u, G.nA)
    V_ids = np.flatnonzero(V).tolist()
    bound = p.slack * (comb(t - 1, 2) + (t - 1) * (s - 1)) * comb(s + t - 1, 2) * trace.K * trace.delta
    trace.v_size = len(V_ids)
    trace.v_bound = bound
    if not len(V_ids) > bound:
        trace.failure = {"step": "select", "size": len(V_ids), "demanded": bound, "reason": "|V| not above bound"}
        raise ThresholdFailure("select", len(V_ids), bound, trace, "|V| not above the counting bound")

    pair_block = _triple_blockers(G, us)
    u_nbrs = [set(G.neighbours(u)) for u in us]
    prior_block: set[int] = set()
    chosen: list[int] = []
    rej_pair = rej_prior = 0
    for v in V_ids:
        if len(chosen) == s:
            break
        nv = G.neighbours(v)
        if any(b in pair_block for b in nv):
            rej_pair += 1
            continue
        if any(b in prior_block for b in nv):
            rej_prior += 1
            continue
        chosen.append(v)
        trace.select_steps.append(SelectStep(len(chosen), v, rej_pair, rej_prior))
        for nu in u_nbrs:
            prior_block.update(b for b in nv if b in nu)
    if len(chosen) < s:
        trace.failure = {"step": "select", "accepted": len(chosen), "needed": s}
        raise SelectionFailure(chosen, s, rej_pair, rej_prior, trace)
    return chosen


def assemble_subdivision(
    G: BipartiteGraph, branch_images: Sequence[int], P: Pattern, mode: str
) -> SubdivisionCertificate:
    """Pick a midpoint for every pattern edge.

    ``branch_images[x]`` is the host A-vertex of pattern vertex ``x``
    (S-vertices first, then T).
    """
    if mode not in ("light-path", "heavy-clique"):
        raise InvalidParams(f"unknown mode {mode!r}")
    images = list(branch_images)
    if len(images) != P.num_vertices or len(set(images)) != len(images):
        raise InvalidBranchSet("branch images must be distinct, one per pattern vertex")
    if not all(G.in_A(v) for v in images):
        raise InvalidBranchSet("branch images must lie in A")
    used: set[int] = set()
    midpoints: dict[tuple[int, int], int] = {}
    for x, y in P.edges:
        common = sorted(set(G.neighbours(images[x])).intersection(G.neighbours(images[y])))
        if not common:
            raise InvalidBranchSet(f"branch images of {P.edge_label((x, y))} have no common neighbour")
        if mode == "light-path":
            b = common[0]
            if b in used:
                raise InvariantViolation(
                    f"midpoint {b} reused for {P.edge_label((x, y))}: a branch triple shares a neighbour"
                )
        else:
            b = next((c for c in common if c not in used), None)
            if b is None:
                raise InvalidBranchSet(f"no unused common neighbour for {P.edge_label((x, y))}")
        used.add(b)
        midpoints[(x, y)] = b
    return SubdivisionCertificate(P.s, P.t, dict(enumerate(images)), midpoints, mode)


def validate_certificate(G, cert: SubdivisionCertificate, P: Pattern) -> bool:
    """Independent check that ``cert`` is a copy of the subdivision of ``P`` in ``G``.

    For a bipartite host branch images must also lie in A and midpoints in B.
    """
    if set(cert.branch) != set(range(P.num_vertices)):
        return False
    if set(cert.midpoints) != set(P.edges):
        return False
    images = list(cert.branch.values())
    mids = list(cert.midpoints.values())
    if len(set(images)) != len(images) or len(set(mids)) != len(mids):
        return False
    if set(images) & set(mids):
        return False
    nv = G.num_vertices
    if not all(0 <= v < nv for v in images + mids):
        return False
    if isinstance(G, BipartiteGraph):
        if not all(G.in_A(v) for v in images) or not all(G.in_B(b) for b in mids):
            return False
    for (x, y), b in cert.midpoints.items():
        if not (G.has_edge(b, cert.branch[x]) and G.has_edge(b, cert.branch[y])):
            return False
    return True


# -- drivers ---------------------------------------------------------------


@dataclass(frozen=True)
class EmbedResult:
    certificate: SubdivisionCertificate
    trace: EmbedTrace


def embed(G: BipartiteGraph, p: EmbedParams, W: Optional[NeighbourhoodWeights] = None) -> EmbedResult:
    """Find a copy of the 1-subdivision of ``L_{s,t}`` in ``G``.

    Raises ThresholdFailure or SelectionFailure (with trace) when the
    construction's counting requirements do not hold on this host.
    """
    if not is_balanced(G):
        raise PreconditionFailed(f"host is not balanced (|A|={G.nA}, |B|={G.nB})")
    trace = _new_trace(G, p)
    P = make_pattern(p.s, p.t)
    if W is None:
        W = neighbourhood_weights(G)

    clique = find_heavy_clique(W, p.s, p.t, p.heavy_budget)
    if clique is not None:
        trace.mode = "heavy-clique"
        trace.heavy_clique = clique
        cert = assemble_subdivision(G, clique, P, "heavy-clique")
    else:
        trace.mode = "light-path"
        us, _ = find_branch_vertices(G, W, p, trace)
        vs = find_s_vertices(G, W, us, p, trace)
        cert = assemble_subdivision(G, vs + us, P, "light-path")
    if not validate_certificate(G, cert, P):
        raise InvariantViolation("assembled certificate failed validation")
    return EmbedResult(cert, trace)


@dataclass(frozen=True)
class PipelineResult:
    certificate: SubdivisionCertificate
    trace: EmbedTrace
    regularization: RegularizeReport


def pipeline_embed(
    G: GeneralGraph,
    s: int,
    t: int,
    rp: Optional[RegularizeParams] = None,
    ep: Optional[EmbedParams] = None,
) -> PipelineResult:
    """Regularize a dense general graph, embed in the extracted host, and
    translate the certificate back to ``G``'s vertex ids."""
    if rp is None:
        rp = RegularizeParams(alpha=delta_exponent(t))
    if ep is None:
        ep = EmbedParams(s, t)
    if (ep.s, ep.t) != (s, t):
        raise InvalidParams("EmbedParams disagree with (s, t)")
    report = regularize(G, rp)
    res = embed(report.subgraph, ep)
    cert = res.certificate.translate(report.origin)
    return PipelineResult(cert, res.trace, report)
