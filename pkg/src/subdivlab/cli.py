"""``subdivlab`` command-line entry point.

Exit codes: 0 success, 1 usage or I/O error, 2 structured mathematical
failure (a threshold not met, a lemma hypothesis not satisfied, ...).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Optional

import numpy as np

from . import __version__
from .bounds import bound_table
from .constructions import deletion_lower_bound, gq_incidence, random_bipartite
from .embedder import EmbedParams, delta_exponent, embed, pipeline_embed, validate_certificate
from .errors import InputError, StructuredFailure, SubdivlabError
from .graphs import BipartiteGraph, GeneralGraph, build_graph, make_pattern, subdivide
from .io import read_graph, write_graph
from .oracle.extremal import extremal_number
from .oracle.lemmas import (
    check_lightcorollary,
    check_locallydense,
    check_manylight,
    check_turan_step,
)
from .regularizer import RegularizeParams, regularize

EXPERIMENT_COLUMNS = [
    "seed",
    "nA",
    "nB",
    "edges",
    "min_degree",
    "max_degree",
    "success",
    "mode",
    "failure",
    "failure_step",
    "certificate_size",
]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _budget() -> Optional[int]:
    raw = os.environ.get("SUBDIVLAB_BUDGET")
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"SUBDIVLAB_BUDGET must be an integer, got {raw!r}") from None


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _seed_list(text: str) -> list[int]:
    """``"0-99"``, ``"1,5,9"`` or a mix; empty string for no seeds."""
    seeds: list[int] = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        if "-" in part:
            lo, hi = part.split("-", 1)
            seeds.extend(range(_seed(lo), _seed(hi) + 1))
        else:
            seeds.append(_seed(part))
    return seeds


def _id_list(text: str) -> list[int]:
    return _seed_list(text)


def _config(args: argparse.Namespace) -> dict:
    return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in sorted(vars(args).items()) if k != "func"}


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(text: str, args) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _envelope(command: str, args, result: dict) -> dict:
    return {"command": command, "version": __version__, "config": _config(args), **result}


def _bipartite(G) -> BipartiteGraph:
    if not isinstance(G, BipartiteGraph):
        raise InputError("this command needs a bipartite ('bip') host file")
    return G


def _general(G) -> GeneralGraph:
    return G.to_general() if isinstance(G, BipartiteGraph) else G


# -- commands --------------------------------------------------------------


def cmd_gen(args) -> int:
    if args.kind == "random":
        G = random_bipartite(args.nA, args.nB, args.p, args.seed)
        report = {"nA": G.nA, "nB": G.nB, "edges": G.num_edges}
    elif args.kind == "deletion":
        G, rep = deletion_lower_bound(
            args.n, args.t, args.seed, args.constant, exact=not args.inexact, budget=_budget()
        )
        report = rep.to_dict()
    else:
        G = gq_incidence(args.q)
        report = {"nA": G.nA, "nB": G.nB, "edges": G.num_edges, "q": args.q}
    if not args.out:
        raise InputError("gen needs --out <file.graph>")
    write_graph(G, args.out)
    text = _dumps(_envelope("gen", args, {"kind": args.kind, "report": report}))
    with open(args.out + ".json", "w", encoding="utf-8") as fh:
        fh.write(text)
    sys.stdout.write(text)
    return 0


def cmd_regularize(args) -> int:
    G = _general(read_graph(args.input))
    rp = RegularizeParams(alpha=args.alpha, C=args.C, K_target=args.K, seed=args.seed)
    rep = regularize(G, rp)
    write_graph(rep.subgraph, args.output)
    result = rep.to_dict()
    result["origin"] = list(rep.origin)
    _emit(_dumps(_envelope("regularize", args, result)), args)
    return 0


def _embed_params(args) -> EmbedParams:
    return EmbedParams(args.s, args.t, K=args.K, c=args.c, slack=args.slack)


def cmd_embed(args) -> int:
    G = _bipartite(read_graph(args.host))
    try:
        res = embed(G, _embed_params(args))
    except StructuredFailure as exc:
        _emit(_dumps(_envelope("embed", args, {"success": False, **exc.to_dict()})), args)
        return 2
    body = {
        "success": True,
        "mode": res.trace.mode,
        **res.certificate.to_dict(),
        "trace": res.trace.steps(),
        "diagnostics": {k: v for k, v in res.trace.to_dict().items() if k != "steps"},
    }
    _emit(_dumps(_envelope("embed", args, body)), args)
    return 0


def cmd_pipeline(args) -> int:
    G = _general(read_graph(args.input))
    alpha = args.alpha if args.alpha is not None else delta_exponent(args.t)
    rp = RegularizeParams(alpha=alpha, C=args.C, K_target=args.K_target, seed=args.seed)
    try:
        res = pipeline_embed(G, args.s, args.t, rp, _embed_params(args))
    except StructuredFailure as exc:
        _emit(_dumps(_envelope("pipeline", args, {"success": False, **exc.to_dict()})), args)
        return 2
    body = {
        "success": True,
        "mode": res.trace.mode,
        **res.certificate.to_dict(),
        "valid_in_input": validate_certificate(G, res.certificate, make_pattern(args.s, args.t)),
        "trace": res.trace.steps(),
        "regularization": res.regularization.to_dict(),
    }
    _emit(_dumps(_envelope("pipeline", args, body)), args)
    return 0


def cmd_verify(args) -> int:
    G = _bipartite(read_graph(args.host))
    U = args.U if args.U is not None else list(G.partA)
    delta = args.delta if args.delta is not None else min((G.degree(a) for a in G.partA), default=0)
    budget = _budget()
    try:
        if args.which == "locallydense":
            rep = check_locallydense(G, U, delta)
        elif args.which == "manylight":
            rep = check_manylight(G, args.s, args.t, args.assume_free, budget)
        elif args.which == "turan":
            if args.b is None:
                raise InputError("turan needs --b <B-vertex id>")
            rep = check_turan_step(G, args.b, args.s, args.t, args.assume_free, budget)
        else:
            rep = check_lightcorollary(G, U, args.s, args.t, delta, args.assume_free, budget)
    except StructuredFailure as exc:
        _emit(_dumps(_envelope("verify-lemma", args, {"verdict": "precondition_failed", **exc.to_dict()})), args)
        return 2
    body = {"verdict": "holds" if rep.holds else "violated", **rep.to_dict()}
    _emit(_dumps(_envelope("verify-lemma", args, body)), args)
    return 0 if rep.holds else 2


_PATTERN = re.compile(r"^(?:L(\d+),(\d+)|K(\d+),(\d+)|K(\d+)|C(\d+))$")


def parse_pattern(text: str) -> tuple[GeneralGraph, str]:
    """``Ls,t`` / ``Kt`` / ``Ka,b`` / ``Ck`` to a base graph and a label."""
    m = _PATTERN.match(text.replace(" ", ""))
    if not m:
        raise InputError(f"unrecognised pattern {text!r}; use Ls,t, Kt, Ka,b or Ck")
    ls, lt, ka, kb, kt, ck = m.groups()
    if ls:
        return make_pattern(int(ls), int(lt)).graph(), f"L{ls},{lt}"
    if ka:
        a, b = int(ka), int(kb)
        edges = [(i, a + j) for i in range(a) for j in range(b)]
        return build_graph(a + b, edges), f"K{a},{b}"
    if kt:
        t = int(kt)
        return build_graph(t, [(i, j) for i in range(t) for j in range(i + 1, t)]), f"K{t}"
    k = int(ck)
    if k < 3:
        raise InputError("cycles need length at least 3")
    return build_graph(k, [(i, (i + 1) % k) for i in range(k)]), f"C{k}"


def cmd_extremal(args) -> int:
    base, label = parse_pattern(args.pattern)
    H = base if args.plain else subdivide(base)
    name = label if args.plain else f"sub({label})"
    rec = extremal_number(args.n, H, mode=args.mode, name=name)
    body = {
        "n": rec.n,
        "pattern": rec.pattern,
        "value": rec.value,
        "mode": rec.mode,
        "witness": [list(e) for e in rec.witness.edges()],
    }
    _emit(_dumps(_envelope("extremal", args, body)), args)
    return 0


def cmd_bound_table(args) -> int:
    rows = bound_table(range(args.t_min, args.t_max + 1))
    dicts = [r.to_dict(comparisons=not args.no_comparisons) for r in rows]
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(dicts[0]) if dicts else ["t"], lineterminator="\n")
        writer.writeheader()
        writer.writerows(dicts)
        _emit(buf.getvalue(), args)
    else:
        _emit(_dumps(_envelope("bound-table", args, {"rows": dicts})), args)
    return 0 if all(r.ordered for r in rows) else 2


def experiment_row(kind: str, seed: int, params: dict) -> dict:
    """One seeded run; module-level so process pools can pickle it."""
    s, t = params["s"], params["t"]
    ep = EmbedParams(s, t, c=params["c"], slack=params["slack"])
    start = time.perf_counter()
    if kind == "embed":
        n = params["n"]
        G = random_bipartite(n, n, min(1.0, n ** (params["exponent"] - 1.0)), seed)
        host = G
    else:
        n = params["n"]
        rng = np.random.default_rng(seed)
        iu = np.triu_indices(n, 1)
        keep = rng.random(iu[0].size) < params["p"]
        host = GeneralGraph.from_arrays(n, iu[0][keep], iu[1][keep])
    row = {
        "seed": seed,
        "nA": host.nA if isinstance(host, BipartiteGraph) else host.n,
        "nB": host.nB if isinstance(host, BipartiteGraph) else 0,
        "edges": host.num_edges,
    }
    degs = host.degrees()
    row["min_degree"], row["max_degree"] = min(degs), max(degs)
    try:
        if kind == "embed":
            res = embed(host, ep)
            ok = validate_certificate(host, res.certificate, make_pattern(s, t))
        else:
            alpha = delta_exponent(t)
            res = pipeline_embed(host, s, t, RegularizeParams(alpha=alpha, C=params["C"], seed=seed), ep)
            ok = validate_certificate(host, res.certificate, make_pattern(s, t))
        row.update(
            success=ok,
            mode=res.trace.mode,
            failure="",
            failure_step="",
            certificate_size=len(res.certificate.branch) + len(res.certificate.midpoints),
        )
    except StructuredFailure as exc:
        row.update(
            success=False,
            mode=getattr(getattr(exc, "trace", None), "mode", "") or "",
            failure=type(exc).__name__,
            failure_step=getattr(exc, "step", ""),
            certificate_size=0,
        )
    row["wall_time"] = round(time.perf_counter() - start, 6)
    return row


def cmd_experiment(args) -> int:
    params = {
        "s": args.s,
        "t": args.t,
        "n": args.n,
        "exponent": args.exponent,
        "p": args.p,
        "C": args.C,
        "c": args.c,
        "slack": args.slack,
    }
    seeds = args.seeds
    if args.jobs > 1 and len(seeds) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(experiment_row, [args.kind] * len(seeds), seeds, [params] * len(seeds)))
    else:
        rows = [experiment_row(args.kind, seed, params) for seed in seeds]
    columns = EXPERIMENT_COLUMNS + (["wall_time"] if args.timing else [])
    for row in rows:
        if not args.timing:
            row.pop("wall_time")
    rate = sum(r["success"] for r in rows) / len(rows) if rows else None
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        if rows:
            buf.write(f"# summary,runs={len(rows)},successes={sum(r['success'] for r in rows)},success_rate={rate}\n")
        text = buf.getvalue()
    else:
        summary = {"runs": len(rows), "successes": sum(r["success"] for r in rows), "success_rate": rate}
        text = _dumps(_envelope("experiment", args, {"rows": rows, "summary": summary}))
    _emit(text, args)
    return 0


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=_seed, default=0, help="64-bit seed (default 0)")
    common.add_argument("--format", choices=["csv", "json"], default="json")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    parser = _Parser(prog="subdivlab", description="Find and study 1-subdivisions of L_{s,t}.")
    parser.add_argument("--version", action="version", version=f"subdivlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", parents=[common], help="generate a host graph")
    p.add_argument("--kind", choices=["random", "deletion", "gq"], required=True)
    p.add_argument("--nA", type=int, default=100)
    p.add_argument("--nB", type=int, default=100)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--n", type=int, default=30)
    p.add_argument("--t", type=int, default=3)
    p.add_argument("--constant", type=float, default=1.0, help="factor on the deletion-method probability")
    p.add_argument("--inexact", action="store_true", help="budgeted copy search (SUBDIVLAB_BUDGET)")
    p.add_argument("--q", type=int, default=2)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("regularize", parents=[common], help="extract a balanced almost-regular bipartite subgraph")
    p.add_argument("--alpha", type=_fraction, required=True)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--K", type=float, default=None, help="degree-ratio target (default 60*2^(1+1/alpha^2))")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_regularize)

    def embed_flags(p):
        p.add_argument("--s", type=int, required=True)
        p.add_argument("--t", type=int, required=True)
        p.add_argument("--c", type=float, default=1.0)
        p.add_argument("--slack", type=float, default=1.0)
        p.add_argument("--K", type=float, default=None, help="degree-ratio bound (default: measured)")

    p = sub.add_parser("embed", parents=[common], help="embed the subdivision of L_{s,t} in a bipartite host")
    embed_flags(p)
    p.add_argument("host")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("pipeline", parents=[common], help="regularize a general graph, then embed")
    embed_flags(p)
    p.add_argument("--alpha", type=_fraction, default=None, help="default (t-2)/(2t-3)")
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--K-target", dest="K_target", type=float, default=None)
    p.add_argument("input")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("verify-lemma", parents=[common], help="check a codegree inequality on a host")
    p.add_argument("--which", choices=["locallydense", "manylight", "turan", "lightcorollary"], required=True)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--t", type=int, default=3)
    p.add_argument("--delta", type=_fraction, default=None, help="default: minimum A-degree")
    p.add_argument("--U", type=_id_list, default=None, help="A-vertex ids, e.g. 0-9,12 (default: all of A)")
    p.add_argument("--b", type=int, default=None, help="B-vertex for --which turan")
    p.add_argument("--assume-free", action="store_true", help="assert freeness beyond oracle limits")
    p.add_argument("host")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("extremal", parents=[common], help="exact ex(n, H) for tiny n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pattern", required=True, help="Ls,t | Kt | Ka,b | Ck (subdivided unless --plain)")
    p.add_argument("--mode", choices=["exhaustive", "pruned", "canonical-pruned"], default="pruned")
    p.add_argument("--plain", action="store_true", help="forbid the pattern itself, not its subdivision")
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("bound-table", parents=[common], help="exponent table for ex(n, H_t)")
    p.add_argument("--t-min", type=int, default=3)
    p.add_argument("--t-max", type=int, default=10)
    p.add_argument("--no-comparisons", action="store_true")
    p.set_defaults(func=cmd_bound_table)

    p = sub.add_parser("experiment", parents=[common], help="seeded batch of embed or pipeline runs")
    p.add_argument("--kind", choices=["embed", "pipeline"], default="embed")
    p.add_argument("--seeds", type=_seed_list, default=list(range(10)), help="e.g. 0-99 or 1,4,7")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--exponent", type=float, default=0.7, help="host degree ~ n^exponent (embed)")
    p.add_argument("--p", type=float, default=0.1, help="edge probability (pipeline)")
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--t", type=int, default=3)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--slack", type=float, default=1.0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="add a wall_time column (breaks byte-identity)")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except StructuredFailure as exc:
        print(f"subdivlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (SubdivlabError, OSError) as exc:
        print(f"subdivlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
