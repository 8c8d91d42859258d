"""Edge-list text format shared by every CLI command.

::

    bip <nA> <nB>        # or: graph <n>
    <u> <v>
    ...

Indices are 0-based; in ``bip`` files B-vertices are numbered from ``nA``.
Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

import io
import os
from typing import TextIO, Union

from .errors import GraphFormatError, InvalidEdge
from .graphs import BipartiteGraph, GeneralGraph

Graph = Union[BipartiteGraph, GeneralGraph]


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_graph(text: str) -> Graph:
    lines = _tokens(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise GraphFormatError("empty graph file") from None
    try:
        if header[0] == "bip" and len(header) == 3:
            nA, nB = int(header[1]), int(header[2])
            kind = "bip"
        elif header[0] == "graph" and len(header) == 2:
            n = int(header[1])
            kind = "graph"
        else:
            raise ValueError
    except ValueError:
        raise GraphFormatError(f"line {lineno}: bad header {' '.join(header)!r}") from None

    us, vs = [], []
    for lineno, fields in lines:
        if len(fields) != 2:
            raise GraphFormatError(f"line {lineno}: expected two indices")
        try:
            us.append(int(fields[0]))
            vs.append(int(fields[1]))
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer index") from None

    if kind == "graph":
        return GeneralGraph.from_arrays(n, us, vs)

    a_idx, b_idx = [], []
    for u, v in zip(us, vs):
        if u > v:
            u, v = v, u
        if not (0 <= u < nA and nA <= v < nA + nB):
            raise InvalidEdge(f"edge ({u}, {v}) does not join A to B")
        a_idx.append(u)
        b_idx.append(v - nA)
    return BipartiteGraph.from_arrays(nA, nB, a_idx, b_idx)


def format_graph(G: Graph) -> str:
    buf = io.StringIO()
    write_graph(G, buf)
    return buf.getvalue()


def write_graph(G: Graph, out: Union[str, os.PathLike, TextIO]) -> None:
    if isinstance(out, (str, os.PathLike)):
        with open(out, "w", encoding="utf-8") as fh:
            write_graph(G, fh)
        return
    if isinstance(G, BipartiteGraph):
        out.write(f"bip {G.nA} {G.nB}\n")
    else:
        out.write(f"graph {G.n}\n")
    out.writelines(f"{u} {v}\n" for u, v in G.edges())


def read_graph(path: Union[str, os.PathLike]) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())
