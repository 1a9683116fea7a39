"""Reference parse graph with every LZ77 edge, and a plain DAG shortest path.

Quadratic-or-worse by design: this is the ground truth the fast generator is
checked against, meant for texts of a few hundred symbols.
"""

from __future__ import annotations

from dataclasses import dataclass

from .encoders import CostModel
from .parser import Copy, Literal, Parsing
from .suffix_index import as_symbols


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    d: int
    length: int
    cost: int

    @property
    def is_literal(self) -> bool:
        return self.d == 0


@dataclass
class ParseGraph:
    """Vertices 0..n; edges[i] lists the literal edge then copies by length."""

    n: int
    text: list[int]
    edges: list[list[Edge]]

    def copy_edges(self, i: int) -> list[Edge]:
        return [e for e in self.edges[i] if not e.is_literal]

    @property
    def edge_count(self) -> int:
        return sum(len(star) for star in self.edges)


def match_table(data, max_distance: int | None = None) -> list[list[tuple[int, int]]]:
    """For each i, (length, d) for every copy length, d being the rightmost source.

    lcp values come from the recurrence lcp(p, i) = lcp(p + 1, i + 1) + 1 on a
    symbol match, filled from the end of the text one row at a time.
    """
    s = as_symbols(data).tolist()
    n = len(s)
    table: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    below = [0] * (n + 1)  # below[p] = lcp(p, i + 1)
    for i in range(n - 1, -1, -1):
        row = [0] * (n + 1)
        c = s[i]
        for p in range(i):
            if s[p] == c:
                row[p] = below[p + 1] + 1
        out = table[i]
        longest = 0
        lo = 0 if not max_distance else max(0, i - max_distance)
        for p in range(i - 1, lo - 1, -1):
            h = row[p]
            if h > longest:
                d = i - p
                out.extend((length, d) for length in range(longest + 1, h + 1))
                longest = h
        below = row
    return table


def build_full_graph(data, model: CostModel, max_distance: int | None = None,
                     matches: list[list[tuple[int, int]]] | None = None) -> ParseGraph:
    """All edges: for each i and length, the copy from the rightmost earlier start.

    `matches` (from match_table) can be shared between cost models.
    """
    s = as_symbols(data).tolist()
    n = len(s)
    if matches is None:
        matches = match_table(s, max_distance)
    lit = model.literal_cost
    edges: list[list[Edge]] = []
    for i in range(n):
        star = [Edge(i, i + 1, 0, 1, lit)]
        star.extend(Edge(i, i + length, d, length, model.copy_cost(d, length)) for length, d in matches[i])
        edges.append(star)
    return ParseGraph(n, s, edges)


def shortest_path(n: int, stars, text: list[int]) -> Parsing:
    """DAG shortest path from 0 to n over per-vertex edge lists.

    On equal cost the first relaxation wins: the longest phrase into a
    vertex, and the literal (d = 0) before a copy from the same source.
    """
    inf = float("inf")
    cost = [inf] * (n + 1)
    pred: list[Edge | None] = [None] * (n + 1)
    cost[0] = 0
    for i in range(n):
        for e in sorted(stars[i], key=lambda e: (e.target, e.d)):
            c = cost[i] + e.cost
            if c < cost[e.target]:
                cost[e.target] = c
                pred[e.target] = e
    path = []
    j = n
    while j > 0:
        e = pred[j]
        path.append(e)
        j = e.source
    path.reverse()
    phrases = [Literal(text[e.source]) if e.is_literal else Copy(e.d, e.length) for e in path]
    return Parsing(phrases, int(cost[n]))


def oracle_shortest_path(graph: ParseGraph, model: CostModel | None = None) -> Parsing:
    return shortest_path(graph.n, graph.edges, graph.text)


def enumerate_maximal_edges(graph: ParseGraph, model: CostModel | None = None) -> list[list[Edge]]:
    """Literal edge plus every copy edge whose one-longer successor costs more (or is absent)."""
    out = []
    for i in range(graph.n):
        copies = graph.copy_edges(i)
        kept = [graph.edges[i][0]]
        for k, e in enumerate(copies):
            if k + 1 == len(copies) or e.cost < copies[k + 1].cost:
                kept.append(e)
        out.append(kept)
    return out


def to_dot(graph: ParseGraph, maximal_only: bool = False) -> str:
    stars = enumerate_maximal_edges(graph) if maximal_only else graph.edges
    lines = ["digraph G {", "  rankdir=LR;"]
    for i in range(graph.n + 1):
        lines.append(f'  v{i} [label="{i}"];')
    for star in stars:
        for e in star:
            label = f"lit {e.cost}b" if e.is_literal else f"<{e.d},{e.length}> {e.cost}b"
            lines.append(f'  v{e.source} -> v{e.target} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
