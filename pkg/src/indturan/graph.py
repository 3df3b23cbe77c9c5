"""Finite simple graphs on dense integer vertex ids, with bitset adjacency.

Vertices of a graph on n vertices are exactly 0..n-1.  Adjacency is stored as
one Python int per vertex, bit w set iff vw is an edge, which makes
common-neighborhood and candidate-filtering work single AND operations.
Graphs are immutable after construction; operations return new graphs plus an
index map back to the original vertex ids where relabeling happens.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import EmptyGraph, EmptyQuery, InvalidPartition, Multigraph

# An injective map from pattern vertices to host vertices, indexed by pattern id.
VertexMap = tuple[int, ...]


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int):
    """Yield set bit positions of mask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Immutable simple graph with per-vertex bitset adjacency."""

    __slots__ = ("n", "edges", "adj")

    def __init__(self, n: int, edges: Iterable[Sequence[int]]):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        norm = set()
        for e in edges:
            u, v = e
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {(u, v)} out of range for n={n}")
            if u == v:
                raise Multigraph(f"loop at vertex {u}")
            norm.add((u, v) if u < v else (v, u))
        adj = [0] * n
        for u, v in norm:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.n = n
        self.edges = frozenset(norm)
        self.adj = tuple(adj)

    # Graphs compare by labeled structure, not isomorphism.
    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(bits(self.adj[v]))

    def edge_list(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def vertex_mask(self) -> int:
        return (1 << self.n) - 1


def common_neighborhood(g: Graph, s: Iterable[int]) -> set[int]:
    """Vertices adjacent to every member of s (members of s never qualify)."""
    sv = list(s)
    if not sv:
        raise EmptyQuery("common neighborhood of the empty set is not defined")
    mask = g.vertex_mask()
    for v in sv:
        mask &= g.adj[v]
    mask &= ~mask_of(sv)
    return set(bits(mask))


def common_neighborhood_mask(adj: Sequence[int], s: Iterable[int], universe: int) -> int:
    """Bitset form of common_neighborhood against explicit adjacency rows."""
    mask = universe
    got = 0
    for v in s:
        mask &= adj[v]
        got |= 1 << v
    return mask & ~got


def induced_subgraph(g: Graph, s: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
    """Subgraph induced on s. Returns (graph, index map new id -> old id)."""
    keep = sorted(set(s))
    for v in keep:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
    pos = {v: i for i, v in enumerate(keep)}
    edges = [(pos[u], pos[v]) for u, v in g.edges if u in pos and v in pos]
    return Graph(len(keep), edges), tuple(keep)


def bipartite_between(g: Graph, x: Iterable[int], y: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
    """Spanning bipartite subgraph on x ∪ y keeping only cross edges.

    Returns (graph, index map new id -> old id); x comes first in the new ids.
    """
    xs, ys = sorted(set(x)), sorted(set(y))
    if set(xs) & set(ys):
        raise InvalidPartition("sides overlap")
    keep = xs + ys
    for v in keep:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
    pos = {v: i for i, v in enumerate(keep)}
    xset = set(xs)
    edges = []
    for u, v in g.edges:
        if u in pos and v in pos and ((u in xset) != (v in xset)):
            edges.append((pos[u], pos[v]))
    return Graph(len(keep), edges), tuple(keep)


def degree_stats(g: Graph) -> tuple[int, int, Fraction]:
    """(min degree, max degree, average degree as an exact rational)."""
    if g.n == 0:
        raise EmptyGraph("degree stats need at least one vertex")
    degs = [g.degree(v) for v in range(g.n)]
    return min(degs), max(degs), Fraction(2 * g.m, g.n)


def is_k_almost_regular(g: Graph, k: Fraction | int) -> bool:
    """True iff max degree <= k * min degree, exactly."""
    if g.n == 0:
        raise EmptyGraph("regularity of the empty graph is not defined")
    k = Fraction(k)
    if k < 1:
        raise ValueError("k must be at least 1")
    dmin, dmax, _ = degree_stats(g)
    return Fraction(dmax) <= k * dmin


def bipartition(g: Graph) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """A 2-coloring (side containing the least vertex of each component first),
    or None if some component is odd-cyclic."""
    color = [-1] * g.n
    for start in range(g.n):
        if color[start] != -1:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            u = queue.pop()
            for w in bits(g.adj[u]):
                if color[w] == -1:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return None
    side0 = tuple(v for v in range(g.n) if color[v] == 0)
    side1 = tuple(v for v in range(g.n) if color[v] == 1)
    return side0, side1


@dataclass(frozen=True)
class Host:
    """A host graph, an optional (X, Y) vertex partition, and the K_{s,s} size s."""

    graph: Graph
    s: int
    partition: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("s must be positive")
        if self.partition is not None:
            x, y = self.partition
            xs, ys = set(x), set(y)
            if xs & ys or len(xs) != len(x) or len(ys) != len(y):
                raise InvalidPartition("partition sides must be disjoint and duplicate-free")
            if xs | ys != set(range(self.graph.n)):
                raise InvalidPartition("partition must cover all vertices")
            object.__setattr__(self, "partition", (tuple(sorted(xs)), tuple(sorted(ys))))


def is_injective(vm: VertexMap) -> bool:
    return len(set(vm)) == len(vm)


# --- external formats -------------------------------------------------------
#
# JSON schema: {"n": int, "edges": [[u, v], ...]} with optional "roots": [...]
# and "partition": {"X": [...], "Y": [...]}.  Lists are sorted so output is
# byte-stable for a given graph.


def graph_to_json_dict(g: Graph, roots: Iterable[int] | None = None,
                       partition: tuple[Iterable[int], Iterable[int]] | None = None) -> dict:
    d: dict = {"n": g.n, "edges": [list(e) for e in g.edge_list()]}
    if roots is not None:
        d["roots"] = sorted(roots)
    if partition is not None:
        d["partition"] = {"X": sorted(partition[0]), "Y": sorted(partition[1])}
    return d


def graph_from_json_dict(d: dict) -> tuple[Graph, Optional[tuple[int, ...]],
                                           Optional[tuple[tuple[int, ...], tuple[int, ...]]]]:
    g = Graph(d["n"], [tuple(e) for e in d.get("edges", [])])
    roots = tuple(sorted(d["roots"])) if "roots" in d else None
    part = None
    if "partition" in d:
        part = (tuple(sorted(d["partition"]["X"])), tuple(sorted(d["partition"]["Y"])))
    return g, roots, part


def dumps_graph(g: Graph, roots=None, partition=None) -> str:
    return json.dumps(graph_to_json_dict(g, roots, partition), sort_keys=True, indent=2) + "\n"


def loads_graph(text: str):
    return graph_from_json_dict(json.loads(text))


def to_dot(g: Graph, roots: Iterable[int] | None = None,
           partition: tuple[Iterable[int], Iterable[int]] | None = None) -> str:
    """GraphViz text; roots drawn as double circles, partition as two ranks."""
    rootset = set(roots) if roots else set()
    lines = ["graph g {"]
    if partition is not None:
        xs, ys = (sorted(partition[0]), sorted(partition[1]))
        lines.append("  // partition X then Y")
        for v in xs:
            shape = "doublecircle" if v in rootset else "circle"
            lines.append(f'  {v} [shape={shape}, color=blue];')
        for v in ys:
            shape = "doublecircle" if v in rootset else "circle"
            lines.append(f'  {v} [shape={shape}, color=red];')
    else:
        for v in range(g.n):
            shape = "doublecircle" if v in rootset else "circle"
            lines.append(f"  {v} [shape={shape}];")
    for u, v in g.edge_list():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
