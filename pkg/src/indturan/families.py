"""Rooted graph families, gluing powers, and the K_{t,t} reduction.

A rooted graph is a graph with a distinguished proper subset of vertices, the
roots.  The families built here are the bases of the realizability chains:

* height_two_tree(r, t): center, r middle vertices, t leaves under each middle
  vertex; rooted at the leaves.
* tree_r11(r): center with r paths of length 2 and one pendant edge; rooted at
  the far endpoints and the pendant vertex.
* rooted_path(length): a path rooted at its two endpoints.
* leaf_rooted_star(r): a star rooted at its leaves (its powers are complete
  bipartite graphs).

rooted_power glues l copies along the shared roots; attach_ktt adds a crossed
K_{t,t} to a bipartite graph (the "reduction" that raises density by one when
t = 1).  Descriptor strings like "Trt:r=3,t=1" name all of these for the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import (
    DegenerateRoot,
    EmptyBlowup,
    Multigraph,
    NotBipartite,
    RootEdgeCollision,
    TooLarge,
)
from .graph import Graph, bipartition

Parts = tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class RootedGraph:
    """A graph together with a proper subset of root vertices.

    copy_maps is populated by rooted_power: copy_maps[c][v] is the vertex of
    the power that copy c's vertex v (in the base numbering) maps to.  It is
    carried for downstream extraction and ignored by equality.
    """

    graph: Graph
    roots: frozenset[int]
    copy_maps: Optional[tuple[tuple[int, ...], ...]] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "roots", frozenset(self.roots))
        if self.graph.n == 0:
            raise DegenerateRoot("rooted graph needs at least one vertex")
        if not all(0 <= v < self.graph.n for v in self.roots):
            raise ValueError("root outside vertex range")
        if len(self.roots) >= self.graph.n:
            raise DegenerateRoot("roots must form a proper subset of the vertices")

    def non_roots(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.graph.n) if v not in self.roots)


@dataclass(frozen=True)
class BipartiteTemplate:
    """A bipartite graph with an ordered bipartition (A, B); all edges cross."""

    graph: Graph
    parts: Parts

    def __post_init__(self):
        a, b = self.parts
        sa, sb = set(a), set(b)
        if sa & sb or len(sa) != len(a) or len(sb) != len(b):
            raise NotBipartite("parts must be disjoint and duplicate-free")
        if sa | sb != set(range(self.graph.n)):
            raise NotBipartite("parts must cover all vertices")
        for u, v in self.graph.edges:
            if (u in sa) == (v in sa):
                raise NotBipartite(f"edge {(u, v)} lies inside one part")
        object.__setattr__(self, "parts", (tuple(sorted(sa)), tuple(sorted(sb))))

    @property
    def a_side(self) -> tuple[int, ...]:
        return self.parts[0]

    @property
    def b_side(self) -> tuple[int, ...]:
        return self.parts[1]


@dataclass(frozen=True)
class NeighborhoodHypergraph:
    """Ground set A with one hyperedge N_H(b) per B-vertex, multiplicity kept."""

    ground: tuple[int, ...]
    hyperedges: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class BlowupHypergraph:
    """m fresh vertices per ground vertex; every edge replaced by the complete
    multipartite family over its parts."""

    pattern: NeighborhoodHypergraph
    m: int
    parts: tuple[tuple[int, ...], ...]
    hyperedges: tuple[frozenset[int], ...]


# --- constructors ------------------------------------------------------------


def height_two_tree(r: int, t: int) -> RootedGraph:
    """Center 0, middles 1..r, leaf j of middle i is r + (i-1)t + j; roots = leaves."""
    if r < 1 or t < 1:
        raise DegenerateRoot("height_two_tree needs r >= 1 and t >= 1")
    edges = [(0, i) for i in range(1, r + 1)]
    leaves = []
    for i in range(1, r + 1):
        for j in range(1, t + 1):
            z = r + (i - 1) * t + j
            edges.append((i, z))
            leaves.append(z)
    return RootedGraph(Graph(1 + r + r * t, edges), frozenset(leaves))


def tree_r11(r: int) -> RootedGraph:
    """Center 0, paths 0-i-(r+i) for i in 1..r, pendant edge 0-(2r+1);
    roots are the path ends r+1..2r and the pendant vertex."""
    if r < 1:
        raise DegenerateRoot("tree_r11 needs r >= 1")
    edges = [(0, i) for i in range(1, r + 1)]
    edges += [(i, r + i) for i in range(1, r + 1)]
    edges.append((0, 2 * r + 1))
    roots = set(range(r + 1, 2 * r + 1)) | {2 * r + 1}
    return RootedGraph(Graph(2 * r + 2, edges), frozenset(roots))


def rooted_path(length: int) -> RootedGraph:
    """Path 0-1-...-length rooted at the two endpoints."""
    if length < 2:
        raise DegenerateRoot("rooted_path needs length >= 2 (shorter paths have no interior)")
    edges = [(i, i + 1) for i in range(length)]
    return RootedGraph(Graph(length + 1, edges), frozenset({0, length}))


def leaf_rooted_star(r: int) -> RootedGraph:
    """Star with center 0 and leaves 1..r, rooted at the leaves."""
    if r < 1:
        raise DegenerateRoot("leaf_rooted_star needs r >= 1")
    return RootedGraph(Graph(r + 1, [(0, i) for i in range(1, r + 1)]), frozenset(range(1, r + 1)))


def rooted_power(f: RootedGraph, l: int, allow_root_edges: bool = False) -> RootedGraph:
    """l copies of f glued along the roots, disjoint elsewhere.

    Vertex numbering: sorted roots become 0..|R|-1; copy c's sorted non-roots
    follow consecutively.  copy_maps records the per-copy embeddings.

    An edge inside the root set would be contributed by every copy; by default
    that collision is surfaced as RootEdgeCollision rather than silently
    deduplicated.  Passing allow_root_edges=True opts into the set semantics
    (the edge appears once, shared by all copies), which is what gluing an
    already-reduced graph means; then e = l*e(F) - (l-1)*e(F[R]).
    """
    if l < 1:
        raise ValueError("power needs l >= 1")
    roots = sorted(f.roots)
    if l >= 2 and not allow_root_edges:
        rset = f.roots
        for u, v in f.graph.edges:
            if u in rset and v in rset:
                raise RootEdgeCollision(f"edge {(u, v)} lies inside the root set")
    non = f.non_roots()
    q = len(non)
    base_pos = {v: i for i, v in enumerate(roots)}
    maps = []
    for c in range(l):
        m = [0] * f.graph.n
        for v in range(f.graph.n):
            if v in f.roots:
                m[v] = base_pos[v]
            else:
                m[v] = len(roots) + c * q + non.index(v)
        maps.append(tuple(m))
    edges = []
    for cm in maps:
        for u, v in f.graph.edges:
            edges.append((cm[u], cm[v]))
    g = Graph(len(roots) + l * q, edges)
    return RootedGraph(g, frozenset(range(len(roots))), copy_maps=tuple(maps))


def theta(length: int, t: int) -> Graph:
    """t internally disjoint paths of the given length between two shared ends."""
    if t < 1:
        raise ValueError("theta needs t >= 1")
    if length < 1:
        raise ValueError("theta needs length >= 1")
    if length == 1:
        if t >= 2:
            raise Multigraph("length-1 theta with t >= 2 would duplicate the edge")
        return Graph(2, [(0, 1)])
    return rooted_power(rooted_path(length), t).graph


def attach_ktt(h: BipartiteTemplate, t: int) -> BipartiteTemplate:
    """Add parts C (glued completely to B) and D (glued completely to A) with a
    complete C-D crossing; C joins the A side, D the B side.  t = 0 is identity."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0:
        return h
    n = h.graph.n
    c_new = tuple(range(n, n + t))
    d_new = tuple(range(n + t, n + 2 * t))
    edges = list(h.graph.edges)
    edges += [(c, d) for c in c_new for d in d_new]
    edges += [(a, d) for a in h.a_side for d in d_new]
    edges += [(b, c) for b in h.b_side for c in c_new]
    g = Graph(n + 2 * t, edges)
    return BipartiteTemplate(g, (h.a_side + c_new, h.b_side + d_new))


def attach_ktt_rooted(f: RootedGraph, parts: Parts, t: int) -> RootedGraph:
    """attach_ktt on the underlying graph; the 2t new vertices become roots."""
    template = BipartiteTemplate(f.graph, parts)  # raises NotBipartite if unfit
    if t == 0:
        return f
    reduced = attach_ktt(template, t)
    new = set(range(f.graph.n, f.graph.n + 2 * t))
    return RootedGraph(reduced.graph, frozenset(f.roots) | new)


def reduced_parts(parts: Parts, n: int, t: int) -> Parts:
    """Parts of attach_ktt(_, t) applied to a graph on n vertices with `parts`."""
    if t == 0:
        return parts
    c_new = tuple(range(n, n + t))
    d_new = tuple(range(n + t, n + 2 * t))
    return (tuple(sorted(parts[0] + c_new)), tuple(sorted(parts[1] + d_new)))


def power_parts(base_parts: Parts, power: RootedGraph) -> Parts:
    """Bipartition of a rooted power inherited per copy from the base parts."""
    if power.copy_maps is None:
        raise ValueError("power carries no copy maps")
    a, b = set(), set()
    for cm in power.copy_maps:
        a.update(cm[v] for v in base_parts[0])
        b.update(cm[v] for v in base_parts[1])
    if a & b:
        raise NotBipartite("copies disagree on the inherited parts")
    return tuple(sorted(a)), tuple(sorted(b))


def neighborhood_hypergraph(h: BipartiteTemplate) -> NeighborhoodHypergraph:
    """Hyperedges are the A-side neighborhoods of B-vertices, with multiplicity."""
    edges = tuple(frozenset(h.graph.neighbors(b)) for b in h.b_side)
    return NeighborhoodHypergraph(h.a_side, edges)


_BLOWUP_BUDGET = 200_000


def blowup(fh: NeighborhoodHypergraph, m: int) -> BlowupHypergraph:
    """Replace each ground vertex by m fresh vertices and each hyperedge by the
    complete multipartite family over its parts."""
    if m < 1:
        raise EmptyBlowup("blowup needs m >= 1")
    index = {v: i for i, v in enumerate(fh.ground)}
    parts = tuple(tuple(range(i * m, (i + 1) * m)) for i in range(len(fh.ground)))
    total = sum(m ** len(e) for e in fh.hyperedges)
    if total > _BLOWUP_BUDGET:
        raise TooLarge(f"blowup would create {total} hyperedges")
    hyperedges: list[frozenset[int]] = []
    for e in fh.hyperedges:
        combos = [frozenset()]
        for v in sorted(e):
            combos = [c | {w} for c in combos for w in parts[index[v]]]
        hyperedges.extend(combos)
    return BlowupHypergraph(fh, m, parts, tuple(hyperedges))


def complete_bipartite_template(s: int, t: int) -> BipartiteTemplate:
    if s < 1 or t < 1:
        raise ValueError("complete bipartite template needs both sides nonempty")
    a = tuple(range(s))
    b = tuple(range(s, s + t))
    return BipartiteTemplate(Graph(s + t, [(u, v) for u in a for v in b]), (a, b))


def as_graph(obj) -> Graph:
    if isinstance(obj, Graph):
        return obj
    if isinstance(obj, RootedGraph):
        return obj.graph
    if isinstance(obj, BipartiteTemplate):
        return obj.graph
    raise TypeError(f"no graph view for {type(obj).__name__}")


def as_template(obj) -> BipartiteTemplate:
    """View as a bipartite template; the side containing vertex 0 becomes A."""
    if isinstance(obj, BipartiteTemplate):
        return obj
    g = as_graph(obj)
    parts = bipartition(g)
    if parts is None:
        raise NotBipartite("graph has an odd cycle")
    a, b = parts
    if 0 in b:
        a, b = b, a
    return BipartiteTemplate(g, (a, b))


# --- descriptor mini-language -------------------------------------------------
#
# kind[:key=value,...]; values are integers or parenthesized descriptors.
#   Trt:r=3,t=1   Tr11:r=3   path:len=3   star:r=4   theta:len=4,t=3
#   Kst:s=2,t=3   power:base=(path:len=2),l=2   f1:base=(Trt:r=2,t=1)


def _split_args(text: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ValueError(f"unbalanced ')' in {text!r}")
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise ValueError(f"unbalanced '(' in {text!r}")
    if cur:
        out.append("".join(cur))
    return out


def parse_descriptor(desc: str):
    """Build the object a descriptor names (RootedGraph, Graph, or template)."""
    desc = desc.strip()
    kind, _, argtext = desc.partition(":")
    kind = kind.strip()
    args: dict[str, str] = {}
    if argtext:
        for item in _split_args(argtext):
            key, eq, value = item.partition("=")
            if not eq:
                raise ValueError(f"malformed descriptor argument {item!r}")
            args[key.strip()] = value.strip()

    def intarg(name: str) -> int:
        if name not in args:
            raise ValueError(f"descriptor {kind!r} needs {name}=")
        return int(args[name])

    def subarg(name: str):
        if name not in args:
            raise ValueError(f"descriptor {kind!r} needs {name}=")
        value = args[name]
        if value.startswith("(") and value.endswith(")"):
            value = value[1:-1]
        return parse_descriptor(value)

    if kind == "Trt":
        return height_two_tree(intarg("r"), intarg("t"))
    if kind == "Tr11":
        return tree_r11(intarg("r"))
    if kind == "path":
        return rooted_path(intarg("len"))
    if kind == "star":
        return leaf_rooted_star(intarg("r"))
    if kind == "theta":
        return theta(intarg("len"), intarg("t"))
    if kind == "Kst":
        return complete_bipartite_template(intarg("s"), intarg("t"))
    if kind == "power":
        base = subarg("base")
        if not isinstance(base, RootedGraph):
            raise ValueError("power base must be a rooted descriptor")
        return rooted_power(base, intarg("l"))
    if kind == "f1":
        base = subarg("base")
        if not isinstance(base, RootedGraph):
            raise ValueError("f1 base must be a rooted descriptor")
        parts = bipartition(base.graph)
        if parts is None:
            raise NotBipartite("f1 base must be bipartite")
        a, b = parts
        if 0 in b:
            a, b = b, a
        return attach_ktt_rooted(base, (a, b), 1)
    raise ValueError(f"unknown descriptor kind {kind!r}")
