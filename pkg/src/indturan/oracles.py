"""Exhaustive oracles: pattern containment, extremal values, and fuzz hosts.

Everything here is exact search at desk scale.  The extremal oracles work by
orderly vertex-extension generation: a graph is grown one vertex at a time,
and both constraints (no K_{s,s} subgraph, no induced copy of h) are hereditary
under adding vertices, so a branch can be pruned the moment either pattern
appears through the newest vertex.  Isomorphism-class deduplication only skips
duplicate branches; correctness never depends on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Optional, Sequence

from .errors import InvalidPartition, NoPartition, NotKssFree, TooLarge
from .families import BipartiteTemplate
from .graph import (
    Graph,
    Host,
    VertexMap,
    bipartite_between,
    bits,
    common_neighborhood_mask,
    mask_of,
)

STAR_BUDGET = 8
BIP_BUDGET = 7


# --- K_{s,s} as a subgraph ----------------------------------------------------


def contains_kss(g: Graph, s: int) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """A K_{s,s} subgraph as (side1, side2), or None.  Sides are disjoint;
    the copy need not be induced.  First witness in lexicographic side1 order."""
    if s < 1:
        raise ValueError("s must be positive")
    if 2 * s > g.n:
        return None
    full = g.vertex_mask()
    good = [v for v in range(g.n) if g.degree(v) >= s]
    for side1 in combinations(good, s):
        common = common_neighborhood_mask(g.adj, side1, full)
        if common.bit_count() >= s:
            side2 = []
            for w in bits(common):
                side2.append(w)
                if len(side2) == s:
                    break
            return side1, tuple(side2)
    return None


def _kss_through_vertex(adj: Sequence[int], universe: int, v: int, s: int) -> bool:
    """K_{s,s} using vertex v, given adjacency rows (v in the side opposite T)."""
    nv = list(bits(adj[v]))
    if len(nv) < s:
        return False
    for t_side in combinations(nv, s):
        common = common_neighborhood_mask(adj, t_side, universe)
        if common.bit_count() >= s:  # v itself is in the common set
            return True
    return False


def _kss_through_edge(adj: Sequence[int], universe: int, u: int, v: int, s: int) -> bool:
    """K_{s,s} using the edge uv (u grouped with s-1 other neighbors of v)."""
    others = [w for w in bits(adj[v]) if w != u]
    if len(others) < s - 1:
        return False
    for extra in combinations(others, s - 1):
        side = (u,) + extra
        common = common_neighborhood_mask(adj, side, universe)
        if common.bit_count() >= s:
            return True
    return False


# --- induced / subgraph embedding ---------------------------------------------


def _match_order(h: Graph) -> list[int]:
    """Pattern order: max degree first, then most already-placed neighbors."""
    if h.n == 0:
        return []
    order = [max(range(h.n), key=lambda v: (h.degree(v), -v))]
    placed = {order[0]}
    while len(order) < h.n:
        rest = [v for v in range(h.n) if v not in placed]
        nxt = max(rest, key=lambda v: (sum(1 for w in placed if h.has_edge(v, w)),
                                       h.degree(v), -v))
        order.append(nxt)
        placed.add(nxt)
    return order


def _embed(g: Graph, h: Graph, induced: bool,
           initial: Optional[Sequence[int]] = None,
           forced: Optional[dict[int, int]] = None) -> Optional[VertexMap]:
    """Backtracking embedding of h into g; induced=True matches non-edges too."""
    if h.n > g.n:
        return None
    if h.n == 0:
        return ()
    full = g.vertex_mask()
    cand = [full] * h.n if initial is None else [m & full for m in initial]
    cand = list(cand)
    for p in range(h.n):
        dp = h.degree(p)
        m = cand[p]
        keep = 0
        for w in bits(m):
            if g.degree(w) >= dp:
                keep |= 1 << w
        cand[p] = keep
    if forced:
        for p, w in forced.items():
            cand[p] &= 1 << w
    order = _match_order(h)
    assignment: dict[int, int] = {}

    def rec(i: int, cands: list[int]) -> bool:
        if i == len(order):
            return True
        p = order[i]
        for w in bits(cands[p]):
            assignment[p] = w
            nxt = list(cands)
            ok = True
            wbit = ~(1 << w)
            for q in range(h.n):
                if q in assignment:
                    continue
                m = nxt[q] & wbit
                if h.has_edge(p, q):
                    m &= g.adj[w]
                elif induced:
                    m &= ~g.adj[w]
                nxt[q] = m
                if m == 0:
                    ok = False
                    break
            if ok and rec(i + 1, nxt):
                return True
            del assignment[p]
        return False

    if rec(0, cand):
        return tuple(assignment[p] for p in range(h.n))
    return None


def contains_induced(g: Graph, h: Graph) -> Optional[VertexMap]:
    """An injective map with adjacency matched exactly (induced copy), or None."""
    return _embed(g, h, induced=True)


def contains_subgraph(g: Graph, h: Graph) -> Optional[VertexMap]:
    """An injective map preserving edges (copy, not necessarily induced)."""
    return _embed(g, h, induced=False)


def _contains_using(g: Graph, h: Graph, v: int, induced: bool) -> bool:
    """Is there a copy of h whose image contains host vertex v?"""
    for p in range(h.n):
        if _embed(g, h, induced=induced, forced={p: v}) is not None:
            return True
    return False


def verify_induced_map(g: Graph, h: Graph, vm: VertexMap) -> bool:
    """Definitional check that vm is an induced embedding of h into g."""
    if len(vm) != h.n or len(set(vm)) != h.n:
        return False
    if not all(0 <= w < g.n for w in vm):
        return False
    for p, q in combinations(range(h.n), 2):
        if g.has_edge(vm[p], vm[q]) != h.has_edge(p, q):
            return False
    return True


def verify_subgraph_map(g: Graph, h: Graph, vm: VertexMap) -> bool:
    if len(vm) != h.n or len(set(vm)) != h.n:
        return False
    return all(g.has_edge(vm[u], vm[v]) for u, v in h.edges)


def is_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.m != h.m:
        return False
    if sorted(g.degree(v) for v in range(g.n)) != sorted(h.degree(v) for v in range(h.n)):
        return False
    return contains_induced(g, h) is not None


def contains_bip_induced(host: Host, h: BipartiteTemplate) -> Optional[VertexMap]:
    """A copy of h in the cross graph G[X, Y] that is induced in all of G.

    The template's A side maps entirely into one partition class and B into the
    other; both orientations are tried.  Returns the vertex map or None.
    """
    if host.partition is None:
        raise NoPartition("host carries no (X, Y) partition")
    x, y = host.partition
    xm, ym = mask_of(x), mask_of(y)
    a_set = set(h.a_side)
    for am, bm in ((xm, ym), (ym, xm)):
        initial = [am if p in a_set else bm for p in range(h.graph.n)]
        vm = _embed(host.graph, h.graph, induced=True, initial=initial)
        if vm is not None:
            return vm
    return None


def verify_bip_induced_map(g: Graph, x: Sequence[int], y: Sequence[int],
                           h: BipartiteTemplate, vm: VertexMap,
                           l_edges: Optional[frozenset] = None) -> bool:
    """Definitional check for a bip-induced copy; optionally require the copy's
    edges to lie in an explicit cross edge set l_edges."""
    if not verify_induced_map(g, h.graph, vm):
        return False
    xs, ys = set(x), set(y)
    a_in_x = all(vm[p] in xs for p in h.a_side) and all(vm[p] in ys for p in h.b_side)
    a_in_y = all(vm[p] in ys for p in h.a_side) and all(vm[p] in xs for p in h.b_side)
    if not (a_in_x or a_in_y):
        return False
    if l_edges is not None:
        for u, v in h.graph.edges:
            e = (vm[u], vm[v]) if vm[u] < vm[v] else (vm[v], vm[u])
            if e not in l_edges:
                return False
    return True


# --- orderly vertex-extension generation ---------------------------------------


def _extend(g: Graph, mask: int) -> Graph:
    edges = list(g.edges)
    k = g.n
    for v in bits(mask):
        edges.append((v, k))
    return Graph(k + 1, edges)


def _iso_key(g: Graph) -> tuple:
    """Cheap isomorphism invariant used to bucket candidates before exact tests."""
    tri = []
    for v in range(g.n):
        c = 0
        for w in bits(g.adj[v]):
            c += (g.adj[v] & g.adj[w]).bit_count()
        tri.append(c // 2)
    prof = sorted((g.degree(v), tri[v],
                   tuple(sorted(g.degree(w) for w in bits(g.adj[v]))))
                  for v in range(g.n))
    return g.n, g.m, tuple(prof)


def _generate_classes(n: int, extend_ok: Callable[[Graph, int], bool]) -> tuple[list[Graph], int]:
    """Iso-class representatives of n-vertex graphs every prefix of which passes
    extend_ok(new_graph, new_vertex).  Returns (representatives, states examined)."""
    reps = [Graph(0, [])]
    explored = 0
    for k in range(n):
        buckets: dict[tuple, list[Graph]] = {}
        for g in reps:
            for mask in range(1 << k):
                explored += 1
                g2 = _extend(g, mask)
                if not extend_ok(g2, k):
                    continue
                key = _iso_key(g2)
                bucket = buckets.setdefault(key, [])
                if any(is_isomorphic(g2, r) for r in bucket):
                    continue
                bucket.append(g2)
        reps = [g for bucket in buckets.values() for g in bucket]
    return reps, explored


@dataclass
class ExtremalResult:
    value: int
    witness: Graph
    explored: int
    partition: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None

    def as_json_dict(self) -> dict:
        from .graph import graph_to_json_dict

        d = {"value": self.value, "explored": self.explored,
             "witness": graph_to_json_dict(self.witness, partition=self.partition)}
        return d


def extremal_star(n: int, h: Graph, s: int, budget: int = STAR_BUDGET) -> ExtremalResult:
    """Exact max edge count of an n-vertex graph with no K_{s,s} subgraph and no
    induced copy of h.  Witness ties break toward the lexicographically least
    edge list among representatives examined."""
    if n > budget:
        raise TooLarge(f"n={n} exceeds the search budget {budget}")
    if s < 1:
        raise ValueError("s must be positive")
    if h.n == 0:
        raise ValueError("pattern must have at least one vertex")

    def ok(g2: Graph, k: int) -> bool:
        if _kss_through_vertex(g2.adj, g2.vertex_mask(), k, s):
            return False
        return not _contains_using(g2, h, k, induced=True)

    reps, explored = _generate_classes(n, ok)
    best = None
    for g in reps:
        key = (-g.m, g.edge_list())
        if best is None or key < best[0]:
            best = (key, g)
    assert best is not None  # the edgeless graph always survives
    witness = best[1]
    assert contains_kss(witness, s) is None and contains_induced(witness, h) is None
    return ExtremalResult(witness.m, witness, explored)


def extremal_classical(n: int, h: Graph, budget: int = STAR_BUDGET) -> ExtremalResult:
    """Exact max edges of an n-vertex graph with no copy of h (induced or not)."""
    if n > budget:
        raise TooLarge(f"n={n} exceeds the search budget {budget}")
    if h.n == 0:
        raise ValueError("pattern must have at least one vertex")

    def ok(g2: Graph, k: int) -> bool:
        return not _contains_using(g2, h, k, induced=False)

    reps, explored = _generate_classes(n, ok)
    best = None
    for g in reps:
        key = (-g.m, g.edge_list())
        if best is None or key < best[0]:
            best = (key, g)
    assert best is not None
    witness = best[1]
    assert contains_subgraph(witness, h) is None
    return ExtremalResult(witness.m, witness, explored)


def extremal_bip_star(n: int, h: BipartiteTemplate, s: int,
                      budget: int = BIP_BUDGET) -> ExtremalResult:
    """Exact max of e(G[X, Y]) over K_{s,s}-free n-vertex graphs G and vertex
    partitions (X, Y) such that G[X, Y] has no copy of h induced in G.

    Partitions are enumerated up to swapping the sides (vertex 0 stays in X).
    """
    if n > budget:
        raise TooLarge(f"n={n} exceeds the search budget {budget}")
    if s < 1:
        raise ValueError("s must be positive")
    if n == 0:
        return ExtremalResult(0, Graph(0, []), 0, partition=((), ()))

    def ok(g2: Graph, k: int) -> bool:
        return not _kss_through_vertex(g2.adj, g2.vertex_mask(), k, s)

    reps, explored = _generate_classes(n, ok)
    best = None
    for g in reps:
        for sub in range(1 << (n - 1)):
            xm = (sub << 1) | 1
            x = tuple(bits(xm))
            y = tuple(v for v in range(n) if not xm >> v & 1)
            explored += 1
            cross = 0
            ymask = mask_of(y)
            for v in x:
                cross += (g.adj[v] & ymask).bit_count()
            host = Host(g, s, (x, y))
            if contains_bip_induced(host, h) is not None:
                continue
            key = (-cross, g.edge_list(), x)
            if best is None or key < best[0]:
                best = (key, g, (x, y), cross)
    assert best is not None  # the edgeless graph admits every partition
    _, witness, partition, value = best
    return ExtremalResult(value, witness, explored, partition=partition)


# --- Kovari-Sos-Turan check -----------------------------------------------------


def kst_check(host: Host) -> bool:
    """For a bipartite host with equal sides of size m whose cross graph is
    K_{s,s}-free, test e <= (s-1)^(1/s) m^(2-1/s) + (s-1) m exactly
    (via (e - (s-1)m)^s <= (s-1) m^(2s-1))."""
    if host.partition is None:
        raise NoPartition("kst_check needs a bipartition")
    x, y = host.partition
    if len(x) != len(y):
        raise InvalidPartition(f"sides must be equal, got {len(x)} and {len(y)}")
    cross, _ = bipartite_between(host.graph, x, y)
    if contains_kss(cross, host.s) is not None:
        raise NotKssFree(f"cross graph contains K_{{{host.s},{host.s}}}")
    m = len(x)
    e = cross.m
    s = host.s
    lhs = e - (s - 1) * m
    if lhs <= 0:
        return True
    return lhs ** s <= (s - 1) * m ** (2 * s - 1)


# --- random K_{s,s}-free hosts for fuzzing ---------------------------------------


def random_kss_free(n: int, s: int, rng, keep: float = 1.0) -> Graph:
    """Random maximal-ish K_{s,s}-free graph: candidate pairs in random order,
    each kept with probability `keep` if it does not complete a K_{s,s}."""
    pairs = list(combinations(range(n), 2))
    rng.shuffle(pairs)
    return _greedy_kss_free(n, pairs, s, rng, keep)


def random_kss_free_bipartite(nx: int, ny: int, s: int, rng, keep: float = 1.0) -> Host:
    """Random K_{s,s}-free bipartite host on sides 0..nx-1 and nx..nx+ny-1."""
    pairs = [(u, nx + w) for u in range(nx) for w in range(ny)]
    rng.shuffle(pairs)
    g = _greedy_kss_free(nx + ny, pairs, s, rng, keep)
    return Host(g, s, (tuple(range(nx)), tuple(range(nx, nx + ny))))


def _greedy_kss_free(n: int, pairs, s: int, rng, keep: float) -> Graph:
    adj = [0] * n
    universe = (1 << n) - 1
    edges = []
    for u, v in pairs:
        if keep < 1.0 and rng.random() > keep:
            continue
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        if _kss_through_edge(adj, universe, u, v, s):
            adj[u] &= ~(1 << v)
            adj[v] &= ~(1 << u)
        else:
            edges.append((u, v))
    return Graph(n, edges)
