"""Undirected simple graphs with stable vertex and edge identifiers.

Vertices are non-negative integers. Every edge carries an integer id that
survives subgraph extraction, so covers, CNF variables and decompositions
built from a subgraph can always be traced back to the host graph.
Iteration is always in sorted id order.
"""
from __future__ import annotations

import random
from itertools import combinations
from typing import Iterable, Mapping

import networkx as nx

from .errors import PreconditionError


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple graph.

    ``edges`` maps edge id to an endpoint pair. Equality compares vertex sets
    and the full id-to-pair map.
    """

    __slots__ = ("_vertices", "_edges", "_by_pair", "_adj")

    def __init__(self, vertices: Iterable[int] = (), edges: Mapping[int, tuple[int, int]] | None = None):
        verts = set(int(v) for v in vertices)
        emap: dict[int, tuple[int, int]] = {}
        by_pair: dict[tuple[int, int], int] = {}
        for eid, (u, v) in sorted((edges or {}).items()):
            u, v = int(u), int(v)
            if u == v:
                raise PreconditionError(f"self-loop on vertex {u} (edge {eid})")
            p = _pair(u, v)
            if p in by_pair:
                raise PreconditionError(f"duplicate edge {p} (ids {by_pair[p]} and {eid})")
            verts.add(u)
            verts.add(v)
            emap[int(eid)] = p
            by_pair[p] = int(eid)
        if any(v < 0 for v in verts):
            raise PreconditionError("vertex ids must be non-negative")
        adj: dict[int, set[int]] = {v: set() for v in verts}
        for u, v in emap.values():
            adj[u].add(v)
            adj[v].add(u)
        self._vertices = tuple(sorted(verts))
        self._edges = emap
        self._by_pair = by_pair
        self._adj = {v: frozenset(ns) for v, ns in adj.items()}

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]], vertices: Iterable[int] = ()) -> "Graph":
        """Build a graph whose edge ids follow the order of ``pairs``."""
        return cls(vertices, {i: p for i, p in enumerate(pairs)})

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._vertices

    @property
    def edges(self) -> Mapping[int, tuple[int, int]]:
        return self._edges

    def edge_ids(self) -> list[int]:
        return sorted(self._edges)

    def edge_pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset(self._by_pair)

    def num_vertices(self) -> int:
        return len(self._vertices)

    def num_edges(self) -> int:
        return len(self._edges)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_vertex(self, v: int) -> bool:
        return v in self._adj

    def has_edge(self, u: int, v: int) -> bool:
        return _pair(u, v) in self._by_pair

    def edge_id(self, u: int, v: int) -> int:
        return self._by_pair[_pair(u, v)]

    def incident_edges(self, v: int) -> list[int]:
        return sorted(self._by_pair[_pair(v, w)] for w in self._adj[v])

    def components(self) -> list[tuple[int, ...]]:
        """Connected components, each sorted, ordered by smallest vertex."""
        seen: set[int] = set()
        out = []
        for s in self._vertices:
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            stack = [s]
            while stack:
                u = stack.pop()
                for w in self._adj[u]:
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        stack.append(w)
            out.append(tuple(sorted(comp)))
        return out

    def to_networkx(self) -> nx.Graph:
        h = nx.Graph()
        h.add_nodes_from(self._vertices)
        for eid, (u, v) in sorted(self._edges.items()):
            h.add_edge(u, v, id=eid)
        return h

    def same_structure(self, other: "Graph") -> bool:
        """Equality up to edge ids."""
        return self._vertices == other._vertices and self.edge_pairs() == other.edge_pairs()

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._vertices == other._vertices and self._edges == other._edges

    def __hash__(self):
        return hash((self._vertices, tuple(sorted(self._edges.items()))))

    def __repr__(self):
        return f"Graph(|V|={len(self._vertices)}, |E|={len(self._edges)})"


def union(g1: Graph, g2: Graph) -> Graph:
    """Union over a shared vertex id space.

    Edges are identified by endpoint pair. ``g1`` keeps its ids; an edge new to
    ``g2`` keeps its id unless already taken, in which case it gets the next
    free id.
    """
    edges = dict(g1.edges)
    taken = set(edges)
    pairs = g1.edge_pairs()
    for eid, p in sorted(g2.edges.items()):
        if p in pairs:
            continue
        if eid in taken:
            eid = max(taken) + 1
        edges[eid] = p
        taken.add(eid)
    return Graph(set(g1.vertices) | set(g2.vertices), edges)


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    s = set(s)
    unknown = sorted(v for v in s if not g.has_vertex(v))
    if unknown:
        raise PreconditionError(f"unknown vertices {unknown}")
    return Graph(s, {eid: p for eid, p in g.edges.items() if p[0] in s and p[1] in s})


def edge_induced_subgraph(g: Graph, es: Iterable[int]) -> Graph:
    es = set(es)
    unknown = sorted(e for e in es if e not in g.edges)
    if unknown:
        raise PreconditionError(f"unknown edge ids {unknown}")
    return Graph((), {eid: g.edges[eid] for eid in es})


def max_degree(g: Graph) -> int:
    return max((g.degree(v) for v in g.vertices), default=0)


def is_subgraph(h: Graph, g: Graph) -> bool:
    """Whether ``h`` is a subgraph of ``g`` (structurally, ignoring ids)."""
    return set(h.vertices) <= set(g.vertices) and h.edge_pairs() <= g.edge_pairs()


def is_clique_contained(g: Graph, host: Graph, s: Iterable[int]) -> bool:
    """True iff ``s`` induces a clique in ``g`` and every pair of ``s`` is an edge of ``host``."""
    s = sorted(set(s))
    if not all(g.has_vertex(v) for v in s):
        return False
    return all(g.has_edge(u, v) and host.has_edge(u, v) for u, v in combinations(s, 2))


def maximal_cliques(g: Graph) -> list[tuple[int, ...]]:
    """All maximal cliques, each sorted, in sorted order (isolated vertices included)."""
    return sorted(tuple(sorted(c)) for c in nx.find_cliques(g.to_networkx()))


def incidence_graph(g: Graph, offset: int | None = None) -> Graph:
    """``g`` plus one new vertex per edge, adjacent to both endpoints.

    The new vertex for edge ``e`` gets id ``offset + e`` where ``offset``
    defaults to ``max(V) + 1``. This is the primal graph of the padded CNF
    built from ``g``; edge ids follow sorted endpoint pairs.
    """
    if offset is None:
        offset = edge_var_offset(g)
    pairs = set(g.edge_pairs())
    for eid, (u, v) in g.edges.items():
        x = offset + eid
        pairs.add(_pair(u, x))
        pairs.add(_pair(v, x))
    verts = set(g.vertices) | {offset + e for e in g.edges}
    return Graph.from_pairs(sorted(pairs), verts)


def edge_var_offset(g: Graph) -> int:
    return max(g.vertices, default=-1) + 1


# --------------------------------------------------------------------------
# generators

def path_graph(n: int) -> Graph:
    _need(n >= 1, "path needs n >= 1")
    return Graph.from_pairs([(i, i + 1) for i in range(n - 1)], range(n))


def cycle_graph(n: int) -> Graph:
    _need(n >= 3, "cycle needs n >= 3")
    return Graph.from_pairs(sorted(_pair(i, (i + 1) % n) for i in range(n)), range(n))


def grid_graph(rows: int, cols: int) -> Graph:
    _need(rows >= 1 and cols >= 1, "grid needs positive dimensions")
    pairs = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                pairs.append((v, v + 1))
            if r + 1 < rows:
                pairs.append((v, v + cols))
    return Graph.from_pairs(sorted(pairs), range(rows * cols))


def complete_graph(n: int) -> Graph:
    _need(n >= 1, "complete graph needs n >= 1")
    return Graph.from_pairs(list(combinations(range(n), 2)), range(n))


def star_graph(n: int) -> Graph:
    """K_{1,n-1}: vertex 0 is the centre."""
    _need(n >= 2, "star needs n >= 2")
    return Graph.from_pairs([(0, i) for i in range(1, n)], range(n))


def random_tree(n: int, seed: int = 0) -> Graph:
    _need(n >= 1, "tree needs n >= 1")
    rng = random.Random(seed)
    return Graph.from_pairs(sorted((rng.randrange(i), i) for i in range(1, n)), range(n))


def random_partial_ktree(n: int, k: int, seed: int = 0, keep: float = 0.75) -> Graph:
    """Random k-tree on ``n`` vertices with each edge kept with probability ``keep``.

    Treewidth is at most ``k`` by construction. Isolated vertices may appear.
    """
    _need(n >= 1 and k >= 1, "partial k-tree needs n >= 1 and k >= 1")
    _need(0.0 <= keep <= 1.0, "keep must lie in [0, 1]")
    rng = random.Random(seed)
    base = min(n, k + 1)
    pairs = set(combinations(range(base), 2))
    cliques = [tuple(c) for c in combinations(range(base), k)] if base == k + 1 else []
    for v in range(base, n):
        c = cliques[rng.randrange(len(cliques))]
        for u in c:
            pairs.add(_pair(u, v))
        for drop in range(k):
            cliques.append(tuple(sorted(c[:drop] + c[drop + 1:] + (v,))))
    kept = sorted(p for p in sorted(pairs) if rng.random() < keep)
    return Graph.from_pairs(kept, range(n))


def generate(kind: str, *params: int, seed: int = 0, **kwargs) -> Graph:
    """Dispatch to a named generator; used by the CLI and the test corpus."""
    builders = {
        "path": path_graph,
        "cycle": cycle_graph,
        "grid": grid_graph,
        "complete": complete_graph,
        "star": star_graph,
    }
    try:
        if kind in builders:
            return builders[kind](*params)
        if kind == "random_tree":
            return random_tree(*params, seed=seed)
        if kind == "random_partial_ktree":
            return random_partial_ktree(*params, seed=seed, **kwargs)
    except TypeError as exc:
        raise PreconditionError(f"bad parameters for {kind}: {params}") from exc
    raise PreconditionError(f"unknown graph kind {kind!r}")


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise PreconditionError(msg)


# --------------------------------------------------------------------------
# text formats

def to_edge_list(g: Graph) -> str:
    """``u v`` per edge in id order; isolated vertices as a lone ``v``."""
    lines = [f"# vertices {len(g.vertices)} edges {g.num_edges()}"]
    touched = set()
    for eid in g.edge_ids():
        u, v = g.edges[eid]
        touched.update((u, v))
        lines.append(f"{u} {v}")
    lines.extend(str(v) for v in g.vertices if v not in touched)
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    verts: set[int] = set()
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            ids = [int(p) for p in parts]
        except ValueError as exc:
            raise PreconditionError(f"line {lineno}: non-integer token in {raw!r}") from exc
        if len(ids) == 1:
            verts.add(ids[0])
        elif len(ids) == 2:
            pairs.append((ids[0], ids[1]))
        else:
            raise PreconditionError(f"line {lineno}: expected 'u v' or 'v', got {raw!r}")
    return Graph.from_pairs(pairs, verts)


def to_dot(g: Graph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    lines.extend(f"  {v};" for v in g.vertices)
    for eid in g.edge_ids():
        u, v = g.edges[eid]
        lines.append(f'  {u} -- {v} [label="{eid}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_json(g: Graph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [[eid, *g.edges[eid]] for eid in g.edge_ids()],
    }


def graph_from_json(data: Mapping) -> Graph:
    return Graph(data["vertices"], {int(e): (int(u), int(v)) for e, u, v in data["edges"]})
