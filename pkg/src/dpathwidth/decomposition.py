"""Tree, path and tree-partition decompositions, d-covers, and their validator."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import PreconditionError
from .graph import Graph, graph_from_json, graph_to_json, maximal_cliques, union

SCHEMA_VERSION = 1


def _freeze_bags(bags: Mapping[int, Iterable[int]]) -> dict[int, frozenset[int]]:
    return {int(t): frozenset(int(v) for v in b) for t, b in sorted(bags.items())}


@dataclass(frozen=True)
class TreeDecomposition:
    nodes: tuple[int, ...]
    tree_edges: tuple[tuple[int, int], ...]
    bags: Mapping[int, frozenset[int]]

    def __init__(self, nodes, tree_edges, bags):
        object.__setattr__(self, "nodes", tuple(sorted(int(t) for t in nodes)))
        object.__setattr__(self, "tree_edges", tuple(sorted(tuple(sorted(e)) for e in tree_edges)))
        object.__setattr__(self, "bags", _freeze_bags(bags))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1


@dataclass(frozen=True)
class PathDecomposition:
    bags: tuple[frozenset[int], ...]

    def __init__(self, bags: Iterable[Iterable[int]]):
        object.__setattr__(self, "bags", tuple(frozenset(int(v) for v in b) for b in bags))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def vertices(self) -> frozenset[int]:
        return frozenset().union(*self.bags) if self.bags else frozenset()

    def restrict(self, keep: Iterable[int]) -> "PathDecomposition":
        """Intersect every bag with ``keep``; valid for any subgraph on ``keep``."""
        keep = frozenset(keep)
        return PathDecomposition([b & keep for b in self.bags])

    def as_tree(self) -> TreeDecomposition:
        n = len(self.bags)
        return TreeDecomposition(range(n), [(i, i + 1) for i in range(n - 1)], dict(enumerate(self.bags)))


@dataclass(frozen=True)
class TreePartition:
    nodes: tuple[int, ...]
    forest_edges: tuple[tuple[int, int], ...]
    bags: Mapping[int, frozenset[int]]

    def __init__(self, nodes, forest_edges, bags):
        object.__setattr__(self, "nodes", tuple(sorted(int(t) for t in nodes)))
        object.__setattr__(self, "forest_edges", tuple(sorted(tuple(sorted(e)) for e in forest_edges)))
        object.__setattr__(self, "bags", _freeze_bags(bags))

    @property
    def width(self) -> int:
        # bag size, not bag size minus one
        return max((len(b) for b in self.bags.values()), default=0)


@dataclass(frozen=True)
class DCover:
    """Subgraphs whose union is ``host``, each with a path decomposition."""

    host: Graph
    parts: tuple[tuple[Graph, PathDecomposition], ...]
    clique_preserving: bool = False

    def __init__(self, host, parts, clique_preserving=False):
        object.__setattr__(self, "host", host)
        object.__setattr__(self, "parts", tuple((g, pd) for g, pd in parts))
        object.__setattr__(self, "clique_preserving", bool(clique_preserving))

    @property
    def d(self) -> int:
        return len(self.parts)

    @property
    def width(self) -> int:
        return max((pd.width for _, pd in self.parts), default=-1)

    def widths(self) -> list[int]:
        return [pd.width for _, pd in self.parts]


@dataclass(frozen=True)
class Violation:
    condition: str
    witness: tuple = field(default=())

    def __str__(self):
        return f"{self.condition}: {self.witness}"


# --------------------------------------------------------------------------
# validation

def _tree_shape(nodes: Sequence[int], edges: Sequence[tuple[int, int]], forest: bool) -> list[Violation]:
    out = []
    nodeset = set(nodes)
    parent = {t: t for t in nodes}

    def find(t):
        while parent[t] != t:
            parent[t] = parent[parent[t]]
            t = parent[t]
        return t

    for a, b in edges:
        if a not in nodeset or b not in nodeset:
            out.append(Violation("tree", ("unknown node", a, b)))
            continue
        ra, rb = find(a), find(b)
        if ra == rb:
            out.append(Violation("tree", ("cycle through edge", a, b)))
        else:
            parent[ra] = rb
    if not forest and nodes:
        roots = {find(t) for t in nodes}
        if len(roots) > 1:
            out.append(Violation("tree", ("disconnected", len(roots))))
    return out


def _check_tree_decomposition(nodes, edges, bags, g: Graph) -> list[Violation]:
    out = _tree_shape(nodes, edges, forest=False)
    if set(bags) != set(nodes):
        out.append(Violation("tree", ("bag/node mismatch",)))
        return out
    vset = set(g.vertices)
    covered = set().union(*bags.values()) if bags else set()
    for v in sorted(covered - vset):
        out.append(Violation("vertex", (v,)))
    for v in sorted(vset - covered):
        out.append(Violation("union", (v,)))
    for eid in g.edge_ids():
        u, v = g.edges[eid]
        if not any(u in b and v in b for b in bags.values()):
            out.append(Violation("containment", (eid, u, v)))
    adj: dict[int, list[int]] = {t: [] for t in nodes}
    for a, b in edges:
        if a in adj and b in adj:
            adj[a].append(b)
            adj[b].append(a)
    for v in sorted(covered & vset):
        holders = {t for t in nodes if v in bags[t]}
        start = min(holders)
        seen = {start}
        stack = [start]
        while stack:
            t = stack.pop()
            for s in adj[t]:
                if s in holders and s not in seen:
                    seen.add(s)
                    stack.append(s)
        if seen != holders:
            out.append(Violation("connectedness", (v, tuple(sorted(holders)))))
    return out


def _check_path_decomposition(pd: PathDecomposition, g: Graph) -> list[Violation]:
    bags = dict(enumerate(pd.bags))
    n = len(pd.bags)
    return _check_tree_decomposition(list(range(n)), [(i, i + 1) for i in range(n - 1)], bags, g)


def _check_tree_partition(tp: TreePartition, g: Graph) -> list[Violation]:
    out = _tree_shape(tp.nodes, tp.forest_edges, forest=True)
    if set(tp.bags) != set(tp.nodes):
        out.append(Violation("tree", ("bag/node mismatch",)))
        return out
    owner: dict[int, int] = {}
    for t in tp.nodes:
        for v in sorted(tp.bags[t]):
            if v in owner:
                out.append(Violation("partition", ("vertex in two bags", v, owner[v], t)))
            else:
                owner[v] = t
    vset = set(g.vertices)
    for v in sorted(set(owner) - vset):
        out.append(Violation("vertex", (v,)))
    for v in sorted(vset - set(owner)):
        out.append(Violation("union", (v,)))
    bag_adjacent = set()
    for eid in g.edge_ids():
        u, v = g.edges[eid]
        if u in owner and v in owner and owner[u] != owner[v]:
            bag_adjacent.add(tuple(sorted((owner[u], owner[v]))))
    forest = set(tp.forest_edges)
    for pair in sorted(bag_adjacent - forest):
        out.append(Violation("adjacency", ("bags adjacent in graph but not in forest",) + pair))
    for pair in sorted(forest - bag_adjacent):
        out.append(Violation("adjacency", ("forest edge without graph edge",) + pair))
    return out


def _check_cover(cover: DCover, g: Graph) -> list[Violation]:
    out = []
    if not cover.parts:
        if g.vertices:
            out.append(Violation("cover", ("no parts",)))
        return out
    total = cover.parts[0][0]
    for part, _ in cover.parts[1:]:
        total = union(total, part)
    if not total.same_structure(g):
        missing_v = sorted(set(g.vertices) - set(total.vertices))
        extra_v = sorted(set(total.vertices) - set(g.vertices))
        missing_e = sorted(g.edge_pairs() - total.edge_pairs())
        extra_e = sorted(total.edge_pairs() - g.edge_pairs())
        out.append(Violation("cover", ("union differs", missing_v, extra_v, missing_e, extra_e)))
    for i, (part, pd) in enumerate(cover.parts):
        for viol in _check_path_decomposition(pd, part):
            out.append(Violation(f"part{i}.{viol.condition}", viol.witness))
    if cover.clique_preserving:
        for q in maximal_cliques(g):
            if not any(all(part.has_vertex(v) for v in q) and _is_clique(part, q) for part, _ in cover.parts):
                out.append(Violation("clique", q))
    return out


def _is_clique(part: Graph, q) -> bool:
    return all(part.has_edge(u, v) for i, u in enumerate(q) for v in q[i + 1:])


def validate(dec, g: Graph) -> list[Violation]:
    """Every violated condition of ``dec`` with respect to ``g``; empty iff valid."""
    if isinstance(dec, PathDecomposition):
        return _check_path_decomposition(dec, g)
    if isinstance(dec, TreeDecomposition):
        return _check_tree_decomposition(list(dec.nodes), list(dec.tree_edges), dict(dec.bags), g)
    if isinstance(dec, TreePartition):
        return _check_tree_partition(dec, g)
    if isinstance(dec, DCover):
        return _check_cover(dec, g)
    raise TypeError(f"not a decomposition: {type(dec).__name__}")


def is_clique_preserving(cover: DCover, g: Graph | None = None) -> bool:
    g = cover.host if g is None else g
    return all(
        any(all(p.has_vertex(v) for v in q) and _is_clique(p, q) for p, _ in cover.parts)
        for q in maximal_cliques(g)
    )


# --------------------------------------------------------------------------
# JSON

def decomposition_to_json(dec) -> dict:
    if isinstance(dec, PathDecomposition):
        n = len(dec.bags)
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "path",
            "nodes": list(range(n)),
            "edges": [[i, i + 1] for i in range(n - 1)],
            "bags": {str(i): sorted(b) for i, b in enumerate(dec.bags)},
            "width": dec.width,
        }
    if isinstance(dec, TreeDecomposition):
        kind, edges = "tree", dec.tree_edges
    elif isinstance(dec, TreePartition):
        kind, edges = "tree_partition", dec.forest_edges
    elif isinstance(dec, DCover):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "cover",
            "d": dec.d,
            "clique_preserving": dec.clique_preserving,
            "host": graph_to_json(dec.host),
            "parts": [
                {"graph": graph_to_json(p), "decomposition": decomposition_to_json(pd)}
                for p, pd in dec.parts
            ],
            "width": dec.width,
        }
    else:
        raise TypeError(f"not a decomposition: {type(dec).__name__}")
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "nodes": list(dec.nodes),
        "edges": [list(e) for e in edges],
        "bags": {str(t): sorted(dec.bags[t]) for t in dec.nodes},
        "width": dec.width,
    }


def decomposition_from_json(data: Mapping):
    kind = data.get("kind")
    if kind == "cover":
        parts = [
            (graph_from_json(p["graph"]), decomposition_from_json(p["decomposition"]))
            for p in data["parts"]
        ]
        return DCover(graph_from_json(data["host"]), parts, data.get("clique_preserving", False))
    bags = {int(t): b for t, b in data["bags"].items()}
    nodes = [int(t) for t in data["nodes"]]
    edges = [tuple(int(x) for x in e) for e in data["edges"]]
    if kind == "path":
        # bags follow the path given by the edge list
        order = _path_order(nodes, edges)
        return PathDecomposition([bags[t] for t in order])
    if kind == "tree":
        return TreeDecomposition(nodes, edges, bags)
    if kind == "tree_partition":
        return TreePartition(nodes, edges, bags)
    raise PreconditionError(f"unknown decomposition kind {kind!r}")


def _path_order(nodes, edges) -> list[int]:
    if not nodes:
        return []
    adj: dict[int, list[int]] = {t: [] for t in nodes}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    if len(edges) != len(nodes) - 1 or any(len(ns) > 2 for ns in adj.values()):
        raise PreconditionError("path decomposition edges do not form a path")
    ends = sorted(t for t in nodes if len(adj[t]) <= 1)
    order = [ends[0]]
    prev = None
    while len(order) < len(nodes):
        nxt = [s for s in adj[order[-1]] if s != prev]
        if not nxt:
            raise PreconditionError("path decomposition edges do not form a path")
        prev = order[-1]
        order.append(nxt[0])
    return order
