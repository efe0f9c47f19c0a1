"""Tree-partitions, the even/odd 2-cover, exact d-cover search, and lifting to the incidence graph."""
from __future__ import annotations

from collections import deque
from math import ceil

from . import _config
from .decomposition import DCover, PathDecomposition, TreeDecomposition, TreePartition, validate
from .errors import PreconditionError, SizeError
from .exact import exact_pathwidth, heuristic_path_decomposition
from .graph import Graph, edge_induced_subgraph, edge_var_offset, incidence_graph, induced_subgraph, union


def _require_valid(dec, g: Graph, what: str) -> None:
    problems = validate(dec, g)
    if problems:
        raise PreconditionError(f"invalid {what}: {problems[0]}")


# --------------------------------------------------------------------------
# tree-partitions

def _layered_partition(g: Graph, comp: tuple[int, ...], root: int):
    """Parts of a BFS layering from ``root``: layer-i vertices joined through layers >= i."""
    depth = {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in sorted(g.neighbors(u)):
            if w not in depth:
                depth[w] = depth[u] + 1
                queue.append(w)
    top = max(depth.values())
    layers = [sorted(v for v in comp if depth[v] == i) for i in range(top + 1)]
    parts: list[list[int]] = []
    part_of: dict[int, int] = {}
    for i, layer in enumerate(layers):
        # components of G[layers >= i] restricted to layer i
        deep = {v for v in comp if depth[v] >= i}
        seen: set[int] = set()
        for s in layer:
            if s in seen:
                continue
            group = []
            stack = [s]
            seen.add(s)
            while stack:
                u = stack.pop()
                if depth[u] == i:
                    group.append(u)
                for w in g.neighbors(u):
                    if w in deep and w not in seen:
                        seen.add(w)
                        stack.append(w)
            part_of.update((v, len(parts)) for v in group)
            parts.append(sorted(group))
    return parts, part_of


def heuristic_tree_partition(g: Graph, target_width: int | None = None) -> TreePartition:
    """Best BFS-layering tree-partition over all roots of each component.

    Each layer is split into the groups of vertices connected through deeper
    layers. The scan over roots stops early once ``target_width`` is reached.
    """
    nodes: list[int] = []
    bags: dict[int, list[int]] = {}
    for comp in g.components():
        best = None
        for root in comp:
            parts, part_of = _layered_partition(g, comp, root)
            width = max(len(p) for p in parts)
            if best is None or width < best[0]:
                best = (width, parts, part_of)
            if target_width is not None and width <= target_width:
                break
        _, parts, _ = best
        for p in parts:
            t = len(nodes)
            nodes.append(t)
            bags[t] = p
    owner = {v: t for t, b in bags.items() for v in b}
    forest = {tuple(sorted((owner[u], owner[v]))) for u, v in g.edges.values() if owner[u] != owner[v]}
    tp = TreePartition(nodes, forest, bags)
    return tp


def _rooted(tp: TreePartition):
    """Parent map and BFS order, rooting each component at its lowest node id."""
    adj: dict[int, list[int]] = {t: [] for t in tp.nodes}
    for a, b in tp.forest_edges:
        adj[a].append(b)
        adj[b].append(a)
    parent: dict[int, int | None] = {}
    depth: dict[int, int] = {}
    order: list[int] = []
    roots: list[int] = []
    for r in tp.nodes:
        if r in parent:
            continue
        roots.append(r)
        parent[r] = None
        depth[r] = 0
        queue = deque([r])
        while queue:
            t = queue.popleft()
            order.append(t)
            for s in sorted(adj[t]):
                if s not in parent:
                    parent[s] = t
                    depth[s] = depth[t] + 1
                    queue.append(s)
    return parent, depth, order, roots


def _star_bags(tp: TreePartition, parent) -> dict[int, frozenset[int]]:
    return {
        t: tp.bags[t] | (tp.bags[parent[t]] if parent[t] is not None else frozenset())
        for t in tp.nodes
    }


def induce_tree_decomposition(tp: TreePartition, g: Graph) -> TreeDecomposition:
    """Each non-root bag absorbs its parent's bag; component roots hang off the first root."""
    _require_valid(tp, g, "tree-partition")
    parent, _, _, roots = _rooted(tp)
    bags = _star_bags(tp, parent)
    edges = [(t, p) for t, p in parent.items() if p is not None]
    edges.extend((roots[0], r) for r in roots[1:])
    return TreeDecomposition(tp.nodes, edges, bags)


def even_odd_split(tp: TreePartition, g: Graph) -> DCover:
    """Clique-preserving 2-cover from the layer parity of the induced tree decomposition.

    Part ``i`` is the union of G[B*(t)] over nodes t whose layer has parity
    ``i`` (the root is in layer 1, so odd layers come first). Its path
    decomposition lists those bags sibling group by sibling group.
    """
    _require_valid(tp, g, "tree-partition")
    parent, depth, order, _ = _rooted(tp)
    star = _star_bags(tp, parent)
    parts = []
    for parity in (0, 1):
        chosen = [t for t in order if depth[t] % 2 == parity]
        # group siblings; roots form one group, groups follow BFS discovery of the parent
        groups: dict[object, list[int]] = {}
        parent_rank = {t: i for i, t in enumerate(order)}
        for t in chosen:
            key = -1 if parent[t] is None else parent_rank[parent[t]]
            groups.setdefault(key, []).append(t)
        seq = [t for key in sorted(groups) for t in sorted(groups[key])]
        verts: set[int] = set()
        edges = {}
        for t in seq:
            sub = induced_subgraph(g, star[t])
            verts |= star[t]
            edges.update(sub.edges)
        part = Graph(verts, edges)
        parts.append((part, PathDecomposition([star[t] for t in seq])))
    return DCover(g, parts, clique_preserving=True)


def literal_even_odd_parts(tp: TreePartition, g: Graph) -> list[Graph]:
    """G[V_even] and G[V_odd] taken literally as induced subgraphs on the bag unions.

    Kept to show why the construction uses unions of G[B*(t)] instead: the
    literal induced subgraphs can contain edges between a bag and its
    grandparent's bag that no bag of the parity covers.
    """
    parent, depth, order, _ = _rooted(tp)
    star = _star_bags(tp, parent)
    out = []
    for parity in (0, 1):
        verts = set()
        for t in order:
            if depth[t] % 2 == parity:
                verts |= star[t]
        out.append(induced_subgraph(g, verts))
    return out


# --------------------------------------------------------------------------
# d-covers

def cover_pathwidth_lower_bound(g: Graph, d: int) -> int:
    """Some part holds >= |E|/d edges, and a graph of treewidth k has at most k|V| edges."""
    if d < 1:
        raise PreconditionError("d must be at least 1")
    if g.num_vertices() == 0:
        return 0
    return ceil(g.num_edges() / (d * g.num_vertices()))


class _PwCache:
    """Pathwidth of edge sets, computed per connected component and memoized."""

    def __init__(self, g: Graph):
        self.g = g
        self.memo: dict[frozenset[int], int] = {}

    def component_pw(self, es: frozenset[int]) -> int:
        if es not in self.memo:
            self.memo[es] = exact_pathwidth(edge_induced_subgraph(self.g, es))[0]
        return self.memo[es]

    def pw(self, es) -> int:
        es = set(es)
        if not es:
            return -1
        # split into components
        best = 0
        by_vertex: dict[int, list[int]] = {}
        for e in es:
            for v in self.g.edges[e]:
                by_vertex.setdefault(v, []).append(e)
        seen: set[int] = set()
        for e in sorted(es):
            if e in seen:
                continue
            comp = {e}
            stack = [e]
            seen.add(e)
            while stack:
                f = stack.pop()
                for v in self.g.edges[f]:
                    for h in by_vertex[v]:
                        if h not in seen:
                            seen.add(h)
                            comp.add(h)
                            stack.append(h)
            best = max(best, self.component_pw(frozenset(comp)))
        return best


def _bfs_edge_order(g: Graph) -> list[int]:
    order = []
    seen_e: set[int] = set()
    seen_v: set[int] = set()
    for s in g.vertices:
        if s in seen_v:
            continue
        seen_v.add(s)
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in g.incident_edges(u):
                if e not in seen_e:
                    seen_e.add(e)
                    order.append(e)
                w = g.edges[e][0] if g.edges[e][1] == u else g.edges[e][1]
                if w not in seen_v:
                    seen_v.add(w)
                    queue.append(w)
    return order


def _part_decomposition(part: Graph) -> PathDecomposition:
    """Concatenate per-component decompositions, exact where the solver cap allows."""
    bags = []
    cap = _config.exact_vertex_cap()
    for comp in part.components():
        sub = induced_subgraph(part, comp)
        if len(comp) <= cap:
            pd = exact_pathwidth(sub)[1]
        else:
            pd = heuristic_path_decomposition(sub)
        bags.extend(pd.bags)
    return PathDecomposition(bags)


def _cover_from_coloring(g: Graph, classes: list[list[int]]) -> DCover:
    isolated = [v for v in g.vertices if g.degree(v) == 0]
    parts = []
    for i, es in enumerate(classes):
        part = edge_induced_subgraph(g, es)
        if i == 0 and isolated:
            part = Graph(set(part.vertices) | set(isolated), part.edges)
        parts.append((part, _part_decomposition(part)))
    return DCover(g, parts)


def _greedy_coloring(g: Graph, d: int) -> list[list[int]]:
    cache = _PwCache(g) if g.num_edges() <= 64 else None
    classes: list[list[int]] = [[] for _ in range(d)]
    for e in _bfs_edge_order(g):
        def cost(i):
            trial = classes[i] + [e]
            if cache is not None and len(trial) <= 12:
                w = cache.pw(trial)
            else:
                w = heuristic_path_decomposition(edge_induced_subgraph(g, trial)).width
            return (w, len(classes[i]), i)

        best = min(range(d), key=cost)
        classes[best].append(e)
    return classes


def d_cover_search(g: Graph, d: int, mode: str = "exact", cap: int | None = None) -> DCover:
    """A d-cover of ``g``.

    ``exact`` minimizes the largest part pathwidth over all d-colourings of
    the edges (branch and bound; parts are edge-induced). ``heuristic`` uses
    the even/odd split of a heuristic tree-partition for d = 2 and a greedy
    colouring otherwise.
    """
    if d < 1:
        raise PreconditionError("d must be at least 1")
    if mode == "heuristic":
        if d == 2:
            return even_odd_split(heuristic_tree_partition(g), g)
        return _cover_from_coloring(g, _greedy_coloring(g, d))
    if mode != "exact":
        raise PreconditionError(f"unknown mode {mode!r}")
    cap = _config.resolve(cap, _config.cover_edge_cap)
    if g.num_edges() > cap:
        raise SizeError("exact cover search edge count", g.num_edges(), cap)

    cache = _PwCache(g)
    order = _bfs_edge_order(g)
    lower = cover_pathwidth_lower_bound(g, d)
    classes = _greedy_coloring(g, d)
    best_val = max(cache.pw(c) for c in classes)
    best = [list(c) for c in classes]
    current: list[list[int]] = [[] for _ in range(d)]

    def search(k: int) -> bool:
        nonlocal best_val, best
        if best_val <= lower:
            return True
        if k == len(order):
            val = max(cache.pw(c) for c in current)
            if val < best_val:
                best_val = val
                best = [list(c) for c in current]
            return best_val <= lower
        e = order[k]
        used_empty = False
        for i in range(d):
            if not current[i]:
                # empty classes are interchangeable: try only the first one
                if used_empty:
                    continue
                used_empty = True
            current[i].append(e)
            if cache.pw(current[i]) < best_val and search(k + 1):
                current[i].pop()
                return True
            current[i].pop()
        return False

    search(0)
    return _cover_from_coloring(g, best)


def lift_cover_to_incidence(cover: DCover, g: Graph) -> DCover:
    """Cover of the graph with one extra vertex per edge, adjacent to its endpoints.

    Each edge of a part is charged to the first bag holding both endpoints;
    a bag charged with r edges becomes r copies, each holding one of the new
    vertices (bags charged with nothing stay as a single copy).
    """
    _require_valid(cover, g, "cover")
    offset = edge_var_offset(g)
    host = incidence_graph(g, offset)
    parts = []
    for part, pd in cover.parts:
        charged: dict[int, list[int]] = {}
        for eid in part.edge_ids():
            u, v = part.edges[eid]
            i = next(i for i, b in enumerate(pd.bags) if u in b and v in b)
            charged.setdefault(i, []).append(g.edge_id(u, v))
        bags = []
        for i, b in enumerate(pd.bags):
            extra = charged.get(i, [])
            if not extra:
                bags.append(b)
            bags.extend(b | {offset + e} for e in extra)
        lifted = incidence_graph(Graph(part.vertices, {g.edge_id(*p): p for p in part.edges.values()}), offset)
        parts.append((lifted, PathDecomposition(bags)))
    return DCover(host, parts, cover.clique_preserving)


def cover_union(cover: DCover) -> Graph:
    if not cover.parts:
        return Graph()
    total = cover.parts[0][0]
    for part, _ in cover.parts[1:]:
        total = union(total, part)
    return total
