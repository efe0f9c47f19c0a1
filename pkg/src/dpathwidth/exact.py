"""Exact treewidth and pathwidth for small graphs, plus a layout heuristic.

Both solvers are dynamic programs over vertex subsets encoded as bitmasks.
Pathwidth uses the vertex-separation formulation; treewidth uses the
elimination-order recurrence TW(S) = min_v max(TW(S - v), |Q(S - v, v)|).
"""
from __future__ import annotations

from functools import lru_cache

from . import _config
from .decomposition import PathDecomposition, TreeDecomposition
from .errors import SizeError
from .graph import Graph


def _masks(g: Graph):
    verts = list(g.vertices)
    index = {v: i for i, v in enumerate(verts)}
    nbr = [0] * len(verts)
    for u, v in g.edges.values():
        nbr[index[u]] |= 1 << index[v]
        nbr[index[v]] |= 1 << index[u]
    return verts, nbr


def _check_cap(g: Graph, cap):
    cap = _config.resolve(cap, _config.exact_vertex_cap)
    if g.num_vertices() > cap:
        raise SizeError("exact solver vertex count", g.num_vertices(), cap)


def layout_to_path_decomposition(g: Graph, layout) -> PathDecomposition:
    """Bags {v_i} plus every earlier vertex that still has a neighbour at or after v_i."""
    pos = {v: i for i, v in enumerate(layout)}
    last = {v: pos[v] for v in layout}
    for u, v in g.edges.values():
        a, b = sorted((u, v), key=pos.__getitem__)
        last[a] = max(last[a], pos[b])
    bags = []
    for i, v in enumerate(layout):
        bags.append({u for u in layout[:i] if last[u] >= i} | {v})
    return PathDecomposition(bags)


def exact_pathwidth(g: Graph, cap: int | None = None) -> tuple[int, PathDecomposition]:
    _check_cap(g, cap)
    verts, nbr = _masks(g)
    n = len(verts)
    if n == 0:
        return -1, PathDecomposition([])
    full = (1 << n) - 1

    def boundary(s):
        count = 0
        rest = full & ~s
        m = s
        while m:
            low = m & -m
            if nbr[low.bit_length() - 1] & rest:
                count += 1
            m ^= low
        return count

    # best[s]: smallest max-boundary over layouts whose first |s| vertices are s
    best = [0] * (1 << n)
    choice = [0] * (1 << n)
    for s in range(1, 1 << n):
        b = boundary(s)
        top = None
        m = s
        while m:
            low = m & -m
            val = best[s ^ low]
            if top is None or val < top:
                top = val
                choice[s] = low.bit_length() - 1
            m ^= low
        best[s] = max(b, top)
    layout = []
    s = full
    while s:
        i = choice[s]
        layout.append(verts[i])
        s ^= 1 << i
    layout.reverse()
    pd = layout_to_path_decomposition(g, layout)
    assert pd.width == best[full], (pd.width, best[full])
    return best[full], pd


def exact_treewidth(g: Graph, cap: int | None = None) -> tuple[int, TreeDecomposition]:
    _check_cap(g, cap)
    verts, nbr = _masks(g)
    n = len(verts)
    if n == 0:
        return -1, TreeDecomposition([], [], {})
    full = (1 << n) - 1

    def q_size(s, v):
        # vertices outside s+v reachable from v through s
        seen = 1 << v
        frontier = 1 << v
        out = 0
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            ns = nbr[low.bit_length() - 1] & ~seen
            seen |= ns
            out |= ns & ~s
            frontier |= ns & s
        return bin(out).count("1")

    @lru_cache(maxsize=None)
    def tw(s):
        if s == 0:
            return -1
        best = None
        m = s
        while m:
            low = m & -m
            m ^= low
            rest = s ^ low
            val = max(tw(rest), q_size(rest, low.bit_length() - 1))
            if best is None or val < best[0]:
                best = (val, low.bit_length() - 1)
        _choice[s] = best[1]
        return best[0]

    _choice: dict[int, int] = {}
    width = tw(full)
    order = []
    s = full
    while s:
        i = _choice[s]
        order.append(verts[i])
        s ^= 1 << i
    order.reverse()
    td = elimination_to_tree_decomposition(g, order)
    tw.cache_clear()
    assert td.width == width, (td.width, width)
    return width, td


def elimination_to_tree_decomposition(g: Graph, order) -> TreeDecomposition:
    """Tree decomposition from an elimination order (first element eliminated first)."""
    pos = {v: i for i, v in enumerate(order)}
    adj = {v: set(g.neighbors(v)) for v in order}
    bags = {}
    parent = {}
    for v in order:
        higher = {u for u in adj[v] if pos[u] > pos[v]}
        bags[pos[v]] = higher | {v}
        for a in higher:
            adj[a] |= higher - {a}
        if higher:
            parent[pos[v]] = min(pos[u] for u in higher)
    edges = [(t, p) for t, p in parent.items()]
    roots = sorted(t for t in bags if t not in parent)
    edges.extend((roots[i], roots[i + 1]) for i in range(len(roots) - 1))
    return TreeDecomposition(bags.keys(), edges, bags)


def heuristic_path_decomposition(g: Graph) -> PathDecomposition:
    """Greedy layout: repeatedly place the vertex that keeps the boundary smallest.

    Ties go to the vertex with the most already-placed neighbours, then lowest id.
    """
    placed: list[int] = []
    placed_set: set[int] = set()
    remaining = set(g.vertices)
    unplaced_deg = {v: g.degree(v) for v in g.vertices}
    while remaining:
        def key(v):
            # boundary after placing v: placed vertices still open plus v if it stays open
            closes = sum(1 for u in g.neighbors(v) if u in placed_set and unplaced_deg[u] == 1)
            opens = 1 if unplaced_deg[v] > 0 else 0
            return (opens - closes, -sum(1 for u in g.neighbors(v) if u in placed_set), v)

        v = min(remaining, key=key)
        remaining.discard(v)
        placed.append(v)
        placed_set.add(v)
        for u in g.neighbors(v):
            unplaced_deg[u] -= 1
    return layout_to_path_decomposition(g, placed)


def pathwidth(g: Graph, cap: int | None = None) -> int:
    return exact_pathwidth(g, cap)[0]


def treewidth(g: Graph, cap: int | None = None) -> int:
    return exact_treewidth(g, cap)[0]
