"""Nondeterministic branching programs and their structural analyses.

A program is a DAG with one source and one sink whose edges may carry a
literal ``(var, polarity)``. Node and edge ids are non-negative integers and
every traversal below runs in a deterministic order.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import _config
from .cnf import Cnf, LiteralSet, assignment_chunks, clause_matrix_eval, rows_to_literal_sets
from .errors import PreconditionError, SizeError
from .graph import Graph, complete_graph, edge_induced_subgraph, edge_var_offset

SCHEMA_VERSION = 1

Label = tuple[int, bool] | None


class Nbp:
    __slots__ = ("nodes", "edges", "source", "sink", "_out", "_in", "_topo")

    def __init__(self, nodes: Iterable[int], edges: Mapping[int, tuple[int, int, Label]], source: int, sink: int):
        self.nodes = tuple(sorted(set(int(v) for v in nodes)))
        nodeset = set(self.nodes)
        emap: dict[int, tuple[int, int, Label]] = {}
        out: dict[int, list[int]] = {v: [] for v in self.nodes}
        inn: dict[int, list[int]] = {v: [] for v in self.nodes}
        seen_pairs: set[tuple[int, int, Label]] = set()
        for eid, (t, h, lab) in sorted(edges.items()):
            t, h = int(t), int(h)
            if t not in nodeset or h not in nodeset:
                raise PreconditionError(f"edge {eid} has an endpoint outside the node set")
            if t == h:
                raise PreconditionError(f"edge {eid} is a loop")
            if lab is not None:
                lab = (int(lab[0]), bool(lab[1]))
            key = (t, h, lab)
            if key in seen_pairs:
                raise PreconditionError(f"parallel edges {t}->{h} share the label {lab}")
            seen_pairs.add(key)
            emap[int(eid)] = (t, h, lab)
            out[t].append(int(eid))
            inn[h].append(int(eid))
        self.edges = emap
        self._out = out
        self._in = inn
        self.source = int(source)
        self.sink = int(sink)
        if self.source not in nodeset or self.sink not in nodeset:
            raise PreconditionError("source and sink must be nodes")
        no_in = [v for v in self.nodes if not inn[v]]
        no_out = [v for v in self.nodes if not out[v]]
        if no_in != [self.source]:
            raise PreconditionError(f"nodes without in-edges must be exactly the source, got {no_in}")
        if no_out != [self.sink]:
            raise PreconditionError(f"nodes without out-edges must be exactly the sink, got {no_out}")
        self._topo = self._toposort()

    def _toposort(self) -> tuple[int, ...]:
        indeg = {v: len(self._in[v]) for v in self.nodes}
        ready = sorted(v for v in self.nodes if indeg[v] == 0)
        order = []
        heapq.heapify(ready)
        while ready:
            v = heapq.heappop(ready)
            order.append(v)
            for e in self._out[v]:
                h = self.edges[e][1]
                indeg[h] -= 1
                if indeg[h] == 0:
                    heapq.heappush(ready, h)
        if len(order) != len(self.nodes):
            raise PreconditionError("program has a directed cycle")
        return tuple(order)

    @property
    def topo_order(self) -> tuple[int, ...]:
        return self._topo

    def out_edges(self, v: int) -> list[int]:
        return self._out[v]

    def in_edges(self, v: int) -> list[int]:
        return self._in[v]

    def label(self, eid: int) -> Label:
        return self.edges[eid][2]

    def num_edges(self) -> int:
        return len(self.edges)

    def variables(self) -> frozenset[int]:
        return frozenset(lab[0] for _, _, lab in self.edges.values() if lab is not None)

    def reachable_from(self, v: int) -> set[int]:
        seen = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for e in self._out[u]:
                h = self.edges[e][1]
                if h not in seen:
                    seen.add(h)
                    stack.append(h)
        return seen

    def reaching(self, v: int) -> set[int]:
        seen = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for e in self._in[u]:
                t = self.edges[e][0]
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return seen

    def path_nodes(self, path: Sequence[int], start: int | None = None) -> list[int]:
        """Node sequence of an edge path, starting at ``start`` (default: the source)."""
        nodes = [self.source if start is None else start]
        for e in path:
            t, h, _ = self.edges[e]
            if t != nodes[-1]:
                raise PreconditionError(f"edge {e} does not continue the path at node {nodes[-1]}")
            nodes.append(h)
        return nodes

    def __eq__(self, other):
        if not isinstance(other, Nbp):
            return NotImplemented
        return (self.nodes, self.edges, self.source, self.sink) == (other.nodes, other.edges, other.source, other.sink)

    def __hash__(self):
        return hash((self.nodes, tuple(sorted(self.edges.items())), self.source, self.sink))

    def __repr__(self):
        return f"Nbp(nodes={len(self.nodes)}, edges={len(self.edges)})"


def _fmt_label(lab: Label) -> str:
    if lab is None:
        return ""
    return f"{lab[0]}" if lab[1] else f"~{lab[0]}"


# --------------------------------------------------------------------------
# semantics

def carried_matrix(z: Nbp, rows: np.ndarray, variables: Sequence[int]) -> np.ndarray:
    """Row-wise: does some source-sink path have every label true under the row?"""
    col = {v: i for i, v in enumerate(variables)}
    missing = z.variables() - set(col)
    if missing:
        raise PreconditionError(f"program variables {sorted(missing)} not in the universe")
    return _reach(z, rows, col, z.source)[z.sink]


def _reach(z: Nbp, rows: np.ndarray, col: Mapping[int, int], start: int, allowed: set[int] | None = None):
    reach = {start: np.ones(rows.shape[0], dtype=bool)}
    for v in z.topo_order:
        if v not in reach:
            continue
        for e in z.out_edges(v):
            _, h, lab = z.edges[e]
            if allowed is not None and h not in allowed:
                continue
            if lab is None:
                val = reach[v]
            elif lab[1]:
                val = reach[v] & rows[:, col[lab[0]]]
            else:
                val = reach[v] & ~rows[:, col[lab[0]]]
            reach[h] = reach[h] | val if h in reach else val
    return _Default(reach, rows.shape[0])


class _Default(dict):
    def __init__(self, data, n):
        super().__init__(data)
        self.n = n

    def __missing__(self, key):
        return np.zeros(self.n, dtype=bool)


def through_matrix(z: Nbp, rows: np.ndarray, variables: Sequence[int], waypoints: Sequence[int]) -> np.ndarray:
    """Rows carried by a source-sink path visiting ``waypoints`` in order.

    For a total assignment a path is consistent exactly when all its labels
    hold, so visiting the waypoints splits into independent segments.
    """
    col = {v: i for i, v in enumerate(variables)}
    stops = [z.source, *waypoints, z.sink]
    ok = np.ones(rows.shape[0], dtype=bool)
    for a, b in zip(stops, stops[1:]):
        ok &= _reach(z, rows, col, a)[b]
    return ok


def carried_assignments(z: Nbp, variables: Sequence[int] | None = None, cap: int | None = None) -> list[LiteralSet]:
    """All total assignments over ``variables`` (default Var(z)) carried by ``z``."""
    variables = tuple(sorted(z.variables())) if variables is None else tuple(sorted(variables))
    n = len(variables)
    cap = _config.resolve(cap, _config.enum_var_cap)
    if n > cap:
        raise SizeError("carried-assignment enumeration variable count", n, cap)
    out = []
    for rows in assignment_chunks(n):
        out.extend(rows_to_literal_sets(rows[carried_matrix(z, rows, variables)], variables))
    return out


def represents(z: Nbp, f: Cnf, strict: bool = True, cap: int | None = None) -> bool:
    """Whether ``z`` carries exactly the models of ``f``.

    With ``strict`` the variable sets must coincide; otherwise variables of
    ``f`` missing from ``z`` are unconstrained by ``z``.
    """
    zv, fv = z.variables(), frozenset(f.variables)
    if (strict and zv != fv) or not zv <= fv:
        raise PreconditionError(f"variable mismatch: program {sorted(zv)} vs CNF {sorted(fv)}")
    n = len(f.variables)
    cap = _config.resolve(cap, _config.enum_var_cap)
    if n > cap:
        raise SizeError("representation check variable count", n, cap)
    for rows in assignment_chunks(n):
        if not np.array_equal(carried_matrix(z, rows, f.variables), clause_matrix_eval(f, rows)):
            return False
    return True


def is_monotone(z: Nbp) -> bool:
    return all(lab is None or lab[1] for _, _, lab in z.edges.values())


def read_bound(z: Nbp) -> int:
    """Largest number of edges labelled with one variable on a source-sink path."""
    best = 0
    for x in sorted(z.variables()):
        count = {z.source: 0}
        for v in z.topo_order:
            for e in z.out_edges(v):
                _, h, lab = z.edges[e]
                c = count[v] + (1 if lab is not None and lab[0] == x else 0)
                if c > count.get(h, -1):
                    count[h] = c
        best = max(best, count[z.sink])
    return best


# --------------------------------------------------------------------------
# paths and fragments

def paths_between(z: Nbp, x: int, y: int, cap: int | None = None) -> Iterator[tuple[int, ...]]:
    """All x->y paths as edge-id tuples, depth first in edge-id order."""
    cap = _config.resolve(cap, _config.path_cap)
    useful = z.reaching(y)
    if x not in useful:
        return
    count = 0
    stack: list[tuple[int, tuple[int, ...]]] = [(x, ())]
    while stack:
        v, path = stack.pop()
        if v == y:
            count += 1
            if count > cap:
                raise SizeError("path enumeration count", count, cap)
            yield path
            continue
        for e in reversed(z.out_edges(v)):
            h = z.edges[e][1]
            if h in useful:
                stack.append((h, path + (e,)))


def source_sink_paths(z: Nbp, cap: int | None = None) -> Iterator[tuple[int, ...]]:
    return paths_between(z, z.source, z.sink, cap)


def count_paths(z: Nbp, x: int | None = None, y: int | None = None) -> int:
    x = z.source if x is None else x
    y = z.sink if y is None else y
    ways = {x: 1}
    for v in z.topo_order:
        if v not in ways:
            continue
        for e in z.out_edges(v):
            h = z.edges[e][1]
            ways[h] = ways.get(h, 0) + ways[v]
    return ways.get(y, 0)


def path_labels(z: Nbp, path: Iterable[int]) -> LiteralSet:
    """A(P); raises if the path is inconsistent."""
    labs = [z.edges[e][2] for e in path if z.edges[e][2] is not None]
    return LiteralSet.from_literals(labs)


def is_consistent(z: Nbp, path: Iterable[int]) -> bool:
    try:
        path_labels(z, path)
    except PreconditionError:
        return False
    return True


def is_read_once_path(z: Nbp, path: Iterable[int]) -> bool:
    seen = set()
    for e in path:
        lab = z.edges[e][2]
        if lab is not None:
            if lab[0] in seen:
                return False
            seen.add(lab[0])
    return True


def greedy_fragments(z: Nbp, path: Sequence[int]) -> list[int]:
    """Start positions of read-once fragments, cutting only when a variable repeats."""
    starts = [0]
    current: set[int] = set()
    for i, e in enumerate(path):
        lab = z.edges[e][2]
        if lab is None:
            continue
        if lab[0] in current:
            starts.append(i)
            current = set()
        current.add(lab[0])
    return starts


def separability_number(z: Nbp, method: str = "paths", cap: int | None = None) -> int:
    """Max over source-sink paths of the fewest read-once fragments covering it.

    ``paths`` enumerates paths (consistent ones only, unless monotone) up to
    the path cap. ``dp`` runs over (node, current fragment variables)
    states and assumes every path is consistent, which holds for monotone
    programs.
    """
    if method == "paths":
        monotone = is_monotone(z)
        best = 0
        for p in source_sink_paths(z, cap):
            if not monotone and not is_consistent(z, p):
                continue
            best = max(best, len(greedy_fragments(z, p)))
        return best
    if method == "dp":
        variables = sorted(z.variables())
        if len(variables) > 20 and cap is None:
            raise SizeError("separability DP variable count", len(variables), 20)
        bit = {x: 1 << i for i, x in enumerate(variables)}
        states: dict[int, dict[int, int]] = {z.source: {0: 1}}
        for v in z.topo_order:
            if v not in states:
                continue
            for e in z.out_edges(v):
                _, h, lab = z.edges[e]
                target = states.setdefault(h, {})
                for mask, count in states[v].items():
                    if lab is None:
                        nm, nc = mask, count
                    elif mask & bit[lab[0]]:
                        nm, nc = bit[lab[0]], count + 1
                    else:
                        nm, nc = mask | bit[lab[0]], count
                    if target.get(nm, 0) < nc:
                        target[nm] = nc
        return max(states[z.sink].values())
    raise PreconditionError(f"unknown method {method!r}")


# --------------------------------------------------------------------------
# constructions

def build_star_mnbp(star: Graph, offset: int | None = None, center: int | None = None) -> Nbp:
    """Read-once monotone program for the padded CNF of a star K_{1,m}.

    Nodes 0..m form a chain; the edge 0 -> m carries the centre, and each
    step i-1 -> i carries two parallel edges: leaf i and its edge variable.
    ``offset`` is the edge-variable offset of the host graph.
    """
    m = star.num_edges()
    if m < 1:
        raise PreconditionError("star needs at least one edge")
    if center is None:
        hubs = [v for v in star.vertices if star.degree(v) == m]
        if not hubs:
            raise PreconditionError("graph is not a star")
        center = hubs[0]
    if star.degree(center) != m or star.num_vertices() != m + 1:
        raise PreconditionError("graph is not a star centred at the given vertex")
    offset = edge_var_offset(star) if offset is None else offset
    edges: dict[int, tuple[int, int, Label]] = {0: (0, m, (center, True))}
    for i, eid in enumerate(star.incident_edges(center), 1):
        u, v = star.edges[eid]
        leaf = v if u == center else u
        edges[len(edges)] = (i - 1, i, (leaf, True))
        edges[len(edges)] = (i - 1, i, (offset + eid, True))
    return Nbp(range(m + 1), edges, 0, m)


def build_kn_smnbp(n: int) -> Nbp:
    """Chain of the n star programs of K_n, one per centre vertex."""
    if n < 2:
        raise PreconditionError("n must be at least 2")
    g = complete_graph(n)
    offset = edge_var_offset(g)
    stars = [build_star_mnbp(edge_induced_subgraph(g, g.incident_edges(v)), offset, center=v) for v in range(n)]
    return chain(stars)


def chain(zs: Sequence[Nbp]) -> Nbp:
    """Identify the sink of each program with the source of the next."""
    if not zs:
        raise PreconditionError("chain needs at least one program")
    nodes = [0]
    edges: dict[int, tuple[int, int, Label]] = {}
    cur = 0
    next_id = 1
    for z in zs:
        mapping = {z.source: cur}
        for v in z.topo_order:
            if v not in mapping:
                mapping[v] = next_id
                nodes.append(next_id)
                next_id += 1
        for eid in sorted(z.edges):
            t, h, lab = z.edges[eid]
            edges[len(edges)] = (mapping[t], mapping[h], lab)
        cur = mapping[z.sink]
    return Nbp(nodes, edges, 0, cur)


def subdivide(z: Nbp) -> Nbp:
    """Replace edge e by a 3-edge path, the label (if any) on the middle edge.

    Edge e becomes edges 3e, 3e+1, 3e+2 through new nodes base+2e, base+2e+1.
    """
    base = max(z.nodes) + 1
    nodes = list(z.nodes)
    edges: dict[int, tuple[int, int, Label]] = {}
    for eid in sorted(z.edges):
        t, h, lab = z.edges[eid]
        a, b = base + 2 * eid, base + 2 * eid + 1
        nodes.extend((a, b))
        edges[3 * eid] = (t, a, None)
        edges[3 * eid + 1] = (a, b, lab)
        edges[3 * eid + 2] = (b, h, None)
    return Nbp(nodes, edges, z.source, z.sink)


def subdivide_edge(z: Nbp, eid: int, label_first: bool = True) -> Nbp:
    """Split one edge into two through a new node; the label goes on the first half by default."""
    t, h, lab = z.edges[eid]
    new = max(z.nodes) + 1
    nid = max(z.edges) + 1
    edges = dict(z.edges)
    edges[eid] = (t, new, lab if label_first else None)
    edges[nid] = (new, h, None if label_first else lab)
    return Nbp(list(z.nodes) + [new], edges, z.source, z.sink)


def is_junction(z: Nbp, v: int) -> bool:
    return len(z.in_edges(v)) > 1 or len(z.out_edges(v)) > 1


def check_subdivided(z: Nbp) -> list[tuple[str, int]]:
    """Violations of the two subdivided-program conditions, as (condition, edge id)."""
    out = []
    for eid in sorted(z.edges):
        t, h, lab = z.edges[eid]
        if is_junction(z, t) and is_junction(z, h):
            out.append(("adjacent-junctions", eid))
        if lab is not None and (is_junction(z, t) or is_junction(z, h)):
            out.append(("labelled-edge-at-junction", eid))
    return out


# --------------------------------------------------------------------------
# read-once structure

class ReadOnceTable:
    """For every node x, which y make every x->y path read-once.

    Propagates two variable bitmasks per target: variables seen on some path
    and variables seen twice on some path.
    """

    def __init__(self, z: Nbp):
        self.z = z
        variables = sorted(z.variables())
        self.bit = {x: 1 << i for i, x in enumerate(variables)}
        self.variables = variables
        self._once: dict[int, dict[int, int]] = {}
        self._twice: dict[int, dict[int, int]] = {}
        pos = {v: i for i, v in enumerate(z.topo_order)}
        for x in z.nodes:
            ge1 = {x: 0}
            ge2 = {x: 0}
            for v in z.topo_order[pos[x]:]:
                if v not in ge1:
                    continue
                for e in z.out_edges(v):
                    _, h, lab = z.edges[e]
                    b = self.bit[lab[0]] if lab is not None else 0
                    n1 = ge1[v] | b
                    n2 = ge2[v] | (ge1[v] & b)
                    ge1[h] = ge1.get(h, 0) | n1
                    ge2[h] = ge2.get(h, 0) | n2
            self._once[x] = ge1
            self._twice[x] = ge2

    def reachable(self, x: int, y: int) -> bool:
        return y in self._once[x]

    def read_once(self, x: int, y: int) -> bool:
        """Every x->y path is read-once (requires y reachable from x)."""
        if y not in self._twice[x]:
            raise PreconditionError(f"node {y} is not reachable from {x}")
        return self._twice[x][y] == 0

    def span_variables(self, x: int, y: int) -> frozenset[int]:
        """V(x, y): variables labelling some x->y path."""
        mask = self._once[x].get(y)
        if mask is None:
            raise PreconditionError(f"node {y} is not reachable from {x}")
        return frozenset(v for v in self.variables if mask & self.bit[v])


@dataclass(frozen=True)
class VertexInfo:
    junction: bool
    read_once: bool
    minimal_non_read_once: bool


def classify_vertices(z: Nbp, table: ReadOnceTable | None = None) -> dict[int, VertexInfo]:
    table = table or ReadOnceTable(z)
    ro = {v: table.read_once(z.source, v) for v in z.nodes}
    out = {}
    for v in z.nodes:
        preds = {z.edges[e][0] for e in z.in_edges(v)}
        minimal = not ro[v] and all(ro[u] for u in preds)
        out[v] = VertexInfo(is_junction(z, v), ro[v], minimal)
    return out


def minimal_non_read_once(z: Nbp) -> list[int]:
    return sorted(v for v, info in classify_vertices(z).items() if info.minimal_non_read_once)


@dataclass(frozen=True)
class PathAnalysis:
    path: tuple[int, ...]
    fragments: tuple[int, ...]
    pivot: int | None
    prepivot: int | None
    yardsticks: tuple[int, ...] | None


def pivot_prepivot(z: Nbp, path: Sequence[int], d: int | None = None, table: ReadOnceTable | None = None) -> PathAnalysis:
    """Pivot (first non-read-once node of the path) and its predecessor.

    When ``d`` is given the analysis also carries the path's yardsticks.
    """
    table = table or ReadOnceTable(z)
    nodes = z.path_nodes(path)
    if nodes[-1] != z.sink:
        raise PreconditionError("path does not end at the sink")
    pivot = prepivot = None
    for i, v in enumerate(nodes):
        if not table.read_once(z.source, v):
            pivot = v
            prepivot = nodes[i - 1] if i > 0 else None
            break
    yard = yardsticks_for_path(z, path, d, table) if d is not None else None
    return PathAnalysis(tuple(path), tuple(greedy_fragments(z, path)), pivot, prepivot, yard)


def reachable_subprogram(z: Nbp, v: int) -> Nbp:
    """Z_v: the program induced by v and everything reachable from it."""
    keep = z.reachable_from(v)
    edges = {e: t for e, t in z.edges.items() if t[0] in keep}
    return Nbp(keep, edges, v, z.sink)


def extract_between(z: Nbp, x: int, y: int) -> Nbp:
    """Z(x, y): the union of all x->y paths, labels preserved."""
    fwd = z.reachable_from(x)
    if y not in fwd:
        raise PreconditionError(f"node {y} is not reachable from {x}")
    keep = fwd & z.reaching(y)
    edges = {e: t for e, t in z.edges.items() if t[0] in keep and t[1] in keep}
    return Nbp(keep, edges, x, y)


def yardsticks_for_path(z: Nbp, path: Sequence[int], d: int, table: ReadOnceTable | None = None) -> tuple[int, ...] | None:
    """Fewest marks source = u_1, ..., u_{a+1} = sink on the path with every
    program path between consecutive marks read-once; None if more than
    d + 1 marks are needed. Among optimal choices each mark's predecessor is
    the earliest possible one.
    """
    table = table or ReadOnceTable(z)
    nodes = z.path_nodes(path)
    if nodes[-1] != z.sink:
        raise PreconditionError("path does not end at the sink")
    n = len(nodes)
    best = [0] * n
    prev = [-1] * n
    best[0] = 1
    for i in range(1, n):
        cand = None
        for j in range(i):
            if best[j] and table.read_once(nodes[j], nodes[i]):
                if cand is None or best[j] + 1 < cand[0]:
                    cand = (best[j] + 1, j)
        best[i], prev[i] = cand if cand else (0, -1)
    if n == 1:
        return (nodes[0],) if d >= 0 else None
    if best[-1] == 0 or best[-1] > d + 1:
        return None
    marks = []
    i = n - 1
    while i != -1:
        marks.append(nodes[i])
        i = prev[i]
    return tuple(reversed(marks))


# --------------------------------------------------------------------------
# fixtures

def noyard_program() -> Nbp:
    """A 2-separable monotone program on which one path has no yardsticks.

    Nodes: 0 = x1 (source), 1 = left branch, 2 = x2, 3 = x3, 4, 5 = sink.
    Variables v1, v2, v3 are ids 1, 2, 3.
    """
    edges = {
        0: (0, 1, (3, True)),
        1: (0, 2, (1, True)),
        2: (1, 3, (3, True)),
        3: (2, 3, (2, True)),
        4: (3, 4, (1, True)),
        5: (4, 5, (2, True)),
    }
    return Nbp(range(6), edges, 0, 5)


def zxy_program() -> Nbp:
    """Program with a read-once span between x = 1 and y = 5.

    Nodes: 0 source, 1 x, 2/3/4 middle, 5 y, 6 sink, 7 a branch that
    bypasses y. Variables v1..v4 are ids 1..4.
    """
    edges = {
        0: (0, 1, None),
        1: (0, 7, (1, True)),
        2: (1, 2, (1, True)),
        3: (1, 3, (1, True)),
        4: (1, 4, (2, True)),
        5: (2, 5, (2, True)),
        6: (3, 5, (3, True)),
        7: (4, 5, (3, True)),
        8: (5, 6, None),
        9: (2, 7, None),
        10: (7, 6, (4, True)),
    }
    return Nbp(range(8), edges, 0, 6)


# --------------------------------------------------------------------------
# formats

def nbp_to_json(z: Nbp) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "nodes": list(z.nodes),
        "edges": [
            {"id": e, "from": t, "to": h, "label": None if lab is None else [lab[0], lab[1]]}
            for e, (t, h, lab) in sorted(z.edges.items())
        ],
        "source": z.source,
        "sink": z.sink,
    }


def nbp_from_json(data: Mapping) -> Nbp:
    edges = {}
    for i, item in enumerate(data["edges"]):
        lab = item.get("label")
        edges[int(item.get("id", i))] = (item["from"], item["to"], None if lab is None else (int(lab[0]), bool(lab[1])))
    return Nbp(data["nodes"], edges, data["source"], data["sink"])


def nbp_to_dot(z: Nbp, name: str = "Z") -> str:
    lines = [f"digraph {name} {{", "  rankdir=TB;"]
    for v in z.nodes:
        shape = "doublecircle" if v in (z.source, z.sink) else "circle"
        lines.append(f"  n{v} [label=\"{v}\", shape={shape}];")
    for e, (t, h, lab) in sorted(z.edges.items()):
        lines.append(f"  n{t} -> n{h} [label=\"{_fmt_label(lab)}\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"
