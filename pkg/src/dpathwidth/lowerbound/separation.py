"""Clauses forced between two program nodes, cut matchings, and path triples.

Everything here works on a monotone program ``z`` representing the padded
CNF of a graph. For nodes x, y the clauses satisfied by every x->y path are
found by reachability: a clause is forced iff deleting the edges labelled
with its variables disconnects y from x inside Z(x, y).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence

from .. import _config
from ..cnf import Cnf, clause_edge, psi_graph
from ..errors import PreconditionError, PropertyViolation, SizeError, UnsupportedError
from ..exact import exact_pathwidth
from ..graph import Graph, edge_induced_subgraph
from ..nbp import Nbp, ReadOnceTable, extract_between, is_monotone, path_labels, paths_between
from .probability import FixWitness


def _require_monotone(z: Nbp) -> None:
    if not is_monotone(z):
        raise UnsupportedError("forced-clause analysis needs a monotone program")


def _connected_avoiding(z: Nbp, x: int, y: int, banned: frozenset[int]) -> bool:
    """Is there an x->y path using no edge labelled with a banned variable?"""
    seen = {x}
    stack = [x]
    while stack:
        v = stack.pop()
        if v == y:
            return True
        for e in z.out_edges(v):
            _, h, lab = z.edges[e]
            if lab is not None and lab[0] in banned:
                continue
            if h not in seen:
                seen.add(h)
                stack.append(h)
    return False


def psi_between(f: Cnf, z: Nbp, x: int, y: int) -> tuple[int, ...]:
    """Ids of the clauses satisfied by the labels of every x->y path."""
    _require_monotone(z)
    sub = extract_between(z, x, y)
    out = []
    for ci, c in enumerate(f.clauses):
        if c.neg:
            raise UnsupportedError("forced-clause analysis needs positive clauses")
        if not _connected_avoiding(sub, x, y, c.variables()):
            out.append(ci)
    return tuple(out)


def psi_between_oracle(f: Cnf, z: Nbp, x: int, y: int, cap: int | None = None) -> tuple[int, ...]:
    """Same as :func:`psi_between`, by enumerating the x->y paths."""
    labels = [path_labels(z, p) for p in paths_between(z, x, y, cap)]
    if not labels:
        raise PreconditionError(f"node {y} is not reachable from {x}")
    return tuple(ci for ci, c in enumerate(f.clauses) if all(s.intersects(c) for s in labels))


def graph_between(f: Cnf, z: Nbp, x: int, y: int, clauses: Sequence[int] | None = None) -> Graph:
    """Subgraph of the CNF's graph spanned by the edges of the forced clauses."""
    g = psi_graph(f)
    if clauses is None:
        clauses = psi_between(f, z, x, y)
    return edge_induced_subgraph(g, [clause_edge(f, ci) for ci in clauses])


# --------------------------------------------------------------------------
# witnessing permutations

@dataclass(frozen=True)
class WitnessingPermutation:
    order: tuple[int, ...]
    nodes: tuple[int, ...]
    prefix_lengths: tuple[int, ...]  # len(V(x, x_i)) for each path node x_i

    def prefix(self, i: int) -> frozenset[int]:
        return frozenset(self.order[: self.prefix_lengths[i]])


def witnessing_permutation(z: Nbp, x: int, y: int, path: Sequence[int], f: Cnf | None = None,
                           table: ReadOnceTable | None = None) -> WitnessingPermutation:
    """Order the variables so that every V(x, x_i) along ``path`` is a prefix.

    New variables of each step are appended by id. With ``f``, variables of
    the forced clauses outside V(x, y) are appended last, by id.
    """
    table = table or ReadOnceTable(z)
    if not table.reachable(x, y):
        raise PreconditionError(f"node {y} is not reachable from {x}")
    if not table.read_once(x, y):
        raise PreconditionError(f"Z({x}, {y}) is not read-once")
    nodes = z.path_nodes(path, start=x)
    if nodes[-1] != y:
        raise PreconditionError(f"path does not end at {y}")
    order: list[int] = []
    lengths = []
    prev: frozenset[int] = frozenset()
    for v in nodes:
        cur = table.span_variables(x, v)
        if not prev <= cur:
            raise PropertyViolation(f"V({x}, {v}) does not contain the previous prefix")
        order.extend(sorted(cur - prev))
        lengths.append(len(order))
        prev = cur
    if f is not None:
        extra = set()
        for ci in psi_between(f, z, x, y):
            extra |= f.clauses[ci].variables()
        order.extend(sorted(extra - prev))
    return WitnessingPermutation(tuple(order), tuple(nodes), tuple(lengths))


# --------------------------------------------------------------------------
# matchings across prefixes

def max_bipartite_matching(left: Sequence[int], adj: Mapping[int, Sequence[int]]) -> dict[int, int]:
    """Maximum matching by augmenting paths; returns left -> right."""
    match_right: dict[int, int] = {}

    def augment(u: int, seen: set[int]) -> bool:
        for w in adj.get(u, ()):
            if w in seen:
                continue
            seen.add(w)
            if w not in match_right or augment(match_right[w], seen):
                match_right[w] = u
                return True
        return False

    for u in left:
        augment(u, set())
    return {u: w for w, u in match_right.items()}


def cut_matching(g: Graph, prefix: set[int]) -> list[int]:
    """Edge ids of a maximum matching among edges crossing the prefix cut."""
    adj: dict[int, list[int]] = {}
    for eid in g.edge_ids():
        u, v = g.edges[eid]
        if (u in prefix) != (v in prefix):
            a, b = (u, v) if u in prefix else (v, u)
            adj.setdefault(a, []).append(b)
    for a in adj:
        adj[a].sort()
    m = max_bipartite_matching(sorted(adj), adj)
    return sorted(g.edge_id(a, b) for a, b in m.items())


@dataclass(frozen=True)
class SeparatingPrefix:
    length: int
    matching: tuple[int, ...]  # edge ids
    pathwidth: int | None


def separating_prefix(g: Graph, order: Sequence[int], check: bool = True, cap: int | None = None) -> SeparatingPrefix:
    """The prefix of ``order`` whose cut carries the largest matching (earliest on ties).

    With ``check`` and a graph small enough for the exact solver, asserts the
    matching has at least ceil(pw / 2) edges.
    """
    if sorted(order) != list(g.vertices):
        raise PreconditionError("order is not a permutation of the vertices")
    best: tuple[int, list[int]] = (0, [])
    prefix: set[int] = set()
    for i in range(len(order) + 1):
        if i:
            prefix.add(order[i - 1])
        m = cut_matching(g, prefix)
        if len(m) > len(best[1]):
            best = (i, m)
    pw = None
    cap = _config.resolve(cap, _config.exact_vertex_cap)
    if check and g.num_vertices() <= cap:
        pw = exact_pathwidth(g, cap)[0]
        if len(best[1]) < -(-pw // 2):
            raise PropertyViolation(f"best cut matching {len(best[1])} below ceil({pw}/2)")
    return SeparatingPrefix(best[0], tuple(best[1]), pw)


# --------------------------------------------------------------------------
# path triples

@dataclass(frozen=True)
class FixingTriple:
    triple: tuple[int, int, int]
    clauses: tuple[int, ...]
    witnesses: tuple[FixWitness, ...]
    r: int | None
    r_adjusted: int | None
    case: str

    def to_json(self) -> dict:
        return {
            "triple": list(self.triple),
            "matching": list(self.clauses),
            "witnesses": [w.to_json() for w in self.witnesses],
            "r": self.r,
            "r_adjusted": self.r_adjusted,
            "case": self.case,
        }


def _dichotomy_witness(sub: Nbp, x: int, a: int, y: int, ci: int, clause: frozenset[int], part: frozenset[int]) -> FixWitness:
    """C' if every x->a->y path meets it, else C minus C' (which then must)."""
    def avoidable(banned):
        return _connected_avoiding(sub, x, a, banned) and _connected_avoiding(sub, a, y, banned)

    if not avoidable(part):
        return FixWitness(ci, part)
    rest = clause - part
    if avoidable(rest):
        raise PropertyViolation(f"clause {ci}: neither {sorted(part)} nor its complement is met by every path")
    return FixWitness(ci, rest)


def fixing_triple(f: Cnf, z: Nbp, x: int, y: int, path: Sequence[int], table: ReadOnceTable | None = None,
                  cap: int | None = None, clauses: Sequence[int] | None = None) -> FixingTriple:
    """A node a on ``path`` (an x->y path) whose triple (x, a, y) fixes a large matching.

    The matching comes from the best cut of a witnessing permutation. When
    the cut falls strictly between V(x, x_i) and V(x, x_{i+1}), the larger of
    the two candidate matchings is kept (x_i on ties). With r the exact
    pathwidth of G(x, y), asserts the matching has at least floor(r / 4) clauses.
    """
    _require_monotone(z)
    table = table or ReadOnceTable(z)
    if clauses is None:
        clauses = psi_between(f, z, x, y)
    gxy = graph_between(f, z, x, y, clauses)
    cap = _config.resolve(cap, _config.exact_vertex_cap)
    r = exact_pathwidth(gxy, cap)[0] if gxy.num_vertices() <= cap else None
    r_adj = None if r is None else max(r, 0) - max(r, 0) % 4

    wp = witnessing_permutation(z, x, y, path, table=table)
    forced = set()
    for ci in clauses:
        forced |= f.clauses[ci].variables()
    order = list(wp.order) + sorted(forced - set(wp.order))
    pos = {v: i for i, v in enumerate(order)}
    gverts = set(gxy.vertices)
    pi_g = [v for v in order if v in gverts]
    sp = separating_prefix(gxy, pi_g, check=r is not None, cap=cap)

    clause_of_edge = {clause_edge(f, ci): ci for ci in clauses}
    m0 = [clause_of_edge[e] for e in sp.matching]
    cut = set(order[: pos[pi_g[sp.length - 1]] + 1]) if sp.length else set()

    nodes = wp.nodes
    spans = [wp.prefix(i) for i in range(len(nodes))]
    hit = [i for i, s in enumerate(spans) if s == cut]
    if hit:
        case, a_idx, chosen, part_of = "exact", hit[0], m0, cut
    elif spans[-1] < cut:
        case, a_idx, chosen, part_of = "beyond", len(nodes) - 1, m0, spans[-1]
    else:
        i = max(j for j, s in enumerate(spans) if s < cut)
        if not cut < spans[i + 1]:
            raise PropertyViolation("cut is not nested between consecutive prefixes")
        m1 = [ci for ci in m0 if f.clauses[ci].variables() & spans[i]]
        step = path[i]
        lab = z.edges[step][2]
        on_step = [ci for ci in m0 if lab is not None and lab[0] in f.clauses[ci].variables()]
        m2 = [ci for ci in m0 if ci not in m1 and ci not in on_step]
        if len(m1) >= len(m2):
            case, a_idx, chosen, part_of = "left", i, m1, spans[i]
        else:
            case, a_idx, chosen, part_of = "right", i + 1, m2, spans[i + 1]

    a = nodes[a_idx]
    sub = extract_between(z, x, y)
    witnesses = []
    for ci in chosen:
        c = f.clauses[ci].variables()
        part = frozenset(c & part_of)
        if not part or part == c:
            raise PropertyViolation(f"clause {ci} is not split by V({x}, {a})")
        witnesses.append(_dichotomy_witness(sub, x, a, y, ci, c, part))
    if r_adj is not None and len(chosen) < r_adj // 4:
        raise PropertyViolation(f"matching {len(chosen)} below floor({r}/4)")
    return FixingTriple((x, a, y), tuple(chosen), tuple(witnesses), r, r_adj, case)


def verify_fix_by_paths(z: Nbp, triple: Sequence[int], witnesses: Sequence[FixWitness], cap: int | None = None) -> bool:
    """Oracle: every path x->a->y has a label in each witness subset."""
    x, a, y = triple
    cap = _config.resolve(cap, _config.path_cap)
    left = [path_labels(z, p).variables() for p in paths_between(z, x, a, cap)]
    right = [path_labels(z, p).variables() for p in paths_between(z, a, y, cap)]
    if not left or not right:
        raise PreconditionError("no path through the triple")
    if len(left) * len(right) > cap:
        raise SizeError("paths through the triple", len(left) * len(right), cap)
    for p, q in product(left, right):
        labels = p | q
        if any(not (labels & w.subset) for w in witnesses):
            return False
    return True
