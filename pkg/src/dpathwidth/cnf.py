"""CNFs, literal sets, the padded graph CNF, clause splitting and brute-force models."""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Mapping

import numpy as np

from . import _config
from .decomposition import DCover
from .errors import NotCliquePreservingError, PreconditionError, SizeError
from .graph import Graph, edge_var_offset, maximal_cliques

CHUNK_BITS = 16


@dataclass(frozen=True)
class LiteralSet:
    """A proper set of literals; also serves as a partial assignment."""

    pos: frozenset[int]
    neg: frozenset[int]

    def __init__(self, pos: Iterable[int] = (), neg: Iterable[int] = ()):
        pos = frozenset(int(v) for v in pos)
        neg = frozenset(int(v) for v in neg)
        if pos & neg:
            raise PreconditionError(f"variables {sorted(pos & neg)} occur with both polarities")
        object.__setattr__(self, "pos", pos)
        object.__setattr__(self, "neg", neg)

    @classmethod
    def from_literals(cls, lits: Iterable[tuple[int, bool]]) -> "LiteralSet":
        lits = list(lits)
        return cls([v for v, b in lits if b], [v for v, b in lits if not b])

    @classmethod
    def from_values(cls, values: Mapping[int, bool]) -> "LiteralSet":
        return cls([v for v, b in values.items() if b], [v for v, b in values.items() if not b])

    def variables(self) -> frozenset[int]:
        return self.pos | self.neg

    def literals(self) -> frozenset[tuple[int, bool]]:
        return frozenset([(v, True) for v in self.pos] + [(v, False) for v in self.neg])

    def value(self, v: int) -> bool | None:
        if v in self.pos:
            return True
        if v in self.neg:
            return False
        return None

    def intersects(self, other: "LiteralSet") -> bool:
        return bool(self.pos & other.pos) or bool(self.neg & other.neg)

    def intersection(self, other: "LiteralSet") -> "LiteralSet":
        return LiteralSet(self.pos & other.pos, self.neg & other.neg)

    def issubset(self, other: "LiteralSet") -> bool:
        return self.pos <= other.pos and self.neg <= other.neg

    def restrict(self, vars_: Iterable[int]) -> "LiteralSet":
        keep = frozenset(vars_)
        return LiteralSet(self.pos & keep, self.neg & keep)

    def merge(self, other: "LiteralSet") -> "LiteralSet":
        """Union; raises if the two sets disagree on a variable."""
        return LiteralSet(self.pos | other.pos, self.neg | other.neg)

    def consistent_with(self, other: "LiteralSet") -> bool:
        return not (self.pos & other.neg) and not (self.neg & other.pos)

    def __len__(self):
        return len(self.pos) + len(self.neg)

    def __repr__(self):
        lits = [f"{v}" for v in sorted(self.pos)] + [f"~{v}" for v in sorted(self.neg)]
        return "{" + ", ".join(lits) + "}"

    def to_json(self) -> dict:
        return {"pos": sorted(self.pos), "neg": sorted(self.neg)}

    @classmethod
    def from_json(cls, data: Mapping) -> "LiteralSet":
        return cls(data.get("pos", ()), data.get("neg", ()))


class Cnf:
    """A clause list over declared variables.

    ``tags`` optionally maps a variable to ``("v", vertex id)`` or
    ``("e", edge id)`` when the CNF comes from a graph.
    """

    __slots__ = ("variables", "clauses", "tags")

    def __init__(self, variables: Iterable[int], clauses: Iterable[LiteralSet], tags: Mapping[int, tuple[str, int]] | None = None):
        self.variables = tuple(sorted(set(int(v) for v in variables)))
        declared = set(self.variables)
        out = []
        seen = set()
        for c in clauses:
            if not isinstance(c, LiteralSet):
                c = LiteralSet(*c)
            missing = c.variables() - declared
            if missing:
                raise PreconditionError(f"clause {c} uses undeclared variables {sorted(missing)}")
            if c in seen:
                raise PreconditionError(f"duplicate clause {c}")
            seen.add(c)
            out.append(c)
        self.clauses = tuple(out)
        self.tags = dict(tags or {})

    def num_vars(self) -> int:
        return len(self.variables)

    def occurring_variables(self) -> frozenset[int]:
        return frozenset().union(*(c.variables() for c in self.clauses)) if self.clauses else frozenset()

    def __eq__(self, other):
        if not isinstance(other, Cnf):
            return NotImplemented
        return self.variables == other.variables and self.clauses == other.clauses

    def __hash__(self):
        return hash((self.variables, self.clauses))

    def __repr__(self):
        return f"Cnf(vars={len(self.variables)}, clauses={len(self.clauses)})"


def conjoin(fs: Iterable[Cnf]) -> Cnf:
    variables: set[int] = set()
    clauses: list[LiteralSet] = []
    tags: dict = {}
    seen = set()
    for f in fs:
        variables.update(f.variables)
        tags.update(f.tags)
        for c in f.clauses:
            if c not in seen:
                seen.add(c)
                clauses.append(c)
    return Cnf(variables, clauses, tags)


# --------------------------------------------------------------------------
# graph CNF

def psi_of_graph(g: Graph, allow_isolated: bool = False) -> Cnf:
    """Clause (u | e | v) for every edge e = {u, v}, in edge-id order.

    Vertex variables keep the vertex id; edge variable e is ``max(V) + 1 + e``.
    Isolated vertices are rejected unless ``allow_isolated`` is set, in which
    case they become unconstrained variables.
    """
    isolated = [v for v in g.vertices if g.degree(v) == 0]
    if isolated and not allow_isolated:
        raise PreconditionError(f"graph has isolated vertices {isolated}")
    offset = edge_var_offset(g)
    tags = {v: ("v", v) for v in g.vertices}
    clauses = []
    for eid in g.edge_ids():
        u, v = g.edges[eid]
        tags[offset + eid] = ("e", eid)
        clauses.append(LiteralSet([u, offset + eid, v]))
    return Cnf(tags.keys(), clauses, tags)


def psi_graph(f: Cnf) -> Graph:
    """Recover the graph behind a CNF produced by :func:`psi_of_graph`."""
    edges = {}
    verts = []
    for var, (kind, ident) in f.tags.items():
        if kind == "v":
            verts.append(ident)
    for c in f.clauses:
        vs = [f.tags.get(x) for x in sorted(c.variables())]
        ends = [ident for kind, ident in filter(None, vs) if kind == "v"]
        eids = [ident for kind, ident in filter(None, vs) if kind == "e"]
        if c.neg or len(ends) != 2 or len(eids) != 1 or len(vs) != 3:
            raise PreconditionError(f"clause {c} is not a vertex-edge-vertex clause")
        edges[eids[0]] = tuple(ends)
    if not f.tags:
        raise PreconditionError("CNF carries no vertex/edge tags")
    return Graph(verts, edges)


def clause_edge(f: Cnf, ci: int) -> int:
    """Edge id of clause ``ci`` of a graph CNF."""
    for x in f.clauses[ci].variables():
        tag = f.tags.get(x)
        if tag and tag[0] == "e":
            return tag[1]
    raise PreconditionError(f"clause {ci} has no edge variable")


def vertex_vars(f: Cnf) -> list[int]:
    return sorted(x for x, t in f.tags.items() if t[0] == "v")


def edge_vars(f: Cnf) -> list[int]:
    return sorted(x for x, t in f.tags.items() if t[0] == "e")


def primal_graph(f: Cnf) -> Graph:
    pairs = set()
    for c in f.clauses:
        pairs.update(combinations(sorted(c.variables()), 2))
    return Graph.from_pairs(sorted(pairs), f.variables)


def max_var_occurrence(f: Cnf) -> int:
    counts: dict[int, int] = {}
    for c in f.clauses:
        for x in c.variables():
            counts[x] = counts.get(x, 0) + 1
    return max(counts.values(), default=0)


def random_structured_cnf(g: Graph, seed: int = 0, max_occurrence: int = 4, density: float = 0.8,
                          max_width: int = 3) -> Cnf:
    """Random clauses over small cliques of ``g`` with random polarities.

    The primal graph is a subgraph of ``g`` and no variable occurs in more
    than ``max_occurrence`` clauses. Variables are the vertices of ``g``.
    """
    rng = random.Random(seed)
    cands = set()
    for q in maximal_cliques(g):
        for size in range(2, min(len(q), max_width) + 1):
            cands.update(combinations(q, size))
    cands = sorted(cands)
    rng.shuffle(cands)
    occ = {v: 0 for v in g.vertices}
    clauses = []
    for q in cands:
        if rng.random() > density or any(occ[v] >= max_occurrence for v in q):
            continue
        signs = [rng.random() < 0.5 for _ in q]
        clauses.append(LiteralSet([v for v, s in zip(q, signs) if s], [v for v, s in zip(q, signs) if not s]))
        for v in q:
            occ[v] += 1
    return Cnf(g.vertices, clauses)


def split_by_cover(f: Cnf, cover: DCover) -> tuple[Cnf, Cnf]:
    """Send each clause to the first part containing its clique.

    The returned CNFs declare exactly the variables their clauses use.
    """
    if cover.d != 2:
        raise PreconditionError(f"expected a 2-cover, got {cover.d} parts")
    halves: list[list[LiteralSet]] = [[], []]
    for c in f.clauses:
        vs = sorted(c.variables())
        for i, (part, _) in enumerate(cover.parts):
            if all(part.has_vertex(v) for v in vs) and all(part.has_edge(a, b) for a, b in combinations(vs, 2)):
                halves[i].append(c)
                break
        else:
            raise NotCliquePreservingError(f"clause {c} lies in no part of the cover")
    out = []
    for cl in halves:
        used = frozenset().union(*(c.variables() for c in cl)) if cl else frozenset()
        out.append(Cnf(used, cl, {v: t for v, t in f.tags.items() if v in used}))
    return out[0], out[1]


# --------------------------------------------------------------------------
# enumeration

def _check_enum_cap(n: int, cap):
    cap = _config.resolve(cap, _config.enum_var_cap)
    if n > cap:
        raise SizeError("assignment enumeration variable count", n, cap)


def assignment_chunks(n: int, chunk_bits: int = CHUNK_BITS) -> Iterator[np.ndarray]:
    """All 2^n assignments as boolean rows; column 0 is the most significant bit."""
    total = 1 << n
    step = 1 << min(chunk_bits, n)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, step):
        idx = np.arange(start, min(start + step, total), dtype=np.int64)
        yield ((idx[:, None] >> shifts[None, :]) & 1).astype(bool)


def clause_matrix_eval(f: Cnf, rows: np.ndarray, variables: tuple[int, ...] | None = None) -> np.ndarray:
    """Row-wise truth value of ``f`` for assignment rows over ``variables``."""
    variables = f.variables if variables is None else variables
    col = {v: i for i, v in enumerate(variables)}
    ok = np.ones(rows.shape[0], dtype=bool)
    for c in f.clauses:
        sat = np.zeros(rows.shape[0], dtype=bool)
        for v in c.pos:
            sat |= rows[:, col[v]]
        for v in c.neg:
            sat |= ~rows[:, col[v]]
        ok &= sat
    return ok


def model_matrix(f: Cnf, cap: int | None = None) -> np.ndarray:
    """Satisfying assignments as a boolean matrix, columns in ``f.variables`` order."""
    n = len(f.variables)
    _check_enum_cap(n, cap)
    blocks = [rows[clause_matrix_eval(f, rows)] for rows in assignment_chunks(n)]
    return np.concatenate(blocks) if blocks else np.zeros((0, n), dtype=bool)


def rows_to_literal_sets(rows: np.ndarray, variables: tuple[int, ...]) -> list[LiteralSet]:
    vs = np.asarray(variables)
    return [LiteralSet(vs[r].tolist(), vs[~r].tolist()) for r in rows]


def enumerate_models(f: Cnf, cap: int | None = None) -> list[LiteralSet]:
    """All satisfying total assignments, lexicographic in variable-id order."""
    return rows_to_literal_sets(model_matrix(f, cap), f.variables)


def count_models_bruteforce(f: Cnf, cap: int | None = None) -> int:
    n = len(f.variables)
    _check_enum_cap(n, cap)
    return int(sum(int(clause_matrix_eval(f, rows).sum()) for rows in assignment_chunks(n)))


def satisfies(s: LiteralSet, f: Cnf) -> bool:
    return all(s.intersects(c) for c in f.clauses)


def falsifies(s: LiteralSet, f: Cnf) -> bool:
    """Some clause has every literal negated by ``s``."""
    return any(c.pos <= s.neg and c.neg <= s.pos for c in f.clauses)


def is_total(s: LiteralSet, variables: Iterable[int]) -> bool:
    return s.variables() == frozenset(variables)


# --------------------------------------------------------------------------
# DIMACS and JSON

def to_dimacs(f: Cnf) -> str:
    index = {v: i + 1 for i, v in enumerate(f.variables)}
    lines = []
    for v in f.variables:
        tag = f.tags.get(v)
        suffix = f" {tag[0]} {tag[1]}" if tag else ""
        lines.append(f"c vmap {index[v]} {v}{suffix}")
    lines.append(f"p cnf {len(f.variables)} {len(f.clauses)}")
    for c in f.clauses:
        lits = sorted([index[v] for v in c.pos] + [-index[v] for v in c.neg], key=lambda x: (abs(x), x))
        lines.append(" ".join(str(x) for x in lits + [0]))
    return "\n".join(lines) + "\n"


def from_dimacs(text: str) -> Cnf:
    vmap: dict[int, int] = {}
    tags: dict[int, tuple[str, int]] = {}
    header = None
    clauses: list[LiteralSet] = []
    pending: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) >= 4 and parts[1] == "vmap":
                dim, var = int(parts[2]), int(parts[3])
                vmap[dim] = var
                if len(parts) >= 6:
                    tags[var] = (parts[4], int(parts[5]))
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise PreconditionError(f"line {lineno}: bad header {raw!r}")
            header = (int(parts[2]), int(parts[3]))
            continue
        if header is None:
            raise PreconditionError(f"line {lineno}: clause before header")
        for tok in line.split():
            x = int(tok)
            if x == 0:
                clauses.append(_dimacs_clause(pending, vmap, lineno))
                pending = []
            else:
                if abs(x) > header[0]:
                    raise PreconditionError(f"line {lineno}: variable {abs(x)} exceeds header count")
                pending.append(x)
    if pending:
        clauses.append(_dimacs_clause(pending, vmap, 0))
    if header is None:
        raise PreconditionError("missing 'p cnf' header")
    if len(clauses) != header[1]:
        raise PreconditionError(f"header declares {header[1]} clauses, found {len(clauses)}")
    variables = [vmap.get(i, i - 1) for i in range(1, header[0] + 1)]
    return Cnf(variables, clauses, tags)


def _dimacs_clause(lits, vmap, lineno) -> LiteralSet:
    pos = {vmap.get(x, x - 1) for x in lits if x > 0}
    neg = {vmap.get(-x, -x - 1) for x in lits if x < 0}
    if pos & neg:
        raise PreconditionError(f"line {lineno}: tautological clause")
    return LiteralSet(pos, neg)


def cnf_to_json(f: Cnf) -> dict:
    return {
        "variables": list(f.variables),
        "clauses": [c.to_json() for c in f.clauses],
        "tags": {str(v): list(t) for v, t in sorted(f.tags.items())},
    }


def cnf_from_json(data: Mapping) -> Cnf:
    tags = {int(v): (t[0], int(t[1])) for v, t in data.get("tags", {}).items()}
    return Cnf(data["variables"], [LiteralSet.from_json(c) for c in data["clauses"]], tags)


def models_to_json(models: Iterable[LiteralSet]) -> list[dict]:
    return [m.to_json() for m in models]
