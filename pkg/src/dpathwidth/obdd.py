"""Ordered BDDs compiled from a path decomposition of the CNF's primal graph.

The compiler sweeps the variables in the order in which they enter the
decomposition. A state is the set of clauses that have been touched but not
yet satisfied; every such clause still has an unassigned variable, so the
state is determined by the values of assigned variables lying in the bag
where the next variable first appears. That caps each level at 2^(w+1)
states.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _config
from .cnf import Cnf, LiteralSet, assignment_chunks, clause_matrix_eval, primal_graph
from .decomposition import PathDecomposition, validate
from .errors import PreconditionError, SizeError
from .nbp import Nbp

SCHEMA_VERSION = 1
FALSE, TRUE = 0, 1


@dataclass(frozen=True)
class Obdd:
    """Nodes 0 (False) and 1 (True) are the sinks; others map to (var, low, high)."""

    order: tuple[int, ...]
    root: int
    nodes: Mapping[int, tuple[int, int, int]]

    def __init__(self, order: Iterable[int], root: int, nodes: Mapping[int, tuple[int, int, int]]):
        object.__setattr__(self, "order", tuple(order))
        object.__setattr__(self, "root", int(root))
        object.__setattr__(self, "nodes", {int(k): tuple(v) for k, v in sorted(nodes.items())})

    def variables(self) -> frozenset[int]:
        return frozenset(self.order)

    def reachable(self) -> list[int]:
        seen = {self.root}
        stack = [self.root]
        while stack:
            u = stack.pop()
            if u in self.nodes:
                for w in self.nodes[u][1:]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
        return sorted(seen)

    def size(self) -> int:
        """Reachable node count, sinks included."""
        return len(self.reachable())

    def is_constant(self) -> bool:
        return self.root in (FALSE, TRUE)


def order_from_path_decomposition(pd: PathDecomposition, variables: Iterable[int] | None = None) -> tuple[int, ...]:
    """Sort by (first bag, last bag, id)."""
    first: dict[int, int] = {}
    last: dict[int, int] = {}
    for i, bag in enumerate(pd.bags):
        for v in bag:
            first.setdefault(v, i)
            last[v] = i
    vs = sorted(first) if variables is None else sorted(set(variables))
    missing = [v for v in vs if v not in first]
    if missing:
        raise PreconditionError(f"variables {missing} appear in no bag")
    return tuple(sorted(vs, key=lambda v: (first[v], last[v], v)))


def compile_cnf(f: Cnf, pd: PathDecomposition, check: bool = True) -> Obdd:
    """Compile ``f`` along ``pd`` and reduce the result."""
    if check:
        problems = validate(pd.restrict(f.variables), primal_graph(f))
        if problems:
            raise PreconditionError(f"decomposition invalid for the primal graph: {problems[0]}")
    order = order_from_path_decomposition(pd, f.variables)
    if any(len(c) == 0 for c in f.clauses):
        return Obdd(order, FALSE, {})
    if not order:
        return Obdd(order, TRUE, {})
    pos = {v: i for i, v in enumerate(order)}
    n = len(order)
    # per clause: first and last position of its variables
    span = []
    for c in f.clauses:
        ps = [pos[v] for v in c.variables()]
        span.append((min(ps), max(ps)))
    by_var: list[list[int]] = [[] for _ in range(n)]
    for ci, c in enumerate(f.clauses):
        for v in c.variables():
            by_var[pos[v]].append(ci)

    # levels[i]: state -> node id for the node testing order[i]
    raw: dict[int, tuple[int, int, int]] = {}
    next_id = 2
    level: dict[frozenset[int], int] = {frozenset(): next_id}
    next_id += 1
    for i in range(n):
        var = order[i]
        following: dict[frozenset[int], int] = {}
        for state, node in sorted(level.items(), key=lambda kv: kv[1]):
            kids = []
            for value in (False, True):
                pending = set(state)
                dead = False
                for ci in by_var[i]:
                    first, last = span[ci]
                    if ci not in state and first < i:
                        continue  # satisfied earlier
                    c = f.clauses[ci]
                    hit = (var in c.pos) if value else (var in c.neg)
                    if hit:
                        pending.discard(ci)
                    elif last == i:
                        dead = True
                        break
                    else:
                        pending.add(ci)
                if dead:
                    kids.append(FALSE)
                    continue
                key = frozenset(pending)
                if i == n - 1:
                    kids.append(TRUE if not key else FALSE)
                    continue
                if key not in following:
                    following[key] = next_id
                    next_id += 1
                kids.append(following[key])
            raw[node] = (var, kids[0], kids[1])
        level = following
    return reduce_obdd(Obdd(order, 2, raw))


def reduce_obdd(z: Obdd) -> Obdd:
    """Drop redundant tests and merge duplicate nodes, bottom-up."""
    pos = {v: i for i, v in enumerate(z.order)}
    live = [u for u in z.reachable() if u in z.nodes]
    live.sort(key=lambda u: -pos[z.nodes[u][0]])
    canon: dict[int, int] = {FALSE: FALSE, TRUE: TRUE}
    unique: dict[tuple[int, int, int], int] = {}
    out: dict[int, tuple[int, int, int]] = {}
    for u in live:
        var, lo, hi = z.nodes[u]
        lo, hi = canon[lo], canon[hi]
        if lo == hi:
            canon[u] = lo
            continue
        key = (var, lo, hi)
        if key not in unique:
            unique[key] = u
            out[u] = key
        canon[u] = unique[key]
    # renumber deterministically: sinks 0/1, then by (level, old id)
    ids = sorted(out, key=lambda u: (pos[out[u][0]], u))
    renum = {FALSE: FALSE, TRUE: TRUE}
    renum.update({u: i + 2 for i, u in enumerate(ids)})
    nodes = {renum[u]: (out[u][0], renum[out[u][1]], renum[out[u][2]]) for u in ids}
    return Obdd(z.order, renum[canon[z.root]], nodes)


def size_bound(width: int, n: int) -> int:
    """2^(w+1) * (n+1)."""
    return 2 ** (width + 1) * (n + 1)


def check_structure(z: Obdd) -> list[str]:
    """Order, read-once and out-degree violations; empty when well formed."""
    pos = {v: i for i, v in enumerate(z.order)}
    problems = []
    for u, (var, lo, hi) in z.nodes.items():
        if u in (FALSE, TRUE):
            problems.append(f"node {u} reuses a sink id")
        if var not in pos:
            problems.append(f"node {u} tests {var}, which is outside the order")
            continue
        for w in (lo, hi):
            if w in (FALSE, TRUE):
                continue
            if w not in z.nodes:
                problems.append(f"node {u} points to missing node {w}")
            elif pos[z.nodes[w][0]] <= pos[var]:
                problems.append(f"edge {u}->{w} violates the order")
    if z.root not in z.nodes and z.root not in (FALSE, TRUE):
        problems.append("root is missing")
    return problems


def evaluate(z: Obdd, s: LiteralSet) -> bool:
    missing = z.variables() - s.variables()
    if missing:
        raise PreconditionError(f"assignment is partial: missing {sorted(missing)}")
    u = z.root
    while u not in (FALSE, TRUE):
        var, lo, hi = z.nodes[u]
        u = hi if var in s.pos else lo
    return u == TRUE


def evaluate_rows(z: Obdd, rows: np.ndarray, variables: Sequence[int]) -> np.ndarray:
    """Vectorized evaluation; ``rows`` has one column per entry of ``variables``."""
    col = {v: i for i, v in enumerate(variables)}
    missing = z.variables() - set(col)
    if missing:
        raise PreconditionError(f"rows do not assign {sorted(missing)}")
    size = max(z.nodes, default=1) + 1
    var_col = np.zeros(size, dtype=np.int64)
    lo = np.arange(size, dtype=np.int64)
    hi = np.arange(size, dtype=np.int64)
    for u, (var, a, b) in z.nodes.items():
        var_col[u] = col[var]
        lo[u] = a
        hi[u] = b
    cur = np.full(rows.shape[0], z.root, dtype=np.int64)
    idx = np.arange(rows.shape[0])
    for _ in range(len(z.order) + 1):
        inner = cur > TRUE
        if not inner.any():
            break
        r = idx[inner]
        c = cur[inner]
        bits = rows[r, var_col[c]]
        cur[inner] = np.where(bits, hi[c], lo[c])
    return cur == TRUE


def count_models(z: Obdd) -> int:
    """Satisfying assignments over the diagram's full variable order."""
    n = len(z.order)
    pos = {v: i for i, v in enumerate(z.order)}

    def level(u):
        return n if u in (FALSE, TRUE) else pos[z.nodes[u][0]]

    memo = {FALSE: 0, TRUE: 1}
    for u in sorted((u for u in z.reachable() if u in z.nodes), key=lambda u: -level(u)):
        _, lo, hi = z.nodes[u]
        lv = level(u)
        memo[u] = memo[lo] * 2 ** (level(lo) - lv - 1) + memo[hi] * 2 ** (level(hi) - lv - 1)
    return memo[z.root] * 2 ** level(z.root)


def conjunction_represents(zs: Sequence[Obdd], f: Cnf, cap: int | None = None) -> bool:
    """Whether the conjunction of the diagrams has exactly the models of ``f``."""
    universe = frozenset(f.variables)
    for z in zs:
        if not z.variables() <= universe:
            raise PreconditionError(f"diagram variables {sorted(z.variables() - universe)} outside the CNF")
    n = len(f.variables)
    cap = _config.resolve(cap, _config.enum_var_cap)
    if n > cap:
        raise SizeError("conjunction check variable count", n, cap)
    for rows in assignment_chunks(n):
        got = np.ones(rows.shape[0], dtype=bool)
        for z in zs:
            got &= evaluate_rows(z, rows, f.variables)
        if not np.array_equal(got, clause_matrix_eval(f, rows)):
            return False
    return True


def constant(value: bool, order: Iterable[int] = ()) -> Obdd:
    return Obdd(order, TRUE if value else FALSE, {})


# --------------------------------------------------------------------------
# conversions and formats

def obdd_to_nbp(z: Obdd, monotone: bool = False) -> Nbp:
    """The diagram as a branching program: drop the False sink.

    With ``monotone`` negative edges become unlabelled; the result then
    represents the same function whenever that function is monotone.
    """
    keep = [u for u in z.reachable() if u != FALSE]
    if z.root == FALSE:
        raise PreconditionError("the constant-False diagram has no source-sink path")
    # keep only nodes that can reach True
    alive = {TRUE}
    for u in sorted((u for u in keep if u in z.nodes), key=lambda u: -z.order.index(z.nodes[u][0])):
        _, lo, hi = z.nodes[u]
        if lo in alive or hi in alive:
            alive.add(u)
    edges = {}
    for u in sorted(alive - {TRUE}):
        var, lo, hi = z.nodes[u]
        if lo in alive:
            edges[len(edges)] = (u, lo, None if monotone else (var, False))
        if hi in alive:
            edges[len(edges)] = (u, hi, (var, True))
    return Nbp(alive, edges, z.root, TRUE)


def obdd_to_json(z: Obdd) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "order": list(z.order),
        "root": z.root,
        "nodes": [{"id": u, "var": v, "low": lo, "high": hi} for u, (v, lo, hi) in sorted(z.nodes.items())],
        "size": z.size(),
    }


def obdd_from_json(data: Mapping) -> Obdd:
    nodes = {int(n["id"]): (int(n["var"]), int(n["low"]), int(n["high"])) for n in data["nodes"]}
    return Obdd(data["order"], data["root"], nodes)


def obdd_to_dot(z: Obdd, name: str = "OBDD") -> str:
    lines = [f"digraph {name} {{", '  n0 [label="0", shape=box];', '  n1 [label="1", shape=box];']
    for u, (var, lo, hi) in sorted(z.nodes.items()):
        lines.append(f'  n{u} [label="{var}"];')
        lines.append(f"  n{u} -> n{lo} [style=dashed];")
        lines.append(f"  n{u} -> n{hi};")
    lines.append("}")
    return "\n".join(lines) + "\n"
