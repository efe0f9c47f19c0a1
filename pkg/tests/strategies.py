"""Hypothesis strategies shared by the test modules."""
from hypothesis import strategies as st

from dpathwidth.graph import Graph


@st.composite
def small_graphs(draw, max_vertices=7, min_vertices=1, allow_isolated=True):
    n = draw(st.integers(min_vertices, max_vertices))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    if allow_isolated:
        return Graph.from_pairs(sorted(chosen), range(n))
    return Graph.from_pairs(sorted(chosen))


@st.composite
def connected_graphs(draw, max_vertices=7):
    """A random tree plus extra edges."""
    n = draw(st.integers(1, max_vertices))
    pairs = [(draw(st.integers(0, v - 1)), v) for v in range(1, n)]
    extra = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in pairs]
    if extra:
        pairs += draw(st.lists(st.sampled_from(extra), unique=True, max_size=n))
    return Graph.from_pairs(sorted(pairs), range(n))


@st.composite
def small_cnfs(draw, max_vars=6, max_clauses=6, max_len=3):
    """CNFs over variables 0..n-1 without tautologies or repeated clauses."""
    from dpathwidth.cnf import Cnf, LiteralSet
    n = draw(st.integers(1, max_vars))
    seen = set()
    clauses = []
    for _ in range(draw(st.integers(0, max_clauses))):
        vs = draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=max_len, unique=True))
        signs = draw(st.lists(st.booleans(), min_size=len(vs), max_size=len(vs)))
        c = LiteralSet([v for v, s in zip(vs, signs) if s], [v for v, s in zip(vs, signs) if not s])
        if c not in seen:
            seen.add(c)
            clauses.append(c)
    return Cnf(range(n), clauses)


@st.composite
def small_nbps(draw, max_nodes=7, num_vars=3, monotone=True):
    """Random DAG programs on nodes 0..n-1 with source 0 and sink n-1."""
    from dpathwidth.nbp import Nbp
    n = draw(st.integers(2, max_nodes))
    labels = st.one_of(st.none(), st.tuples(st.integers(1, num_vars), st.just(True) if monotone else st.booleans()))
    edges = {}
    keys = set()

    def add(t, h):
        lab = draw(labels)
        if (t, h, lab) not in keys:
            keys.add((t, h, lab))
            edges[len(edges)] = (t, h, lab)

    for v in range(1, n):
        add(draw(st.integers(0, v - 1)), v)
    for v in range(n - 1):
        if not any(t == v for t, _, _ in edges.values()):
            add(v, draw(st.integers(v + 1, n - 1)))
    for _ in range(draw(st.integers(0, n))):
        t = draw(st.integers(0, n - 2))
        add(t, draw(st.integers(t + 1, n - 1)))
    return Nbp(range(n), edges, 0, n - 1)
