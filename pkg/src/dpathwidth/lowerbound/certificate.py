"""Desk-scale certificates for the path-triple counting argument.

For every source-sink path of a monotone separable program we pick the
consecutive yardstick pair whose forced subgraph has the largest pathwidth,
find a path triple fixing a matching there, and then check with exact
arithmetic that the triples' events cover all models while each one has
probability at most (7/8)^floor(k/4).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction

import numpy as np

from .. import _config
from ..cnf import Cnf, clause_edge, psi_graph
from ..cover import d_cover_search
from ..errors import PreconditionError, PropertyViolation, UnsupportedError
from ..exact import exact_pathwidth
from ..graph import Graph
from ..nbp import (Nbp, ReadOnceTable, is_monotone, separability_number, source_sink_paths, subdivide,
                   through_matrix, yardsticks_for_path)
from .probability import SEVEN_EIGHTHS, VEModel, dyadic, verify_fixedprob
from .separation import FixingTriple, fixing_triple, psi_between

SCHEMA_VERSION = 1
BETA = (Fraction(8, 7), Fraction(1, 12))  # (base, exponent)


def beta_decimal(digits: int = 20) -> str:
    with localcontext() as ctx:
        ctx.prec = digits + 5
        value = (Decimal(8) / Decimal(7)) ** (Decimal(1) / Decimal(12))
        return str(round(value, digits))


def _dyadic_json(p: Fraction) -> dict:
    num, k = dyadic(p)
    return {"numerator": num, "log2_denominator": k}


def _min_nodes(q: int) -> int:
    """Least N with N^3 >= (8/7)^q."""
    n = 1
    while n ** 3 * 7 ** q < 8 ** q:
        n += 1
    return n


@dataclass
class TripleRecord:
    fix: FixingTriple
    probability: Fraction
    bound: Fraction
    paths: int = 0


@dataclass
class Certificate:
    k: int
    d: int
    subdivided: bool
    paths: int
    triples: list[TripleRecord]
    total: Fraction
    bound: Fraction
    program_nodes: int
    program_edges: int
    checks: dict = field(default_factory=dict)

    @property
    def q(self) -> int:
        return self.k // 4

    @property
    def implied_triples(self) -> int:
        """Least integer at or above (8/7)^q."""
        return -(-(8 ** self.q) // 7 ** self.q)

    @property
    def implied_nodes(self) -> int:
        return _min_nodes(self.q)

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "k": self.k,
            "d": self.d,
            "floor_k_over_4": self.q,
            "subdivided": self.subdivided,
            "source_sink_paths": self.paths,
            "triples": [
                {**t.fix.to_json(), "probability": _dyadic_json(t.probability),
                 "bound": [t.bound.numerator, t.bound.denominator], "paths": t.paths}
                for t in self.triples
            ],
            "chain": {
                "lower": 1,
                "sum": _dyadic_json(self.total),
                "upper": [self.bound.numerator, self.bound.denominator],
                "num_triples": len(self.triples),
                "holds": 1 <= self.total <= self.bound,
            },
            "implied": {
                "triples_at_least": self.implied_triples,
                "nodes_at_least": self.implied_nodes,
                "actual_triples": len(self.triples),
                "actual_nodes": self.program_nodes,
                "actual_edges": self.program_edges,
            },
            "beta": {"base": [8, 7], "exponent": [1, 12], "decimal": beta_decimal()},
            "checks": dict(sorted(self.checks.items())),
        }


def _needs_subdivision(z: Nbp, d: int, table: ReadOnceTable, cap: int) -> bool:
    return any(yardsticks_for_path(z, p, d, table) is None for p in source_sink_paths(z, cap))


def certify_lower_bound(f: Cnf, z: Nbp, d: int, k: int | None = None, cap: int | None = None,
                        path_cap: int | None = None) -> Certificate:
    """Build and check the counting certificate for ``z`` against the graph CNF ``f``.

    ``k`` defaults to the exact d-pathwidth of the CNF's graph. The program is
    subdivided first when some path has no yardsticks.
    """
    if not is_monotone(z):
        raise UnsupportedError("certificates need a monotone program")
    path_cap = _config.resolve(path_cap, _config.path_cap)
    sep = separability_number(z, cap=path_cap)
    if sep > d:
        raise PreconditionError(f"program is {sep}-separable, not {d}-separable")
    g = psi_graph(f)
    m = VEModel(g, cap)
    if not z.variables() <= set(m.variables):
        raise PreconditionError("program uses variables outside the CNF")
    if k is None:
        k = d_cover_search(g, d, "exact").width

    table = ReadOnceTable(z)
    subdivided = False
    if _needs_subdivision(z, d, table, path_cap):
        z = subdivide(z)
        table = ReadOnceTable(z)
        subdivided = True
        if _needs_subdivision(z, d, table, path_cap):
            raise PropertyViolation("a path has no yardsticks after subdivision")

    all_edges = set(g.edge_ids())
    pair_cache: dict[tuple[int, int], tuple[tuple[int, ...], int]] = {}
    fix_cache: dict[tuple[int, int, tuple[int, ...]], FixingTriple] = {}
    records: dict[tuple[int, int, int], TripleRecord] = {}
    n_paths = 0
    ex_cap = _config.exact_vertex_cap()

    def pair_info(x, y):
        if (x, y) not in pair_cache:
            clauses = psi_between(f, z, x, y)
            sub = Graph((), {clause_edge(f, ci): g.edges[clause_edge(f, ci)] for ci in clauses})
            if sub.num_vertices() > ex_cap:
                raise PreconditionError(f"forced subgraph between {x} and {y} is too large for exact pathwidth")
            pair_cache[(x, y)] = (clauses, exact_pathwidth(sub)[0])
        return pair_cache[(x, y)]

    for path in source_sink_paths(z, path_cap):
        n_paths += 1
        marks = yardsticks_for_path(z, path, d, table)
        nodes = z.path_nodes(path)
        pairs = list(zip(marks, marks[1:]))
        covered = set()
        for x, y in pairs:
            covered |= {clause_edge(f, ci) for ci in pair_info(x, y)[0]}
        if covered != all_edges:
            raise PropertyViolation(f"forced subgraphs along path {n_paths - 1} miss edges {sorted(all_edges - covered)}")
        x, y = max(pairs, key=lambda p: (pair_info(*p)[1], -pairs.index(p)))
        if pair_info(x, y)[1] < k:
            raise PropertyViolation(f"no yardstick pair of pathwidth >= {k}")
        i, j = nodes.index(x), nodes.index(y)
        key = (x, y, tuple(path[i:j]))
        if key not in fix_cache:
            fix_cache[key] = fixing_triple(f, z, x, y, path[i:j], table, clauses=pair_info(x, y)[0])
        fix = fix_cache[key]
        if fix.triple not in records:
            records[fix.triple] = TripleRecord(fix, Fraction(0), Fraction(0))
        records[fix.triple].paths += 1

    q = k // 4
    union = np.zeros(m.rows.shape[0], dtype=bool)
    triples = []
    for triple in sorted(records):
        rec = records[triple]
        mask = through_matrix(z, m.rows, m.variables, triple)
        union |= mask
        try:
            report = verify_fixedprob(m, rec.fix.clauses, mask, rec.fix.witnesses)
        except PreconditionError as exc:
            raise PropertyViolation(f"triple {triple}: {exc}") from exc
        rec.probability = report.probability
        rec.bound = report.bound
        if len(rec.fix.clauses) < q or rec.probability > SEVEN_EIGHTHS ** q:
            raise PropertyViolation(f"triple {triple} fixes fewer than {q} clauses")
        triples.append(rec)

    total = sum((t.probability for t in triples), Fraction(0))
    bound = len(triples) * SEVEN_EIGHTHS ** q
    cert = Certificate(k, d, subdivided, n_paths, triples, total, bound, len(z.nodes), z.num_edges())
    cert.checks = {
        "union_is_all_models": bool(union.all()),
        "sum_at_least_one": total >= 1,
        "sum_within_bound": total <= bound,
        "triples_at_least_implied": len(triples) * SEVEN_EIGHTHS ** q >= 1,
        "nodes_cubed_at_least_triples": len(z.nodes) ** 3 >= len(triples),
        "total_probability_one": m.total() == 1,
    }
    failed = [name for name, ok in cert.checks.items() if not ok]
    if failed:
        raise PropertyViolation(f"certificate checks failed: {', '.join(sorted(failed))}")
    return cert
