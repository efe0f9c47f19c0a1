"""The vertex-edge probability space over models of the padded graph CNF.

A model S has probability 2^-(|V| + |Free(S)|), where an edge is free when
some endpoint is true. All arithmetic is exact: each model gets the integer
weight 2^(|E| - |Free(S)|) over the common denominator 2^(|V| + |E|).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from ..cnf import Cnf, LiteralSet, model_matrix, psi_of_graph
from ..errors import PreconditionError, PropertyViolation
from ..graph import Graph, edge_var_offset

SEVEN_EIGHTHS = Fraction(7, 8)


def dyadic(p: Fraction) -> tuple[int, int]:
    """(numerator, k) with p = numerator / 2^k; raises if p is not dyadic."""
    den = p.denominator
    if den & (den - 1):
        raise ValueError(f"{p} is not dyadic")
    return p.numerator, den.bit_length() - 1


class VEModel:
    """Exact probability space on the models of the padded CNF of ``g``.

    Isolated vertices are allowed and act as unconstrained vertex variables.
    """

    def __init__(self, g: Graph, cap: int | None = None):
        self.graph = g
        self.cnf: Cnf = psi_of_graph(g, allow_isolated=True)
        self.offset = edge_var_offset(g)
        self.variables = self.cnf.variables
        self.col = {v: i for i, v in enumerate(self.variables)}
        self._cap = cap
        self._rows: np.ndarray | None = None
        self._weights: np.ndarray | None = None

    @property
    def log2_denominator(self) -> int:
        return self.graph.num_vertices() + self.graph.num_edges()

    def edge_var(self, eid: int) -> int:
        return self.offset + eid

    def clause_vars(self, ci: int) -> frozenset[int]:
        return self.cnf.clauses[ci].variables()

    def clause_edge_id(self, ci: int) -> int:
        return self.graph.edge_ids()[ci]

    @property
    def rows(self) -> np.ndarray:
        if self._rows is None:
            self._rows = model_matrix(self.cnf, self._cap)
        return self._rows

    @property
    def weights(self) -> np.ndarray:
        """Integer weight of each model row: 2^(|E| - |Free|)."""
        if self._weights is None:
            rows = self.rows
            free = np.zeros(rows.shape[0], dtype=np.int64)
            for eid in self.graph.edge_ids():
                u, v = self.graph.edges[eid]
                free += (rows[:, self.col[u]] | rows[:, self.col[v]]).astype(np.int64)
            self._weights = np.left_shift(np.int64(1), self.graph.num_edges() - free)
        return self._weights

    def prob_of_mask(self, mask: np.ndarray) -> Fraction:
        total = int(self.weights[mask].sum(dtype=np.int64)) if mask.any() else 0
        return Fraction(total, 1 << self.log2_denominator)

    def total(self) -> Fraction:
        return self.prob_of_mask(np.ones(self.rows.shape[0], dtype=bool))

    def mask_of(self, s: LiteralSet) -> np.ndarray:
        """Models containing ``s`` (the event Ext(S))."""
        unknown = s.variables() - set(self.col)
        if unknown:
            raise PreconditionError(f"variables {sorted(unknown)} are not in the model")
        mask = np.ones(self.rows.shape[0], dtype=bool)
        for v in s.pos:
            mask &= self.rows[:, self.col[v]]
        for v in s.neg:
            mask &= ~self.rows[:, self.col[v]]
        return mask

    def mask_of_set(self, ss: Iterable[LiteralSet]) -> np.ndarray:
        """Models equal to some member of ``ss`` (members must be total)."""
        index = {tuple(r): i for i, r in enumerate(self.rows.tolist())}
        mask = np.zeros(self.rows.shape[0], dtype=bool)
        for s in ss:
            if s.variables() != frozenset(self.variables):
                raise PreconditionError(f"{s} is not a total assignment")
            key = tuple(v in s.pos for v in self.variables)
            if key not in index:
                raise PreconditionError(f"{s} is not a model")
            mask[index[key]] = True
        return mask

    def models(self) -> list[LiteralSet]:
        vs = np.asarray(self.variables)
        return [LiteralSet(vs[r].tolist(), vs[~r].tolist()) for r in self.rows]


def classify_edges(g: Graph, s: LiteralSet, offset: int | None = None):
    """(free, enforced, guarded) edge-id sets under a possibly partial assignment.

    Enforced: both endpoints false. Free: otherwise. Guarded: both endpoints assigned.
    """
    free, enforced, guarded = set(), set(), set()
    for eid in g.edge_ids():
        u, v = g.edges[eid]
        if u in s.neg and v in s.neg:
            enforced.add(eid)
        else:
            free.add(eid)
        if u in s.variables() and v in s.variables():
            guarded.add(eid)
    return frozenset(free), frozenset(enforced), frozenset(guarded)


def _split(m: VEModel, s: LiteralSet):
    sv = {v for v in s.variables() if v in set(m.graph.vertices)}
    se = {v - m.offset for v in s.variables() if v >= m.offset}
    return sv, se


def is_guarded(m: VEModel, s: LiteralSet) -> bool:
    _, se = _split(m, s)
    _, _, guarded = classify_edges(m.graph, s)
    return se <= guarded


def is_valid(m: VEModel, s: LiteralSet) -> bool:
    """No clause is falsified: every assigned edge variable of an enforced edge is true."""
    _, se = _split(m, s)
    _, enforced, _ = classify_edges(m.graph, s)
    return all(m.edge_var(e) in s.pos for e in se & enforced)


def pr_assignment(m: VEModel, s: LiteralSet) -> Fraction:
    if s.variables() != frozenset(m.variables):
        raise PreconditionError("assignment is not total")
    if not all(s.intersects(c) for c in m.cnf.clauses):
        raise PreconditionError("assignment is not a model")
    free, _, _ = classify_edges(m.graph, s)
    return Fraction(1, 2 ** (m.graph.num_vertices() + len(free)))


def pr_extension(m: VEModel, s: LiteralSet, mode: str = "oracle") -> Fraction:
    """Pr(Ext(S)), by summation (``oracle``) or by 2^-(|S_V| + |Free(S) & S_E|)."""
    if mode == "oracle":
        return m.prob_of_mask(m.mask_of(s))
    if mode != "closed_form":
        raise PreconditionError(f"unknown mode {mode!r}")
    if not is_guarded(m, s):
        raise PreconditionError("closed form needs a guarded assignment")
    if not is_valid(m, s):
        raise PreconditionError("closed form needs a valid assignment")
    sv, se = _split(m, s)
    free, _, _ = classify_edges(m.graph, s)
    return Fraction(1, 2 ** (len(sv) + len(free & se)))


# --------------------------------------------------------------------------
# fixing

@dataclass(frozen=True)
class FixWitness:
    clause: int
    subset: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "subset", frozenset(self.subset))
        if not self.subset:
            raise PreconditionError("witness subset must be non-empty")

    def to_json(self) -> list:
        return [self.clause, sorted(self.subset)]


def proper_subsets(c: LiteralSet) -> list[frozenset[int]]:
    """Proper non-empty subsets of a positive clause, by size then lexicographically."""
    vs = sorted(c.variables())
    return [frozenset(s) for k in range(1, len(vs)) for s in combinations(vs, k)]


def _meets(s: LiteralSet, c: LiteralSet, subset: frozenset[int]) -> bool:
    return bool((s.pos & c.pos & subset) or (s.neg & c.neg & subset))


def fixes(ss: Iterable[LiteralSet], clause: LiteralSet, witness=None, clause_id: int = -1, extended: bool = False):
    """Whether every member of ``ss`` meets the witness subset C' of ``clause``.

    With ``witness`` (a FixWitness or a variable set) returns a bool; without
    it, searches the proper non-empty subsets and returns the first witness
    found or None. ``extended`` additionally requires each member to satisfy
    the clause and to meet it only inside C'.
    """
    ss = list(ss)

    def ok(subset: frozenset[int]) -> bool:
        if not subset < clause.variables() or not subset:
            return False
        for s in ss:
            if not _meets(s, clause, subset):
                return False
            if extended:
                hit = s.intersection(clause)
                if not hit or not hit.variables() <= subset:
                    return False
        return True

    if witness is not None:
        subset = witness.subset if isinstance(witness, FixWitness) else frozenset(witness)
        return ok(subset)
    for subset in proper_subsets(clause):
        if ok(subset):
            return FixWitness(clause_id, subset)
    return None


def fix_mask(m: VEModel, ci: int, subset: Iterable[int]) -> np.ndarray:
    """Models with some variable of C' true: the event Fix(C, C')."""
    subset = frozenset(subset)
    if not subset or not subset < m.clause_vars(ci):
        raise PreconditionError("C' must be a proper non-empty subset of the clause")
    mask = np.zeros(m.rows.shape[0], dtype=bool)
    for v in subset:
        mask |= m.rows[:, m.col[v]]
    return mask


def find_witness_mask(m: VEModel, ci: int, mask: np.ndarray) -> FixWitness | None:
    """First C' such that every model in ``mask`` lies in Fix(C, C')."""
    for subset in proper_subsets(m.cnf.clauses[ci]):
        if not (mask & ~fix_mask(m, ci, subset)).any():
            return FixWitness(ci, subset)
    return None


def is_matching(m: VEModel, clauses: Sequence[int]) -> bool:
    used: set[int] = set()
    for ci in clauses:
        vs = m.clause_vars(ci)
        if used & vs:
            return False
        used |= vs
    return len(set(clauses)) == len(clauses)


@dataclass(frozen=True)
class FixedProbReport:
    matching: tuple[int, ...]
    witnesses: tuple[FixWitness, ...]
    probability: Fraction
    bound: Fraction

    @property
    def holds(self) -> bool:
        return self.probability <= self.bound


def verify_fixedprob(m: VEModel, matching: Sequence[int], ss, witnesses: Sequence[FixWitness] | None = None) -> FixedProbReport:
    """Check Pr(ss) <= (7/8)^|M| for a set fixing a matching of clauses.

    ``ss`` is a boolean mask over ``m.rows`` or an iterable of total models.
    """
    matching = tuple(matching)
    if not is_matching(m, matching):
        raise PreconditionError(f"clauses {matching} do not form a matching")
    mask = ss if isinstance(ss, np.ndarray) else m.mask_of_set(ss)
    found = []
    for i, ci in enumerate(matching):
        if witnesses is not None:
            w = witnesses[i]
            if (mask & ~fix_mask(m, ci, w.subset)).any():
                raise PreconditionError(f"set does not fix clause {ci} with {sorted(w.subset)}")
        else:
            w = find_witness_mask(m, ci, mask)
            if w is None:
                raise PreconditionError(f"set does not fix clause {ci}")
        found.append(w)
    report = FixedProbReport(matching, tuple(found), m.prob_of_mask(mask), SEVEN_EIGHTHS ** len(matching))
    if not report.holds:
        raise PropertyViolation(f"Pr = {report.probability} exceeds {report.bound} for matching {matching}")
    return report
