import json

import pytest
from hypothesis import given, settings

from dpathwidth.cnf import Cnf, LiteralSet, conjoin, psi_of_graph
from dpathwidth.errors import PreconditionError, SizeError
from dpathwidth.graph import complete_graph, edge_induced_subgraph, path_graph, star_graph
from dpathwidth.nbp import (Nbp, ReadOnceTable, build_kn_smnbp, build_star_mnbp, carried_assignments, chain,
                            check_subdivided, classify_vertices, count_paths, extract_between, greedy_fragments,
                            is_monotone, minimal_non_read_once, nbp_from_json, nbp_to_dot, nbp_to_json,
                            noyard_program, path_labels, pivot_prepivot, reachable_subprogram, read_bound, represents,
                            separability_number, source_sink_paths, subdivide, subdivide_edge, yardsticks_for_path,
                            zxy_program)
from oracles import all_paths, brute_carried, brute_fragments, brute_read_once
from strategies import small_nbps


def line_program(labels):
    """A single path whose edges carry the given labels."""
    edges = {i: (i, i + 1, lab) for i, lab in enumerate(labels)}
    return Nbp(range(len(labels) + 1), edges, 0, len(labels))


def carried_sets(z, variables=None):
    return {frozenset(s.pos) for s in carried_assignments(z, variables)}


# --------------------------------------------------------------------------
# basic structure

def test_construction_checks():
    with pytest.raises(PreconditionError):
        Nbp([0, 1], {0: (0, 1, (1, True)), 1: (0, 1, (1, True))}, 0, 1)
    with pytest.raises(PreconditionError):
        Nbp([0, 1, 2], {0: (0, 1, None)}, 0, 1)
    with pytest.raises(PreconditionError):
        Nbp([0, 1], {0: (0, 1, None), 1: (1, 0, None)}, 0, 1)
    # one unlabelled and one edge per literal between a pair is fine
    Nbp([0, 1], {0: (0, 1, None), 1: (0, 1, (1, True)), 2: (0, 1, (1, False))}, 0, 1)


def test_carried_examples():
    assert carried_sets(line_program([(1, True)])) == {frozenset({1})}
    both = Nbp([0, 1], {0: (0, 1, (1, True)), 1: (0, 1, (1, False))}, 0, 1)
    assert carried_sets(both) == {frozenset(), frozenset({1})}
    star = star_graph(4)
    assert represents(build_star_mnbp(star), psi_of_graph(star))
    with pytest.raises(SizeError):
        carried_assignments(line_program([(i, True) for i in range(30)]))


@given(small_nbps(monotone=False))
def test_carried_matches_path_oracle(z):
    variables = sorted(z.variables())
    assert carried_sets(z) == brute_carried(z, variables)


def test_represents_examples():
    assert represents(build_star_mnbp(star_graph(4)), psi_of_graph(star_graph(4)))
    assert represents(build_kn_smnbp(4), psi_of_graph(complete_graph(4)))
    z = line_program([(0, True)])
    assert not represents(z, Cnf([0], [LiteralSet(), LiteralSet([0])]))
    with pytest.raises(PreconditionError):
        represents(z, Cnf([0, 1], []))
    assert represents(z, Cnf([0, 1], [LiteralSet([0])]), strict=False)


def test_monotone_examples():
    assert is_monotone(build_star_mnbp(star_graph(3)))
    assert not is_monotone(line_program([(1, False)]))
    assert is_monotone(line_program([None, None]))


# --------------------------------------------------------------------------
# read bound and separability

def test_read_bound_examples():
    assert read_bound(noyard_program()) == 2
    assert read_bound(line_program([(1, True), (2, True)])) == 1
    for n in range(2, 6):
        assert read_bound(build_kn_smnbp(n)) <= n


def test_separability_examples():
    x1, x2, x3 = 1, 2, 3
    assert separability_number(line_program([(x1, True), (x3, True), (x1, True), (x2, True)])) == 2
    doubled = separability_number(line_program([(x1, True), (x1, True), (x2, True), (x2, True)]))
    assert doubled != 2 and doubled == 3
    assert separability_number(line_program([(x1, True), (x2, True)])) == 1
    assert separability_number(build_kn_smnbp(3)) <= 3


def test_separability_cap():
    with pytest.raises(SizeError):
        separability_number(build_kn_smnbp(4), cap=10)
    assert separability_number(build_kn_smnbp(4), method="dp") <= 4
    with pytest.raises(PreconditionError):
        separability_number(noyard_program(), method="magic")


@given(small_nbps())
def test_separability_methods_agree(z):
    s = separability_number(z)
    assert s == separability_number(z, method="dp")
    assert s == max(brute_fragments(z, p) for p in all_paths(z, z.source, z.sink))
    assert read_bound(z) <= max(s, 1) or not z.variables()


@given(small_nbps(monotone=False))
def test_read_bound_matches_paths(z):
    best = 0
    for p in all_paths(z, z.source, z.sink):
        labs = [z.edges[e][2][0] for e in p if z.edges[e][2] is not None]
        best = max([best] + [labs.count(x) for x in labs])
    assert read_bound(z) == best


@given(small_nbps(monotone=False))
def test_greedy_fragments_are_optimal(z):
    for p in source_sink_paths(z):
        assert len(greedy_fragments(z, p)) == brute_fragments(z, p)


# --------------------------------------------------------------------------
# constructions

def test_star_program():
    z = build_star_mnbp(star_graph(4))
    assert z.num_edges() == 7 and read_bound(z) == 1 and is_monotone(z)
    k2 = build_star_mnbp(complete_graph(2))
    assert k2.num_edges() == 3 and represents(k2, psi_of_graph(complete_graph(2)))
    with pytest.raises(PreconditionError):
        build_star_mnbp(path_graph(4))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_kn_program(n):
    z = build_kn_smnbp(n)
    assert z.num_edges() == n * (2 * n - 1)
    assert is_monotone(z)
    assert separability_number(z, method="dp") <= n
    if n <= 4:
        assert represents(z, psi_of_graph(complete_graph(n)))
    with pytest.raises(PreconditionError):
        build_kn_smnbp(1)


def test_chain():
    z = build_star_mnbp(star_graph(3))
    assert carried_sets(chain([z])) == carried_sets(z)
    g = complete_graph(3)
    stars = [build_star_mnbp(edge_induced_subgraph(g, g.incident_edges(v)), 3, center=v) for v in range(3)]
    assert chain(stars) == build_kn_smnbp(3)
    with pytest.raises(PreconditionError):
        chain([])


def test_chain_of_monotone_programs_is_conjunction():
    f1 = Cnf([0, 1, 2], [LiteralSet([0, 1])])
    f2 = Cnf([0, 1, 2], [LiteralSet([1, 2])])
    z1 = Nbp([0, 1], {0: (0, 1, (0, True)), 1: (0, 1, (1, True))}, 0, 1)
    z2 = Nbp([0, 1], {0: (0, 1, (1, True)), 1: (0, 1, (2, True))}, 0, 1)
    assert represents(chain([z1, z2]), conjoin([f1, f2]))


@settings(max_examples=30)
@given(small_nbps(max_nodes=5), small_nbps(max_nodes=5))
def test_chain_intersects_monotone(a, b):
    variables = sorted(a.variables() | b.variables())
    assert carried_sets(chain([a, b]), variables) == carried_sets(a, variables) & carried_sets(b, variables)


# --------------------------------------------------------------------------
# subdivision and yardsticks

def test_subdivide_examples():
    z = noyard_program()
    s = subdivide(z)
    assert s.num_edges() == 3 * z.num_edges() == 18
    assert check_subdivided(s) == []
    d = separability_number(z)
    for p in source_sink_paths(s):
        assert yardsticks_for_path(s, p, d) is not None
    one = subdivide(line_program([(7, True)]))
    assert [one.edges[e][2] for e in sorted(one.edges)] == [None, (7, True), None]
    k3 = psi_of_graph(complete_graph(3))
    assert represents(subdivide(build_kn_smnbp(3)), k3)


def test_noyard_has_a_path_without_yardsticks():
    z = noyard_program()
    assert separability_number(z) == 2
    right = (1, 3, 4, 5)  # v1, v2, v1, v2
    assert [z.edges[e][2][0] for e in right] == [1, 2, 1, 2]
    assert yardsticks_for_path(z, right, 2) is None
    left = (0, 2, 4, 5)
    assert yardsticks_for_path(z, left, 2) is not None
    fixed = subdivide_edge(z, 3)
    for p in source_sink_paths(fixed):
        assert yardsticks_for_path(fixed, p, 2) is not None


def test_yardsticks_on_read_once_program():
    z = build_star_mnbp(star_graph(3))
    for p in source_sink_paths(z):
        assert yardsticks_for_path(z, p, 1) == (z.source, z.sink)


@given(small_nbps())
def test_subdivide_properties(z):
    s = subdivide(z)
    assert s.num_edges() == 3 * z.num_edges()
    assert check_subdivided(s) == []
    variables = sorted(z.variables())
    assert carried_sets(s, variables) == carried_sets(z, variables)
    d = separability_number(z)
    table = ReadOnceTable(s)
    for p in source_sink_paths(s):
        marks = yardsticks_for_path(s, p, d, table)
        assert marks is not None and len(marks) <= d + 1
        for a, b in zip(marks, marks[1:]):
            assert brute_read_once(s, a, b)


# --------------------------------------------------------------------------
# read-once structure

@given(small_nbps(monotone=False))
def test_read_once_table_matches_paths(z):
    table = ReadOnceTable(z)
    for x in z.nodes:
        for y in z.nodes:
            if table.reachable(x, y):
                assert table.read_once(x, y) == brute_read_once(z, x, y)
                span = set()
                for p in all_paths(z, x, y):
                    span |= {z.edges[e][2][0] for e in p if z.edges[e][2] is not None}
                assert table.span_variables(x, y) == span
            else:
                assert not all_paths(z, x, y) or x == y


def test_classify_noyard():
    z = noyard_program()
    info = classify_vertices(z)
    assert not info[3].read_once
    assert info[z.source].read_once
    assert minimal_non_read_once(z) == [3]
    assert minimal_non_read_once(build_star_mnbp(star_graph(3))) == []


def test_pivot_examples():
    z = noyard_program()
    a = pivot_prepivot(z, (1, 3, 4, 5))
    assert a.pivot == 3 and a.prepivot == 2
    star = build_star_mnbp(star_graph(3))
    p = next(source_sink_paths(star))
    assert pivot_prepivot(star, p).pivot is None


@settings(max_examples=30)
@given(small_nbps())
def test_prepivot_subprogram_is_less_separable(z):
    s = subdivide(z)
    d = separability_number(s)
    table = ReadOnceTable(s)
    for p in source_sink_paths(s):
        a = pivot_prepivot(s, p, table=table)
        if a.prepivot is not None:
            assert table.read_once(s.source, a.prepivot)
            assert separability_number(reachable_subprogram(s, a.prepivot)) <= d - 1


def test_extract_between():
    z = zxy_program()
    sub = extract_between(z, 1, 5)
    assert sub.nodes == (1, 2, 3, 4, 5)
    assert sub.source == 1 and sub.sink == 5
    assert count_paths(sub) == 3
    whole = extract_between(z, z.source, z.sink)
    assert whole == z
    single = extract_between(z, 3, 3)
    assert single.nodes == (3,) and single.num_edges() == 0
    with pytest.raises(PreconditionError):
        extract_between(z, 5, 1)


def test_path_labels_rejects_inconsistent_paths():
    z = line_program([(1, True), (1, False)])
    with pytest.raises(PreconditionError):
        path_labels(z, (0, 1))


@given(small_nbps(monotone=False))
def test_json_roundtrip(z):
    assert nbp_from_json(json.loads(json.dumps(nbp_to_json(z)))) == z
    assert nbp_to_dot(z).startswith("digraph")


def test_count_paths_matches_enumeration():
    z = build_kn_smnbp(3)
    assert count_paths(z) == sum(1 for _ in source_sink_paths(z)) == 125
