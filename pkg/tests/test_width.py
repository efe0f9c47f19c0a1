import json
from itertools import product

import pytest
from hypothesis import given, strategies as st

from dpathwidth.cover import (cover_pathwidth_lower_bound, cover_union, d_cover_search, even_odd_split,
                              heuristic_tree_partition, induce_tree_decomposition, lift_cover_to_incidence,
                              literal_even_odd_parts)
from dpathwidth.decomposition import (DCover, PathDecomposition, TreeDecomposition, TreePartition,
                                      decomposition_from_json, decomposition_to_json, is_clique_preserving, validate)
from dpathwidth.errors import PreconditionError, SizeError
from dpathwidth.exact import exact_pathwidth, exact_treewidth, heuristic_path_decomposition
from dpathwidth.graph import (Graph, complete_graph, cycle_graph, edge_induced_subgraph, grid_graph, incidence_graph,
                              max_degree, maximal_cliques, path_graph, random_partial_ktree, random_tree, star_graph)
from oracles import brute_pathwidth, brute_treewidth
from strategies import connected_graphs, small_graphs


def conditions(report):
    return {v.condition for v in report}


# --------------------------------------------------------------------------
# validation

def test_single_bag_is_valid():
    g = cycle_graph(5)
    td = TreeDecomposition([0], [], {0: g.vertices})
    assert validate(td, g) == [] and td.width == 4
    tp = TreePartition([0], [], {0: g.vertices})
    assert validate(tp, g) == [] and tp.width == 5


def test_containment_violation_reports_edge():
    g = path_graph(4)
    report = validate(PathDecomposition([{0, 1}, {2, 3}]), g)
    assert conditions(report) == {"containment"}
    assert report[0].witness[-2:] == (1, 2)


def test_other_violations():
    g = path_graph(3)
    assert "union" in conditions(validate(PathDecomposition([{0, 1}]), g))
    assert "connectedness" in conditions(validate(PathDecomposition([{0, 1}, {1, 2}, {0}]), g))
    assert "tree" in conditions(validate(TreeDecomposition([0, 1], [], {0: {0, 1}, 1: {1, 2}}), g))
    bad_tp = TreePartition([0, 1], [], {0: {0, 1}, 1: {2}})
    assert conditions(validate(bad_tp, g))
    overlap = TreePartition([0, 1], [(0, 1)], {0: {0, 1}, 1: {1, 2}})
    assert conditions(validate(overlap, g))


def test_width_conventions():
    assert PathDecomposition([]).width == -1
    assert exact_pathwidth(Graph())[0] == -1
    assert exact_pathwidth(Graph([0, 1]))[0] == 0
    assert TreePartition([], [], {}).width == 0


# --------------------------------------------------------------------------
# exact solvers

def test_exact_examples():
    assert exact_treewidth(random_tree(9, seed=2))[0] == 1
    assert exact_treewidth(complete_graph(4))[0] == 3
    assert exact_treewidth(cycle_graph(6))[0] == 2
    assert exact_pathwidth(path_graph(7))[0] == 1
    for n in range(1, 7):
        assert exact_pathwidth(complete_graph(n))[0] == n - 1
    assert exact_pathwidth(grid_graph(2, 3))[0] == 2


def test_exact_cap():
    with pytest.raises(SizeError):
        exact_pathwidth(grid_graph(4, 4))
    with pytest.raises(SizeError):
        exact_treewidth(path_graph(20))
    assert exact_pathwidth(grid_graph(4, 4), cap=16)[0] == 4


@given(small_graphs(max_vertices=6))
def test_exact_solvers_match_brute_force(g):
    pw, pd = exact_pathwidth(g)
    tw, td = exact_treewidth(g)
    assert pw == brute_pathwidth(g)
    assert tw == brute_treewidth(g)
    assert validate(pd, g) == [] and pd.width == pw
    assert validate(td, g) == [] and td.width == tw
    assert pw >= tw


@given(small_graphs(max_vertices=9))
def test_heuristic_path_decomposition_is_valid(g):
    pd = heuristic_path_decomposition(g)
    assert validate(pd, g) == []
    assert pd.width >= exact_pathwidth(g)[0]


# --------------------------------------------------------------------------
# tree-partitions and the even/odd split

def test_tree_partition_on_trees():
    for seed in range(8):
        g = random_tree(12, seed=seed)
        tp = heuristic_tree_partition(g)
        assert validate(tp, g) == []
        assert tp.width <= max_degree(g) + 1


def test_tree_partition_on_cliques():
    # the heuristic produces a valid partition; two halves are valid as well,
    # so K_n does admit multi-bag tree-partitions
    for n in range(2, 8):
        g = complete_graph(n)
        tp = heuristic_tree_partition(g)
        assert validate(tp, g) == [] and tp.width <= n
        half = TreePartition([0, 1], [(0, 1)], {0: range(n // 2), 1: range(n // 2, n)})
        assert validate(half, g) == [] and half.width == (n + 1) // 2


def test_tree_partition_grid():
    g = grid_graph(4, 4)
    tp = heuristic_tree_partition(g)
    assert validate(tp, g) == [] and tp.width <= 8


def test_induce_examples():
    g = complete_graph(4)
    td = induce_tree_decomposition(TreePartition([0], [], {0: g.vertices}), g)
    assert validate(td, g) == [] and td.width == 3
    star = star_graph(4)
    tp = TreePartition(range(4), [(0, 1), (0, 2), (0, 3)], {i: {i} for i in range(4)})
    td = induce_tree_decomposition(tp, star)
    assert validate(td, star) == [] and td.width == 1
    assert sorted(map(sorted, td.bags.values())) == [[0], [0, 1], [0, 2], [0, 3]]
    with pytest.raises(PreconditionError):
        induce_tree_decomposition(TreePartition([0], [], {0: {0}}), star)


@given(connected_graphs(max_vertices=10))
def test_induced_decomposition_width(g):
    tp = heuristic_tree_partition(g)
    td = induce_tree_decomposition(tp, g)
    assert validate(td, g) == []
    assert td.width <= 2 * tp.width - 1


def test_even_odd_tree_singleton_bags():
    g = random_tree(11, seed=5)
    # singleton bags, forest = the tree itself
    tp = TreePartition(g.vertices, list(g.edges.values()), {v: {v} for v in g.vertices})
    cover = even_odd_split(tp, g)
    assert validate(cover, g) == []
    assert cover.clique_preserving and cover.widths() == [1, 1]
    for part, _ in cover.parts:
        assert exact_pathwidth(part)[0] == 1
        # disjoint union of stars: every component has a vertex adjacent to all others
        for comp in part.components():
            assert any(part.degree(c) == len(comp) - 1 for c in comp)


def test_even_odd_single_bag():
    g = cycle_graph(5)
    cover = even_odd_split(TreePartition([0], [], {0: g.vertices}), g)
    assert cover.parts[0][0] == g
    assert cover.parts[1][0].num_vertices() == 0


@pytest.mark.parametrize("seed", range(8))
def test_even_odd_partial_2tree(seed):
    g = random_partial_ktree(12, 2, seed=seed)
    tp = heuristic_tree_partition(g)
    cover = even_odd_split(tp, g)
    assert validate(cover, g) == []
    assert is_clique_preserving(cover, g)
    assert all(w <= 2 * tp.width - 1 for w in cover.widths())


@given(small_graphs(max_vertices=10))
def test_even_odd_clique_preservation(g):
    cover = even_odd_split(heuristic_tree_partition(g), g)
    assert validate(cover, g) == []
    for q in maximal_cliques(g):
        assert any(all(part.has_vertex(v) for v in q) and
                   all(part.has_edge(a, b) for i, a in enumerate(q) for b in q[i + 1:])
                   for part, _ in cover.parts)


def test_literal_parity_subgraphs_break():
    # path 0-1-2 with singleton bags rooted at 0: layer parity puts bags
    # {0} and {1,2} in one class and the literal induced subgraph on their
    # union picks up edge {0,1} whose bag lies in the other class
    g = path_graph(3)
    tp = TreePartition([0, 1, 2], [(0, 1), (1, 2)], {0: {0}, 1: {1}, 2: {2}})
    literal = literal_even_odd_parts(tp, g)
    cover = even_odd_split(tp, g)
    assert validate(cover, g) == []
    literal_cover = DCover(g, [(p, pd) for p, (_, pd) in zip(literal, cover.parts)])
    assert validate(literal_cover, g) != []


# --------------------------------------------------------------------------
# d-covers

def brute_d_pathwidth(g, d):
    ids = g.edge_ids()
    best = None
    for colours in product(range(d), repeat=len(ids)):
        val = max(
            exact_pathwidth(edge_induced_subgraph(g, [e for e, c in zip(ids, colours) if c == i]))[0]
            for i in range(d)
        )
        best = val if best is None else min(best, val)
    if not g.vertices:
        return -1
    # isolated vertices have to sit in some part
    return max(0, best if best is not None else 0)


def test_cover_search_examples():
    grid = grid_graph(3, 3)
    cover = d_cover_search(grid, 2)
    assert validate(cover, grid) == [] and cover.width == 1
    for seed in range(5):
        t = random_tree(10, seed=seed)
        assert d_cover_search(t, 2).width == 1
    for g in (cycle_graph(5), complete_graph(4), grid_graph(2, 3)):
        assert d_cover_search(g, 1).width == exact_pathwidth(g)[0]


def test_cover_search_cap():
    with pytest.raises(SizeError):
        d_cover_search(complete_graph(6), 2)
    assert d_cover_search(complete_graph(6), 2, cap=15).width >= 2


@given(small_graphs(max_vertices=5).filter(lambda g: g.num_edges() <= 7), st.integers(1, 3))
def test_cover_search_matches_brute_force(g, d):
    cover = d_cover_search(g, d)
    assert validate(cover, g) == []
    assert cover.width == brute_d_pathwidth(g, d)


@given(small_graphs(max_vertices=6).filter(lambda g: g.num_edges() <= 9))
def test_cover_search_monotone_in_d(g):
    widths = [d_cover_search(g, d).width for d in (1, 2, 3)]
    assert widths == sorted(widths, reverse=True)
    assert all(cover_pathwidth_lower_bound(g, d) <= w for d, w in zip((1, 2, 3), widths))


def test_heuristic_cover_modes():
    g = random_partial_ktree(12, 2, seed=3)
    for d in (2, 3):
        cover = d_cover_search(g, d, mode="heuristic")
        assert validate(cover, g) == [] and cover.d == d
    with pytest.raises(PreconditionError):
        d_cover_search(g, 0)


def test_lower_bound_examples():
    assert cover_pathwidth_lower_bound(complete_graph(10), 2) == 3
    for n in range(2, 9):
        assert cover_pathwidth_lower_bound(complete_graph(n), 1) == -(-(n - 1) // 2)
    assert cover_pathwidth_lower_bound(random_tree(9), 2) in (0, 1)


# --------------------------------------------------------------------------
# lifting to the incidence graph

def test_lift_k2():
    g = complete_graph(2)
    cover = d_cover_search(g, 1)
    lifted = lift_cover_to_incidence(cover, g)
    h = incidence_graph(g)
    assert validate(lifted, h) == []
    assert lifted.width <= 2
    assert exact_pathwidth(lifted.parts[0][0])[0] == 2  # the lifted K_2 is a triangle


def test_lift_grid_and_empty_part():
    g = grid_graph(3, 3)
    lifted = lift_cover_to_incidence(d_cover_search(g, 2), g)
    assert validate(lifted, incidence_graph(g)) == [] and lifted.width <= 2
    cover = even_odd_split(TreePartition([0], [], {0: g.vertices}), g)
    lifted = lift_cover_to_incidence(cover, g)
    assert lifted.parts[1][0].num_vertices() == 0 and lifted.parts[1][1].bags == cover.parts[1][1].bags


@given(connected_graphs(max_vertices=8))
def test_lift_width_grows_by_at_most_one(g):
    cover = even_odd_split(heuristic_tree_partition(g), g)
    lifted = lift_cover_to_incidence(cover, g)
    assert validate(lifted, incidence_graph(g)) == []
    for before, after in zip(cover.widths(), lifted.widths()):
        assert after <= max(before, 0) + 1
    assert cover_union(lifted).same_structure(incidence_graph(g))


@pytest.mark.parametrize("g", [path_graph(4), star_graph(4), cycle_graph(4), complete_graph(3)])
def test_incidence_cover_inequality(g):
    # d-pw(G) <= d-pw(H) <= d-pw(G) + 1 for H the incidence graph
    h = incidence_graph(g)
    for d in (1, 2):
        a = d_cover_search(g, d).width
        b = d_cover_search(h, d).width
        assert a <= b <= a + 1


# --------------------------------------------------------------------------
# JSON

@given(connected_graphs(max_vertices=8))
def test_json_roundtrip(g):
    tp = heuristic_tree_partition(g)
    for dec in (exact_pathwidth(g)[1], exact_treewidth(g)[1], tp, even_odd_split(tp, g)):
        data = json.loads(json.dumps(decomposition_to_json(dec)))
        back = decomposition_from_json(data)
        assert validate(back, g) == []
        assert back.width == dec.width
        assert data["schema_version"] == 1
