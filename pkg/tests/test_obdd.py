import json

import numpy as np
import pytest
from hypothesis import given

from dpathwidth.cnf import Cnf, LiteralSet, assignment_chunks, enumerate_models, primal_graph, psi_of_graph
from dpathwidth.decomposition import PathDecomposition
from dpathwidth.errors import PreconditionError, SizeError
from dpathwidth.exact import exact_pathwidth, heuristic_path_decomposition
from dpathwidth.graph import complete_graph, path_graph
from dpathwidth.nbp import is_monotone, represents
from dpathwidth.obdd import (FALSE, TRUE, Obdd, check_structure, compile_cnf, conjunction_represents, constant,
                             count_models, evaluate, evaluate_rows, obdd_from_json, obdd_to_dot, obdd_to_json,
                             obdd_to_nbp, order_from_path_decomposition, size_bound)
from oracles import cnf_models
from strategies import small_cnfs


def compiled(f):
    pd = exact_pathwidth(primal_graph(f))[1]
    return compile_cnf(f, pd), pd


def test_order_examples():
    a, b, c = 5, 3, 9
    # a lives only in the first bag, so it precedes b whatever the ids
    assert order_from_path_decomposition(PathDecomposition([{a, b}, {b, c}])) == (a, b, c)
    assert order_from_path_decomposition(PathDecomposition([{4, 2, 7}])) == (2, 4, 7)
    with pytest.raises(PreconditionError):
        order_from_path_decomposition(PathDecomposition([{1}]), [1, 2])


def test_k2_and_k3_counts():
    z, pd = compiled(psi_of_graph(complete_graph(2)))
    assert count_models(z) == 7
    assert pd.width == 2 and z.size() <= 2 ** 3 * 4
    f = psi_of_graph(complete_graph(3))
    z, _ = compiled(f)
    # 1 + 3*4 + 3*8 + 8 by the number of true vertices
    assert count_models(z) == len(cnf_models(f)) == 45


def test_constants():
    z = compile_cnf(Cnf([], []), PathDecomposition([]))
    assert z.root == TRUE and z.size() == 1 and z.is_constant()
    z = compile_cnf(Cnf([0], [LiteralSet([0]), LiteralSet([], [0])]), PathDecomposition([{0}]))
    assert z.root == FALSE and count_models(z) == 0
    assert evaluate(constant(True, [0, 1]), LiteralSet([0], [1]))
    assert conjunction_represents([constant(True)], Cnf([0, 1], []))


def test_rejects_bad_decomposition():
    f = psi_of_graph(path_graph(3))
    with pytest.raises(PreconditionError):
        compile_cnf(f, PathDecomposition([{0, 1, 3}, {2, 4}]))


def test_evaluate_p4_against_oracle():
    f = psi_of_graph(path_graph(4))
    z, _ = compiled(f)
    models = set(enumerate_models(f))
    for rows in assignment_chunks(len(f.variables)):
        for r in rows:
            s = LiteralSet([v for v, b in zip(f.variables, r) if b], [v for v, b in zip(f.variables, r) if not b])
            assert evaluate(z, s) == (s in models)
    with pytest.raises(PreconditionError):
        evaluate(z, LiteralSet([0]))


@given(small_cnfs(max_vars=7, max_clauses=7))
def test_compile_matches_oracle_and_bound(f):
    z, pd = compiled(f)
    assert check_structure(z) == []
    assert count_models(z) == len(cnf_models(f))
    assert conjunction_represents([z], f)
    assert z.size() <= size_bound(pd.width, len(f.variables))


@given(small_cnfs(max_vars=8, max_clauses=8))
def test_heuristic_order_still_correct(f):
    pd = heuristic_path_decomposition(primal_graph(f))
    z = compile_cnf(f, pd)
    assert check_structure(z) == [] and conjunction_represents([z], f)
    assert z.size() <= size_bound(pd.width, len(f.variables))


def test_evaluate_rows_matches_evaluate():
    f = psi_of_graph(complete_graph(3))
    z, _ = compiled(f)
    rows = next(assignment_chunks(len(f.variables)))
    fast = evaluate_rows(z, rows, f.variables)
    slow = [evaluate(z, LiteralSet([v for v, b in zip(f.variables, r) if b],
                                   [v for v, b in zip(f.variables, r) if not b])) for r in rows]
    assert np.array_equal(fast, slow)


def test_conjunction_detects_mismatch_and_cap():
    f = psi_of_graph(path_graph(3))
    z, _ = compiled(psi_of_graph(path_graph(3)))
    stronger = Cnf(f.variables, list(f.clauses) + [LiteralSet([0])])
    assert not conjunction_represents([z], stronger)
    with pytest.raises(SizeError):
        conjunction_represents([z], f, cap=3)
    with pytest.raises(PreconditionError):
        conjunction_represents([z], Cnf([0], []))


def test_structure_checker_flags_order_violation():
    z, _ = compiled(psi_of_graph(path_graph(3)))
    bad = obdd_from_json(obdd_to_json(z))
    nodes = dict(bad.nodes)
    u = bad.root
    var, lo, hi = nodes[u]
    nodes[u] = (bad.order[-1], lo, hi)
    assert check_structure(Obdd(bad.order, bad.root, nodes))


def test_json_and_dot():
    z, _ = compiled(psi_of_graph(path_graph(4)))
    data = json.loads(json.dumps(obdd_to_json(z)))
    back = obdd_from_json(data)
    assert back.nodes == z.nodes and back.order == z.order and count_models(back) == count_models(z)
    assert obdd_to_dot(z).startswith("digraph")


def test_obdd_to_nbp():
    f = psi_of_graph(complete_graph(3))
    z, _ = compiled(f)
    program = obdd_to_nbp(z, monotone=True)
    assert is_monotone(program)
    assert represents(program, f)
    assert represents(obdd_to_nbp(z), f)
    with pytest.raises(PreconditionError):
        obdd_to_nbp(constant(False))
