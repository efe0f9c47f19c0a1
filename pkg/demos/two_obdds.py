"""Split a bounded-treewidth CNF into two halves and compile each to an OBDD."""
from dpathwidth.cnf import primal_graph, random_structured_cnf, split_by_cover
from dpathwidth.cover import even_odd_split, heuristic_tree_partition
from dpathwidth.graph import random_partial_ktree
from dpathwidth.obdd import compile_cnf, conjunction_represents, count_models, size_bound

f = random_structured_cnf(random_partial_ktree(14, 3, seed=11), seed=11)
print(f"{len(f.variables)} variables, {len(f.clauses)} clauses")

h = primal_graph(f)
cover = even_odd_split(heuristic_tree_partition(h), h)
halves = split_by_cover(f, cover)
diagrams = []
for half, (_, pd) in zip(halves, cover.parts):
    z = compile_cnf(half, pd)
    w = pd.restrict(half.variables).width
    diagrams.append(z)
    print(f"half with {len(half.clauses)} clauses: width {w}, size {z.size()} <= {size_bound(w, len(half.variables))},"
          f" {count_models(z)} models")
print("conjunction represents f:", conjunction_represents(diagrams, f))
