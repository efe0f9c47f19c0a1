"""Counting certificate: the triples cover every model, each with small probability."""
import json

from dpathwidth.cnf import primal_graph, psi_of_graph
from dpathwidth.exact import heuristic_path_decomposition
from dpathwidth.graph import complete_graph
from dpathwidth.lowerbound import beta_decimal, certify_lower_bound
from dpathwidth.obdd import compile_cnf, obdd_to_nbp

f = psi_of_graph(complete_graph(5))
z = obdd_to_nbp(compile_cnf(f, heuristic_path_decomposition(primal_graph(f))), monotone=True)
cert = certify_lower_bound(f, z, 1)
print(f"program: {len(z.nodes)} nodes, {z.num_edges()} edges; k={cert.k}, q={cert.q}")
for t in cert.triples[:5]:
    print("  triple", t.fix.triple, "matching", t.fix.clauses, "Pr", t.probability)
print(f"  ... {len(cert.triples)} triples in all")
print(f"1 <= {cert.total} <= {cert.bound}")
print("beta =", beta_decimal())
print(json.dumps(cert.to_json()["chain"], indent=1))
