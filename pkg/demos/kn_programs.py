"""Monotone branching programs for complete graphs, subdivision and yardsticks."""
from dpathwidth.cnf import psi_of_graph
from dpathwidth.graph import complete_graph
from dpathwidth.nbp import (ReadOnceTable, build_kn_smnbp, noyard_program, read_bound, represents,
                            separability_number, source_sink_paths, subdivide, yardsticks_for_path)

for n in range(2, 6):
    z = build_kn_smnbp(n)
    line = f"K_{n}: {z.num_edges()} edges, read bound {read_bound(z)}, separability {separability_number(z, method='dp')}"
    if n <= 4:
        line += f", represents psi: {represents(z, psi_of_graph(complete_graph(n)))}"
    print(line)

z = noyard_program()
d = separability_number(z)
print("\nprogram without yardsticks, separability", d)
for p in source_sink_paths(z):
    print("  path", p, "yardsticks", yardsticks_for_path(z, p, d))
s = subdivide(z)
table = ReadOnceTable(s)
print("after subdividing every edge:")
for p in source_sink_paths(s):
    print("  path", p, "yardsticks", yardsticks_for_path(s, p, d, table))
