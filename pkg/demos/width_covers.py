"""Covers of small width for graphs whose ordinary pathwidth is large."""
from dpathwidth.cover import d_cover_search, even_odd_split, heuristic_tree_partition
from dpathwidth.decomposition import validate
from dpathwidth.exact import exact_pathwidth, exact_treewidth
from dpathwidth.graph import grid_graph, random_partial_ktree, random_tree

for name, g in [("tree(12)", random_tree(12, seed=1)), ("grid 3x4", grid_graph(3, 4)),
                ("partial 2-tree(10)", random_partial_ktree(10, 2, seed=2))]:
    tw, _ = exact_treewidth(g)
    pw, _ = exact_pathwidth(g)
    tp = heuristic_tree_partition(g)
    split = even_odd_split(tp, g)
    print(f"{name:20} tw={tw} pw={pw} tpw<={tp.width} even/odd widths={split.widths()}"
          f" valid={not validate(split, g)}")

# grids split into two caterpillar-like halves of width 1
cover = d_cover_search(grid_graph(3, 3), 2, "exact")
for i, (part, pd) in enumerate(cover.parts):
    print(f"part {i}: edges {sorted(part.edges.values())}")
    print(f"        bags {[sorted(b) for b in pd.bags]}")
