"""Write a Graphviz file with the e-cycles drawn in colour.

Render with:  dot -Tpng swap.dot -o swap.png
"""
import sys

from p0graph import SignPattern, build_graph, enumerate_simple_cycles
from p0graph.bcdigraph import dot_export

g = build_graph([SignPattern([[0, 1, 0], [1, 0, -1], [0, 1, 1]])])
census = enumerate_simple_cycles(g)
print(len(census), "cycles,", len(census.ecycles), "of them e-cycles", file=sys.stderr)

text = dot_export(g, census.ecycles)
out = sys.argv[1] if len(sys.argv) > 1 else None
if out:
    with open(out, "w") as fh:
        fh.write(text)
else:
    print(text)
