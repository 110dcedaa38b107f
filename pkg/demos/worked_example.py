"""Three factors whose class product is always P0.

Run from the repository root:  python3 demos/worked_example.py
"""
from p0graph import SignPattern, RationalMatrix, build_graph, certify
from p0graph.ratmat import principal_minors, product_chain
from p0graph.bcdigraph import adjacency_blocks

patterns = [
    SignPattern([[1, -1, -1], [1, 0, 1]]),
    SignPattern([[1, 0], [-1, 0], [0, 1]]),
    SignPattern([[1, 1], [-1, 1]]),
]

# --- the layered graph -------------------------------------------------------
g = build_graph(patterns)
print("layer sizes:", g.layer_sizes)
print("block adjacency:")
for row in adjacency_blocks(g).tolist():
    print("  ", " ".join(f"{x:+d}" if x else " 0" for x in row))

# --- cycles and the verdict --------------------------------------------------
cert = certify(patterns, sample_count=500, seed=1)
for c in cert.cycle_inventory:
    print(c)
print("verdict:", cert.verdict)
print(f"{cert.samples_passed}/{cert.samples_drawn} random members were P0")

# One concrete member: every magnitude set to 1.
unit = [RationalMatrix(p) for p in patterns]
prod = product_chain(unit)
print("unit product:", prod.to_strings())
for alpha, value in principal_minors(prod):
    print(f"  minor {alpha!r} = {value}")
