"""When the graph has an e-cycle, certify builds a witness.

The witness has exactly the input sign patterns and a negative
principal minor, so the class product is not P0.
"""
from p0graph import SignPattern, certify
from p0graph.ratmat import is_P0, product_chain, sign_pattern

patterns = [
    SignPattern([[1, 1, 0], [0, 1, -1]]),
    SignPattern([[1, 0], [1, 1], [0, 1]]),
]
cert = certify(patterns)
print("verdict:", cert.verdict)

cx = cert.counterexample
print("e-cycle:", cx.ecycle)
print("alpha0:", cx.alpha0)

# Step 1: keep only the cycle's entries, magnitudes 1.
for j, m in enumerate(cx.restricted):
    print(f"restricted factor {j}:", m.to_strings())
print("restricted minor:", cx.restricted_minor)

# Step 2: put the other entries back at size eps.
print("eps:", cx.epsilon)
for j, m in enumerate(cx.witness):
    print(f"witness factor {j}:", m.to_strings())
print("witness minor:", cx.witness_minor)

prod = product_chain(cx.witness)
print("patterns preserved:", [sign_pattern(w) for w in cx.witness] == patterns)
print("witness product is P0:", bool(is_P0(prod)))
