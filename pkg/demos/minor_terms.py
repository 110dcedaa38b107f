"""A principal minor of a product, three ways.

Direct determinant, Cauchy-Binet over intermediate index sets, and the
full term expansion where each term is a packing of graph cycles.
"""
from fractions import Fraction

from p0graph import RationalMatrix
from p0graph.ratmat import cauchy_binet_minor, minor, product_chain
from p0graph.terms import iter_terms, term_sign, term_value

A = RationalMatrix([["1/2", -1, 0], [2, 0, 1]])
B = RationalMatrix([[1, 0], [-3, "1/3"], [0, 4]])
chain = [A, B]
alpha = [1, 2]

P = product_chain(chain)
print("product:", P.to_strings())
print("direct minor:", minor(P, alpha, alpha))
print("Cauchy-Binet:", cauchy_binet_minor(chain, alpha))

total = Fraction(0)
for t in iter_terms(chain, alpha):
    v = term_value(chain, t)
    total += v
    maps = " ".join(f"{a!r}->{[b(i) for i in a]}" for a, b in zip(t.alpha_list, t.beta_list))
    print(f"  {maps}: cycles={t.N} (e={t.N_e}) sign={term_sign(t):+d} value={v}")
print("sum of terms:", total)
