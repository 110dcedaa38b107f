"""Terms of a principal minor of a product, read as cycle packings.

Expanding ``A[alpha0]`` for ``A = A0 A1 ... A(k-1)`` by Cauchy-Binet and then
each factor minor by permutations produces terms indexed by index sets
``alpha_list = (alpha0, ..., alpha(k-1))`` and permutations ``beta_list``
(``beta_list[j]`` rearranging ``alpha_list[j]``). A nonzero term picks the
edges ``V_j^(alpha_j[m]) -> V_(j+1)^(beta_(j+1)[m])``, which always split into
vertex-disjoint cycles, and its sign is ``(-1)**N_e`` where ``N_e`` counts
the e-cycles among them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .bcdigraph import Cycle, LayeredVertex, SignedEdge, classify_cycle
from .errors import ConsistencyError, DimensionError
from .ratmat import (
    IndexSet,
    Permutation,
    as_matrix,
    check_chain,
    permutation_parity,
)

__all__ = [
    "TermDecomposition",
    "decompose_term",
    "term_from_cycles",
    "term_value",
    "term_sign",
    "iter_terms",
]


@dataclass(frozen=True)
class TermDecomposition:
    alpha_list: tuple[IndexSet, ...]
    beta_list: tuple[Permutation, ...]
    edges: tuple[SignedEdge, ...]
    cycles: tuple[Cycle, ...]
    N: int
    N_e: int
    N_o: int
    theta_e: int
    theta_o: int

    @property
    def k(self) -> int:
        return len(self.alpha_list)

    def phi(self) -> dict[int, int]:
        """Composite map on ``alpha0``: follow the term's edges once round all layers."""
        step = {e.source: e.target for e in self.edges}
        out = {}
        for a in self.alpha_list[0]:
            v = LayeredVertex(0, a)
            for _ in range(self.k):
                v = step[v]
            out[a] = v.index
        return out


def _factor_matrices(factors):
    ms = [as_matrix(f) for f in factors]
    check_chain([m.shape for m in ms])
    return ms


def decompose_term(factors: Sequence, alpha_list: Sequence, beta_list: Sequence) -> TermDecomposition:
    """Edge set and cycle census of one term.

    Raises ``ValueError`` if the term is zero (some chosen entry vanishes).
    """
    ms = _factor_matrices(factors)
    k = len(ms)
    alphas = tuple(IndexSet(a) for a in alpha_list)
    betas = tuple(b if isinstance(b, Permutation) else Permutation.from_image(b) for b in beta_list)
    if len(alphas) != k or len(betas) != k:
        raise DimensionError(f"need {k} index sets and {k} permutations")
    r = len(alphas[0])
    for j, (a, b) in enumerate(zip(alphas, betas)):
        a.check_bound(ms[j].nrows)
        if len(a) != r:
            raise DimensionError(f"index sets differ in size: {alphas!r}")
        if b.domain != a:
            raise ValueError(f"permutation {j} acts on {b.domain!r}, not {a!r}")
    edges = []
    for j, m in enumerate(ms):
        nxt = (j + 1) % k
        for src, dst in zip(alphas[j], betas[nxt].image):
            x = m[src - 1, dst - 1]
            if not x:
                raise ValueError(f"term is zero: factor {j} entry ({src},{dst}) vanishes")
            edges.append(SignedEdge(LayeredVertex(j, src), LayeredVertex(nxt, dst), 1 if x > 0 else -1))

    out_edge = {e.source: e for e in edges}
    cycles = []
    seen = set()
    for e in edges:
        if e.source in seen:
            continue
        walk = []
        cur = e
        while cur.source not in seen:
            seen.add(cur.source)
            walk.append(cur)
            cur = out_edge[cur.target]
        cycles.append(classify_cycle(walk, k))
    cycles.sort(key=lambda c: c.vertices)
    n_e = sum(1 for c in cycles if c.is_e)
    theta_e = sum(c.r1 for c in cycles if c.is_e)
    theta_o = sum(c.r1 for c in cycles if not c.is_e)
    return TermDecomposition(
        alphas, betas, tuple(edges), tuple(cycles),
        len(cycles), n_e, len(cycles) - n_e, theta_e, theta_o,
    )


def term_value(factors: Sequence, t: TermDecomposition) -> Fraction:
    """Value of the term as written in the expansion: parities times entries."""
    ms = _factor_matrices(factors)
    value = Fraction(1)
    for b in t.beta_list:
        value *= permutation_parity(b)
    for e in t.edges:
        value *= ms[e.source.layer][e.source.index - 1, e.target.index - 1]
    return value


def term_sign(t: TermDecomposition) -> int:
    """``(-1)**N_e``, after checking it against the parity-times-edge-signs route."""
    r = len(t.alpha_list[0])
    if t.N != t.N_e + t.N_o or t.theta_e + t.theta_o != r:
        raise ConsistencyError(f"cycle counts do not add up: {t}")
    from_cycles = -1 if t.N_e % 2 else 1

    parity_product = 1
    for b in t.beta_list:
        parity_product *= permutation_parity(b)
    # The composite map round all layers decomposes into the same N cycles.
    phi = t.phi()
    if permutation_parity(Permutation(t.alpha_list[0], tuple(phi[a] for a in t.alpha_list[0]))) != parity_product:
        raise ConsistencyError("parity of the composite map differs from the product of parities")
    if parity_product != (-1) ** ((r - t.N) % 2):
        raise ConsistencyError("parity product disagrees with the cycle count")
    edge_sign = 1
    for e in t.edges:
        edge_sign *= e.sign
    if parity_product * edge_sign != from_cycles:
        raise ConsistencyError(
            f"term sign routes disagree: parities*edges={parity_product * edge_sign}, "
            f"(-1)^N_e={from_cycles}"
        )
    return from_cycles


def iter_terms(factors: Sequence, alpha0) -> Iterator[TermDecomposition]:
    """Every nonzero term of ``A[alpha0]``, decomposed."""
    ms = _factor_matrices(factors)
    k = len(ms)
    alpha0 = IndexSet(alpha0).check_bound(ms[0].nrows)
    r = len(alpha0)
    layer_choices = [
        [IndexSet(c) for c in itertools.combinations(range(1, ms[j].nrows + 1), r)] for j in range(1, k)
    ]
    for rest in itertools.product(*layer_choices):
        alphas = (alpha0,) + rest
        perms = [
            [Permutation(a, p) for p in itertools.permutations(a)] for a in alphas
        ]
        for betas in itertools.product(*perms):
            # Skip quickly when an entry vanishes.
            if any(
                not ms[j][src - 1, dst - 1]
                for j in range(k)
                for src, dst in zip(alphas[j], betas[(j + 1) % k].image)
            ):
                continue
            yield decompose_term(ms, alphas, betas)


def term_from_cycles(factors: Sequence, cycles: Sequence[Cycle]) -> TermDecomposition:
    """The term whose edge set is a given packing of vertex-disjoint cycles.

    Each cycle meets every layer equally often, so the packing fixes index
    sets of a common size and the permutations follow from the edges.
    """
    ms = _factor_matrices(factors)
    k = len(ms)
    step = {}
    for c in cycles:
        for e in c.edges:
            if e.source in step:
                raise ValueError(f"cycles share vertex {e.source}")
            step[e.source] = e.target
    alphas = [IndexSet(sorted(v.index for v in step if v.layer == j)) for j in range(k)]
    betas = [None] * k
    for j in range(k):
        betas[(j + 1) % k] = Permutation(
            alphas[(j + 1) % k], tuple(step[LayeredVertex(j, a)].index for a in alphas[j])
        )
    return decompose_term(ms, alphas, betas)
