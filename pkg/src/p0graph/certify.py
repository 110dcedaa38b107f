"""Decide whether a whole product of qualitative classes consists of P0-matrices.

The class ``Q(A0) Q(A1) ... Q(A(k-1))`` is all-P0 exactly when the signed
BC digraph of the patterns has no e-cycle. When an e-cycle exists we build
an explicit counterexample:

1. keep only the entries on the e-cycle, with unit magnitudes;
2. the product of that restricted list has a negative principal minor at
   the cycle's layer-0 vertices (a single surviving term, of sign -1);
3. fill every other nonzero position of the patterns with ``+-eps`` and
   halve ``eps`` until the minor is still negative, which gives a list
   lying strictly inside the classes.

Every number in a counterexample is recomputed through exact arithmetic
before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bcdigraph import (
    DEFAULT_CYCLE_CAP,
    Cycle,
    CycleCensus,
    build_graph,
    enumerate_simple_cycles,
    is_ecycle_free,
)
from .errors import ConsistencyError, WitnessLiftError
from .ratmat import (
    IndexSet,
    RationalMatrix,
    SignPattern,
    as_pattern,
    is_P0,
    minor,
    product_chain,
    sample_qualitative,
    sign_pattern,
)
from .terms import term_from_cycles, term_sign, term_value

__all__ = [
    "CLASS_IS_P0",
    "COUNTEREXAMPLE",
    "UNDECIDED",
    "Counterexample",
    "Certificate",
    "certify",
    "restrict_to_ecycle",
    "negative_minor_of_restriction",
    "lift_to_strict_witness",
    "cyclic_shift",
    "sample_products",
]

CLASS_IS_P0 = "class_is_P0"
COUNTEREXAMPLE = "counterexample"
UNDECIDED = "undecided"

MAX_HALVINGS = 64


@dataclass(frozen=True)
class Counterexample:
    ecycle: Cycle
    alpha0: IndexSet
    restricted: tuple[RationalMatrix, ...]
    restricted_minor: Fraction
    witness: tuple[RationalMatrix, ...]
    witness_minor: Fraction
    epsilon: Fraction


@dataclass(frozen=True)
class Certificate:
    """Verdict plus the evidence behind it.

    ``census`` is the cycle inventory, or None when certification ran in
    short-circuit mode. ``samples_drawn``/``samples_passed`` count the
    optional random confirmations made under a ``class_is_P0`` verdict.
    """

    verdict: str
    patterns: tuple[SignPattern, ...]
    census: CycleCensus | None
    cycles_examined: int
    samples_drawn: int = 0
    samples_passed: int = 0
    counterexample: Counterexample | None = None

    @property
    def cycle_inventory(self) -> tuple[Cycle, ...]:
        return self.census.cycles if self.census is not None else ()

    @property
    def truncated(self) -> bool:
        return self.verdict == UNDECIDED or (self.census is not None and self.census.truncated)


def cyclic_shift(patterns: Sequence, r: int) -> list:
    """Rotate a factor list to start at factor ``r``."""
    patterns = list(patterns)
    if not 0 <= r < len(patterns):
        raise ValueError(f"shift {r} out of range 0..{len(patterns) - 1}")
    return patterns[r:] + patterns[:r]


def restrict_to_ecycle(patterns: Sequence, c: Cycle) -> list[RationalMatrix]:
    """Unit-magnitude matrices supported only on the edges of ``c``."""
    patterns = [as_pattern(p) for p in patterns]
    g = build_graph(patterns)
    grids = [[[0] * p.ncols for _ in range(p.nrows)] for p in patterns]
    for e in c.edges:
        found = g.edge(e.source, e.target)
        if found is None or found.sign != e.sign:
            raise ValueError(f"edge {e.source} -> {e.target} (sign {e.sign:+d}) is not in the graph")
        grids[e.source.layer][e.source.index - 1][e.target.index - 1] = e.sign
    return [RationalMatrix(grid) for grid in grids]


def negative_minor_of_restriction(restricted: Sequence[RationalMatrix], c: Cycle) -> tuple[IndexSet, Fraction]:
    """Principal minor of the restricted product at the cycle's layer-0 vertices.

    Only one term of the expansion survives, the one whose edge set is ``c``
    itself; its sign is -1 because ``c`` is a single e-cycle. The minor of
    the product is checked against that term.
    """
    if not c.is_e:
        raise ValueError("restriction argument needs an e-cycle")
    alpha0 = IndexSet(sorted(v.index for v in c.vertices if v.layer == 0))
    value = minor(product_chain(restricted), alpha0, alpha0)
    term = term_from_cycles(restricted, [c])
    if term_sign(term) != -1 or term_value(restricted, term) != value:
        raise ConsistencyError(
            f"restricted minor {value} at {alpha0!r} is not the single e-cycle term "
            f"{term_value(restricted, term)}"
        )
    if value >= 0:
        raise ConsistencyError(f"restricted minor at {alpha0!r} is {value}, expected negative")
    return alpha0, value


def _perturbed(patterns, restricted, eps):
    out = []
    for p, m in zip(patterns, restricted):
        out.append(RationalMatrix([
            [m[i, j] if m[i, j] else eps * p[i, j] for j in range(p.ncols)]
            for i in range(p.nrows)
        ]))
    return out


def lift_to_strict_witness(
    patterns: Sequence, restricted: Sequence[RationalMatrix], alpha0
) -> tuple[list[RationalMatrix], Fraction]:
    """Fill the zeros of ``restricted`` with ``+-eps`` so every factor has its full pattern.

    ``eps`` starts at 1 and is halved until the minor at ``alpha0`` is
    negative again. Continuity guarantees this happens; running out of
    halvings raises :class:`WitnessLiftError`.
    """
    patterns = [as_pattern(p) for p in patterns]
    restricted = [RationalMatrix(m) for m in restricted]
    alpha0 = IndexSet(alpha0)
    for p, m in zip(patterns, restricted):
        if p.shape != m.shape:
            raise ValueError(f"restricted factor {m.shape} does not match pattern {p.shape}")
        for i, j in m.nonzero():
            if (m[i, j] > 0) != (p[i, j] > 0) or p[i, j] == 0:
                raise ValueError(f"restricted entry ({i + 1},{j + 1}) disagrees with the pattern")
    start = minor(product_chain(restricted), alpha0, alpha0)
    if start >= 0:
        raise ValueError(f"restricted minor at {alpha0!r} is {start}, not negative")
    eps = Fraction(1)
    for _ in range(MAX_HALVINGS + 1):
        witness = _perturbed(patterns, restricted, eps)
        if minor(product_chain(witness), alpha0, alpha0) < 0:
            return witness, eps
        eps /= 2
    raise WitnessLiftError(
        f"minor at {alpha0!r} still nonnegative after {MAX_HALVINGS} halvings (eps={eps}); "
        f"restricted minor was {start}"
    )


def sample_products(patterns: Sequence, count: int, seed=0, magnitude_bound=1):
    """Yield ``(factors, product)`` for ``count`` random members of the class product."""
    patterns = [as_pattern(p) for p in patterns]
    rng = np.random.default_rng(seed)
    for _ in range(count):
        factors = [sample_qualitative(p, magnitude_bound, rng) for p in patterns]
        yield factors, product_chain(factors)


def _counterexample(patterns, c: Cycle) -> Counterexample:
    restricted = restrict_to_ecycle(patterns, c)
    alpha0, rmin = negative_minor_of_restriction(restricted, c)
    witness, eps = lift_to_strict_witness(patterns, restricted, alpha0)
    product = product_chain(witness)
    wmin = minor(product, alpha0, alpha0)
    if wmin >= 0 or is_P0(product):
        raise ConsistencyError(f"witness product is P0 (minor at {alpha0!r} = {wmin})")
    for j, (p, w) in enumerate(zip(patterns, witness)):
        if sign_pattern(w) != p:
            raise ConsistencyError(f"witness factor {j} left its qualitative class")
    return Counterexample(c, alpha0, tuple(restricted), rmin, tuple(witness), wmin, eps)


def certify(
    patterns: Sequence,
    sample_count: int = 0,
    seed=0,
    cycle_cap: int | None = DEFAULT_CYCLE_CAP,
    inventory: bool = True,
) -> Certificate:
    """Certify the class product of ``patterns``.

    With ``inventory=True`` all simple cycles (up to ``cycle_cap``) are
    listed in the certificate; otherwise the search stops at the first
    e-cycle. Either way the e-cycle used for a counterexample is the first
    one in canonical order, and an exhausted cap without an e-cycle gives
    ``undecided``, never ``class_is_P0``.

    Under a ``class_is_P0`` verdict, ``sample_count`` random members of the
    class product are also checked to be P0. A failure there contradicts
    the underlying theorem and raises :class:`ConsistencyError`.
    """
    patterns = tuple(as_pattern(p) for p in patterns)
    if sample_count < 0:
        raise ValueError("sample_count must be nonnegative")
    g = build_graph(patterns)
    if inventory:
        census = enumerate_simple_cycles(g, cycle_cap)
        ecycles = census.ecycles
        first = ecycles[0] if ecycles else None
        done = not census.truncated
        examined = len(census)
    else:
        census = None
        search = is_ecycle_free(g, cycle_cap)
        first = search.cycle
        done = search.status != "undecided"
        examined = search.examined

    if first is not None:
        return Certificate(
            COUNTEREXAMPLE, patterns, census, examined, counterexample=_counterexample(patterns, first)
        )
    if not done:
        return Certificate(UNDECIDED, patterns, census, examined)

    passed = 0
    for factors, product in sample_products(patterns, sample_count, seed):
        verdict = is_P0(product)
        if not verdict:
            raise ConsistencyError(
                f"e-cycle-free graph but sampled product fails P0 at {verdict.alpha!r} "
                f"(minor {verdict.value}); factors {factors}"
            )
        passed += 1
    return Certificate(CLASS_IS_P0, patterns, census, examined, sample_count, passed)
