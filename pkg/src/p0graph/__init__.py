"""Sign-pattern certification of P0-matrix products via signed BC digraphs."""

from .bcdigraph import (
    BCDigraph,
    Cycle,
    LayeredVertex,
    SignedEdge,
    adjacency_blocks,
    build_graph,
    classify_cycle,
    dot_export,
    enumerate_simple_cycles,
    is_ecycle_free,
    negate_signs,
)
from .certify import (
    CLASS_IS_P0,
    COUNTEREXAMPLE,
    UNDECIDED,
    Certificate,
    certify,
    cyclic_shift,
    lift_to_strict_witness,
    negative_minor_of_restriction,
    restrict_to_ecycle,
)
from .errors import ConsistencyError, DimensionError, IndexSetError, WitnessLiftError
from .ratmat import (
    IndexSet,
    Permutation,
    RationalMatrix,
    SignPattern,
    cauchy_binet_minor,
    is_P,
    is_P0,
    minor,
    multiply,
    permutation_parity,
    product_chain,
    sample_qualitative,
    sign_pattern,
)
from .terms import TermDecomposition, decompose_term, term_sign

__version__ = "0.1.0"
