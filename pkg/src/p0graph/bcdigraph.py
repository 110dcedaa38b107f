"""Signed (k,{1})-block-circulant digraphs of matrix factorizations.

A list of sign patterns ``[S0, ..., S(k-1)]`` with ``S_j`` of shape
``n_j x n_(j+1 mod k)`` gives a digraph with one vertex layer per factor and
one signed edge ``V_j^r -> V_(j+1)^s`` per nonzero entry ``(S_j)_rs``.
Every cycle of such a graph has length a multiple of ``k``.

A cycle of length ``k*r1`` with ``r2`` negative edges is an *e-cycle* when
``(-1)**(r1 + r2) == 1`` and an *o-cycle* otherwise.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import ConsistencyError, DimensionError
from .ratmat import SignPattern, as_pattern, check_chain

__all__ = [
    "DEFAULT_CYCLE_CAP",
    "LayeredVertex",
    "SignedEdge",
    "BCDigraph",
    "Cycle",
    "CycleCensus",
    "EcycleSearch",
    "build_graph",
    "graph_patterns",
    "adjacency_blocks",
    "iter_simple_cycles",
    "enumerate_simple_cycles",
    "classify_cycle",
    "is_ecycle_free",
    "negate_signs",
    "rotate_layers",
    "dot_export",
]

DEFAULT_CYCLE_CAP = 10**6


class LayeredVertex(NamedTuple):
    """Vertex ``V_layer^index``; ``index`` is 1-based.

    Tuple ordering is layer-major, index-minor, which is the canonical
    vertex order used everywhere.
    """

    layer: int
    index: int

    def __str__(self):
        return f"V{self.layer}^{self.index}"


class SignedEdge(NamedTuple):
    source: LayeredVertex
    target: LayeredVertex
    sign: int


@dataclass(frozen=True)
class BCDigraph:
    k: int
    layer_sizes: tuple[int, ...]
    edges: tuple[SignedEdge, ...]
    _succ: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "layer_sizes", tuple(self.layer_sizes))
        if self.k < 1 or len(self.layer_sizes) != self.k:
            raise DimensionError(f"need k >= 1 layer sizes, got k={self.k}, sizes={self.layer_sizes}")
        if any(n < 1 for n in self.layer_sizes):
            raise DimensionError(f"layer sizes must be positive: {self.layer_sizes}")
        edges = tuple(sorted(SignedEdge(LayeredVertex(*e[0]), LayeredVertex(*e[1]), e[2]) for e in self.edges))
        seen = set()
        succ: dict[LayeredVertex, list[SignedEdge]] = {v: [] for v in self.vertices()}
        for e in edges:
            u, v, s = e
            for w in (u, v):
                if not (0 <= w.layer < self.k and 1 <= w.index <= self.layer_sizes[w.layer]):
                    raise ValueError(f"edge endpoint {w} outside the vertex set")
            if v.layer != (u.layer + 1) % self.k:
                raise ValueError(f"edge {u} -> {v} skips a layer")
            if s not in (-1, 1):
                raise ValueError(f"edge sign must be +1 or -1, got {s}")
            if (u, v) in seen:
                raise ValueError(f"parallel edges {u} -> {v}")
            seen.add((u, v))
            succ[u].append(e)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_succ", {u: tuple(es) for u, es in succ.items()})

    def vertices(self) -> list[LayeredVertex]:
        return [LayeredVertex(j, i) for j, n in enumerate(self.layer_sizes) for i in range(1, n + 1)]

    def successors(self, v: LayeredVertex) -> tuple[SignedEdge, ...]:
        """Out-edges of ``v``, sorted by target."""
        return self._succ[v]

    def edge(self, u: LayeredVertex, v: LayeredVertex) -> SignedEdge | None:
        for e in self._succ.get(u, ()):
            if e.target == v:
                return e
        return None


@dataclass(frozen=True)
class Cycle:
    """Simple directed cycle, rotated to start at its smallest vertex."""

    edges: tuple[SignedEdge, ...]
    r1: int
    r2: int
    parity: str

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> tuple[LayeredVertex, ...]:
        return tuple(e.source for e in self.edges)

    @property
    def sign(self) -> int:
        """Product of the edge signs."""
        return -1 if self.r2 % 2 else 1

    @property
    def is_e(self) -> bool:
        return self.parity == "e"

    def __str__(self):
        path = " -> ".join(str(v) for v in self.vertices + self.vertices[:1])
        return f"{path}  (length {self.length}, r1={self.r1}, r2={self.r2}, {self.parity})"


@dataclass(frozen=True)
class CycleCensus:
    """Result of cycle enumeration; ``truncated`` means the cap was hit."""

    cycles: tuple[Cycle, ...]
    truncated: bool
    cap: int | None

    def __iter__(self):
        return iter(self.cycles)

    def __len__(self):
        return len(self.cycles)

    def __getitem__(self, i):
        return self.cycles[i]

    @property
    def ecycles(self) -> list[Cycle]:
        return [c for c in self.cycles if c.is_e]


@dataclass(frozen=True)
class EcycleSearch:
    """Outcome of :func:`is_ecycle_free`.

    ``status`` is ``"free"``, ``"has_ecycle"`` or ``"undecided"``.
    Only ``"free"`` is truthy, so ``if is_ecycle_free(g):`` cannot mistake an
    unfinished search for a proof.
    """

    status: str
    cycle: Cycle | None
    examined: int

    def __bool__(self):
        return self.status == "free"


def build_graph(patterns: Sequence) -> BCDigraph:
    """Build the signed BC digraph of a cyclically compatible pattern list.

    Rational matrices are accepted too and reduced to their sign patterns.
    """
    patterns = [as_pattern(p) for p in patterns]
    check_chain([p.shape for p in patterns])
    k = len(patterns)
    edges = [
        SignedEdge(LayeredVertex(j, r + 1), LayeredVertex((j + 1) % k, s + 1), p[r, s])
        for j, p in enumerate(patterns)
        for r, s in p.nonzero()
    ]
    return BCDigraph(k, tuple(p.nrows for p in patterns), tuple(edges))


def graph_patterns(g: BCDigraph) -> list[SignPattern]:
    """Recover the pattern list a graph was built from."""
    k, n = g.k, g.layer_sizes
    grids = [[[0] * n[(j + 1) % k] for _ in range(n[j])] for j in range(k)]
    for u, v, s in g.edges:
        grids[u.layer][u.index - 1][v.index - 1] = s
    return [SignPattern(grid) for grid in grids]


def adjacency_blocks(g: BCDigraph) -> SignPattern:
    """Signed adjacency matrix over all vertices in canonical order.

    The only nonzero blocks are ``(j, j+1 mod k)``, each equal to the
    ``j``-th sign pattern.
    """
    offsets = [0]
    for n in g.layer_sizes:
        offsets.append(offsets[-1] + n)
    total = offsets[-1]
    grid = [[0] * total for _ in range(total)]
    for u, v, s in g.edges:
        grid[offsets[u.layer] + u.index - 1][offsets[v.layer] + v.index - 1] = s
    return SignPattern(grid)


def classify_cycle(edges: Iterable[SignedEdge], k: int) -> Cycle:
    """Validate a closed simple walk and compute ``r1``, ``r2`` and parity."""
    edges = [SignedEdge(LayeredVertex(*e[0]), LayeredVertex(*e[1]), e[2]) for e in edges]
    if not edges:
        raise ValueError("a cycle needs at least one edge")
    for a, b in zip(edges, edges[1:] + edges[:1]):
        if a.target != b.source:
            raise ValueError(f"edges {a.source}->{a.target} and {b.source}->{b.target} do not chain")
        if a.target.layer != (a.source.layer + 1) % k:
            raise ValueError(f"edge {a.source}->{a.target} does not advance one layer (k={k})")
    verts = [e.source for e in edges]
    if len(set(verts)) != len(verts):
        raise ValueError("walk repeats a vertex; not a simple cycle")
    if len(edges) % k:
        raise ValueError(f"cycle length {len(edges)} is not a multiple of k={k}")
    start = verts.index(min(verts))
    edges = edges[start:] + edges[:start]
    r1 = len(edges) // k
    r2 = sum(1 for e in edges if e.sign < 0)
    parity = "e" if (r1 + r2) % 2 == 0 else "o"
    # Second route: weight each departure from layer 0 by an extra -1. The
    # cycle leaves layer 0 exactly r1 times, so the weighted sign product
    # is (-1)**(r1 + r2).
    weighted = 1
    for e in edges:
        weighted *= e.sign * (-1 if e.source.layer == 0 else 1)
    if (weighted == 1) != (parity == "e"):
        raise ConsistencyError(f"parity routes disagree on cycle {verts}")
    return Cycle(tuple(edges), r1, r2, parity)


def _scc_of(s, succ, pred) -> set:
    """Strong component of ``s`` in the subgraph induced on vertices >= s."""

    def reach(adj):
        seen = {s}
        stack = [s]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w >= s and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    return reach(succ) & reach(pred)


def _unblock(u, blocked: set, B: dict) -> None:
    stack = [u]
    while stack:
        x = stack.pop()
        if x in blocked:
            blocked.remove(x)
            stack.extend(B[x])
            B[x].clear()


def _circuits(s, succ, comp) -> Iterator[list]:
    # Johnson's circuit search rooted at s, restricted to comp. Successors are
    # visited in sorted order and s (the minimum of comp) is tried first, so
    # cycles come out in lexicographic order of their vertex sequences.
    adj = {v: [w for w in succ[v] if w in comp] for v in comp}
    blocked = {s}
    B: dict = defaultdict(set)
    path = [s]
    stack = [iter(adj[s])]
    closed = [False]
    while stack:
        for w in stack[-1]:
            if w == s:
                yield list(path)
                closed[-1] = True
            elif w not in blocked:
                path.append(w)
                closed.append(False)
                stack.append(iter(adj[w]))
                blocked.add(w)
                break
        else:
            v = path.pop()
            stack.pop()
            found = closed.pop()
            if found:
                _unblock(v, blocked, B)
                if closed:
                    closed[-1] = True
            else:
                for w in adj[v]:
                    B[w].add(v)


def iter_simple_cycles(g: BCDigraph) -> Iterator[Cycle]:
    """Lazily yield every simple cycle in canonical order.

    Canonical order: cycles rotated to start at their smallest vertex,
    sorted lexicographically by vertex sequence.
    """
    order = g.vertices()
    succ = {v: [e.target for e in g.successors(v)] for v in order}
    pred: dict = {v: [] for v in order}
    for u, v, _ in g.edges:
        pred[v].append(u)
    for s in order:
        comp = _scc_of(s, succ, pred)
        if len(comp) == 1 and s not in succ[s]:
            continue
        for verts in _circuits(s, succ, comp):
            closing = verts[1:] + verts[:1]
            yield classify_cycle([g.edge(u, v) for u, v in zip(verts, closing)], g.k)


def enumerate_simple_cycles(g: BCDigraph, cap: int | None = DEFAULT_CYCLE_CAP) -> CycleCensus:
    """Collect up to ``cap`` simple cycles; ``cap=None`` means no limit."""
    if cap is not None and cap < 1:
        raise ValueError(f"cycle cap must be positive, got {cap}")
    found = []
    truncated = False
    for c in iter_simple_cycles(g):
        if cap is not None and len(found) == cap:
            truncated = True
            break
        found.append(c)
    found.sort(key=lambda c: c.vertices)
    return CycleCensus(tuple(found), truncated, cap)


def is_ecycle_free(g: BCDigraph, cap: int | None = DEFAULT_CYCLE_CAP) -> EcycleSearch:
    """Search for an e-cycle, stopping at the first one (canonical order).

    Returns ``"free"`` only after every cycle has been examined. If ``cap``
    cycles were examined without finding an e-cycle and more remain, the
    answer is ``"undecided"``.
    """
    examined = 0
    for c in iter_simple_cycles(g):
        if cap is not None and examined == cap:
            return EcycleSearch("undecided", None, examined)
        examined += 1
        if c.is_e:
            return EcycleSearch("has_ecycle", c, examined)
    return EcycleSearch("free", None, examined)


def negate_signs(g: BCDigraph) -> BCDigraph:
    return BCDigraph(g.k, g.layer_sizes, tuple(SignedEdge(u, v, -s) for u, v, s in g.edges))


def rotate_layers(g: BCDigraph, r: int) -> BCDigraph:
    """Relabel layer ``j`` as ``j - r mod k``.

    ``rotate_layers(build_graph(ps), r)`` equals ``build_graph`` of the list
    rotated to start at factor ``r``.
    """
    k = g.k

    def move(v):
        return LayeredVertex((v.layer - r) % k, v.index)

    sizes = tuple(g.layer_sizes[(j + r) % k] for j in range(k))
    return BCDigraph(k, sizes, tuple(SignedEdge(move(u), move(v), s) for u, v, s in g.edges))


_HIGHLIGHT = ["red", "blue", "darkgreen", "orange", "purple", "brown"]


def _node_id(v: LayeredVertex) -> str:
    return f'"V{v.layer}_{v.index}"'


def dot_export(g: BCDigraph, cycles: Sequence[Cycle] | None = None) -> str:
    """Render as Graphviz DOT text.

    Negative edges are dashed, positive edges bold. Each layer is a ranked
    cluster. Edges on the given cycles are coloured, one colour per cycle.
    """
    colour = {}
    for i, c in enumerate(cycles or ()):
        for e in c.edges:
            colour.setdefault((e.source, e.target), _HIGHLIGHT[i % len(_HIGHLIGHT)])
    lines = [f"digraph BC{g.k} {{", "  rankdir=LR;", "  node [shape=circle];"]
    for j, n in enumerate(g.layer_sizes):
        lines.append(f"  subgraph cluster_layer{j} {{")
        lines.append(f'    label="V{j}";')
        lines.append("    rank=same;")
        for i in range(1, n + 1):
            v = LayeredVertex(j, i)
            lines.append(f'    {_node_id(v)} [label="{j}.{i}"];')
        lines.append("  }")
    for u, v, s in g.edges:
        attrs = ["style=dashed" if s < 0 else "style=bold", f'label="{"+" if s > 0 else "-"}"']
        if (u, v) in colour:
            attrs.append(f"color={colour[(u, v)]}")
        lines.append(f"  {_node_id(u)} -> {_node_id(v)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
