"""Exact rational matrices, sign patterns and principal-minor tests.

Everything here is exact. Entries are :class:`fractions.Fraction` and no
code path that decides a sign ever touches a float.

Indices exposed to users are 1-based, following the usual convention for
minors ``M[gamma|delta]``; internal storage is 0-based.
"""

from __future__ import annotations

import itertools
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DimensionError, IndexSetError

__all__ = [
    "Rational",
    "to_rational",
    "RationalMatrix",
    "SignPattern",
    "IndexSet",
    "Permutation",
    "MinorVerdict",
    "as_matrix",
    "as_pattern",
    "multiply",
    "product_chain",
    "check_chain",
    "determinant",
    "minor",
    "principal_minors",
    "is_P0",
    "is_P",
    "permutation_parity",
    "cauchy_binet_minor",
    "sample_qualitative",
    "sign_pattern",
]

Rational = Fraction


def to_rational(x) -> Fraction:
    """Convert an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused: a decimal literal has no exact rational meaning the
    caller can be assumed to intend.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, (float, np.floating)):
        raise TypeError(f"float entry {x!r} refused; pass an int, Fraction or 'p/q' string")
    if isinstance(x, str):
        text = x.strip()
        if not text or any(c in text for c in ".eE"):
            raise ValueError(f"not a rational literal: {x!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {x!r}") from exc
    try:
        return Fraction(operator.index(x))
    except TypeError:
        raise TypeError(f"cannot interpret {x!r} as an exact rational") from None


def _sign(x) -> int:
    return (x > 0) - (x < 0)


class _Grid:
    """Immutable dense 2-D grid; shared machinery for matrices and patterns."""

    __slots__ = ("_rows", "_hash")

    def _init_rows(self, rows: tuple[tuple, ...]) -> None:
        if not rows or not rows[0]:
            raise DimensionError("matrices must have at least one row and one column")
        width = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != width:
                raise DimensionError(f"row {i} has {len(row)} entries, expected {width}")
        self._rows = rows
        self._hash = None

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return len(self._rows[0])

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self._rows), len(self._rows[0]))

    @property
    def entries(self) -> tuple:
        """Row-major flat tuple of entries."""
        return tuple(itertools.chain.from_iterable(self._rows))

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def rows(self) -> tuple[tuple, ...]:
        return self._rows

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        return self._rows[i][j]

    def tolist(self) -> list[list]:
        return [list(r) for r in self._rows]

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((type(self).__name__, self._rows))
        return self._hash

    def nonzero(self) -> Iterator[tuple[int, int]]:
        """0-based positions of nonzero entries, row-major."""
        for i, row in enumerate(self._rows):
            for j, v in enumerate(row):
                if v:
                    yield i, j


class RationalMatrix(_Grid):
    """Dense matrix of exact rationals.

    Accepts any nested sequence (or 2-D numpy integer/object array) whose
    entries :func:`to_rational` understands.

    >>> RationalMatrix([[1, "1/2"], [0, 3]]) @ RationalMatrix.identity(2)
    RationalMatrix([['1', '1/2'], ['0', '3']])
    """

    __slots__ = ()

    def __init__(self, rows):
        if isinstance(rows, _Grid):
            rows = rows.rows()
        self._init_rows(tuple(tuple(to_rational(x) for x in r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> RationalMatrix:
        return cls([[0] * ncols for _ in range(nrows)])

    def to_strings(self) -> list[list[str]]:
        """Canonical ``"p/q"`` strings (plain ``"p"`` for integers)."""
        return [[str(x) for x in r] for r in self._rows]

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        return multiply(self, other)

    def __neg__(self) -> RationalMatrix:
        return RationalMatrix([[-x for x in r] for r in self._rows])

    def __repr__(self):
        return f"RationalMatrix({self.to_strings()!r})"


class SignPattern(_Grid):
    """Matrix over {-1, 0, +1}: the sign pattern defining a qualitative class."""

    __slots__ = ()

    def __init__(self, rows):
        if isinstance(rows, _Grid):
            rows = rows.rows()
        out = []
        for r in rows:
            vals = []
            for x in r:
                v = to_rational(x)
                if v not in (-1, 0, 1):
                    raise ValueError(f"sign pattern entries must be -1, 0 or 1, got {x!r}")
                vals.append(int(v))
            out.append(tuple(vals))
        self._init_rows(tuple(out))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> SignPattern:
        return cls([[0] * ncols for _ in range(nrows)])

    def nnz(self) -> int:
        return sum(1 for _ in self.nonzero())

    def to_array(self) -> np.ndarray:
        return np.array(self._rows, dtype=np.int8)

    def __neg__(self) -> SignPattern:
        return SignPattern([[-x for x in r] for r in self._rows])

    def __repr__(self):
        return f"SignPattern({self.tolist()!r})"


def as_matrix(x) -> RationalMatrix:
    return x if isinstance(x, RationalMatrix) else RationalMatrix(x)


def as_pattern(x) -> SignPattern:
    """Coerce to a sign pattern; rational matrices are reduced to their signs."""
    if isinstance(x, SignPattern):
        return x
    if isinstance(x, RationalMatrix):
        return sign_pattern(x)
    return sign_pattern(RationalMatrix(x))


class IndexSet(tuple):
    """Nonempty, strictly increasing tuple of 1-based indices."""

    def __new__(cls, elements: Iterable[int] = ()):
        if isinstance(elements, IndexSet):
            return elements
        elems = tuple(operator.index(e) for e in elements)
        if not elems:
            raise IndexSetError("index sets must be nonempty")
        if elems[0] < 1:
            raise IndexSetError(f"indices are 1-based, got {elems[0]}")
        if any(b <= a for a, b in zip(elems, elems[1:])):
            raise IndexSetError(f"indices must be strictly increasing: {list(elems)}")
        return super().__new__(cls, elems)

    def check_bound(self, n: int, what: str = "index") -> IndexSet:
        if self[-1] > n:
            raise IndexSetError(f"{what} {self[-1]} out of range 1..{n}")
        return self

    def zero_based(self) -> tuple[int, ...]:
        return tuple(i - 1 for i in self)

    def __repr__(self):
        return "{" + ",".join(map(str, self)) + "}"


@dataclass(frozen=True)
class Permutation:
    """Bijection of an index set, stored as the reordered list ``image``.

    ``image[m]`` is where ``domain[m]`` is sent.
    """

    domain: IndexSet
    image: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "domain", IndexSet(self.domain))
        object.__setattr__(self, "image", tuple(self.image))
        if tuple(sorted(self.image)) != tuple(self.domain):
            raise ValueError(f"{list(self.image)} is not a rearrangement of {self.domain!r}")

    @classmethod
    def from_image(cls, image: Sequence[int]) -> Permutation:
        return cls(IndexSet(sorted(image)), tuple(image))

    def __call__(self, x: int) -> int:
        return self.image[self.domain.index(x)]

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycle decomposition, trivial cycles included."""
        mapping = dict(zip(self.domain, self.image))
        seen: set[int] = set()
        out = []
        for start in self.domain:
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            nxt = mapping[start]
            while nxt != start:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = mapping[nxt]
            out.append(tuple(cyc))
        return out


def permutation_parity(p: Permutation) -> int:
    """+1 for even permutations, -1 for odd: ``(-1)**(r - s)`` with s cycles."""
    return -1 if (len(p.domain) - len(p.cycles())) % 2 else 1


@dataclass(frozen=True)
class MinorVerdict:
    """Outcome of a principal-minor test.

    Truthy iff the property holds. When it fails, ``alpha`` is the
    lexicographically first offending index set and ``value`` its minor.
    """

    holds: bool
    alpha: IndexSet | None = None
    value: Fraction | None = None

    def __bool__(self):
        return self.holds


def multiply(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    if a.ncols != b.nrows:
        raise DimensionError(f"cannot multiply {a.nrows}x{a.ncols} by {b.nrows}x{b.ncols}")
    cols = list(zip(*b.rows()))
    return RationalMatrix(
        [[sum(map(operator.mul, row, col), Fraction(0)) for col in cols] for row in a.rows()]
    )


def check_chain(shapes: Sequence[tuple[int, int]]) -> None:
    """Validate that shapes ``n_j x n_{j+1}`` close up cyclically."""
    k = len(shapes)
    if k == 0:
        raise DimensionError("empty factor list")
    for j in range(k - 1):
        if shapes[j][1] != shapes[j + 1][0]:
            raise DimensionError(
                f"factors {j} ({shapes[j][0]}x{shapes[j][1]}) and {j + 1} "
                f"({shapes[j + 1][0]}x{shapes[j + 1][1]}) do not fit"
            )
    if shapes[-1][1] != shapes[0][0]:
        raise DimensionError(
            f"product is {shapes[0][0]}x{shapes[-1][1]}, not square: last factor "
            f"{k - 1} ({shapes[-1][0]}x{shapes[-1][1]}) does not close onto factor 0 "
            f"({shapes[0][0]}x{shapes[0][1]})"
        )


def product_chain(ms: Sequence[RationalMatrix]) -> RationalMatrix:
    """Left-to-right product of a cyclically compatible list; always square."""
    ms = [as_matrix(m) for m in ms]
    check_chain([m.shape for m in ms])
    return reduce(multiply, ms)


def _det_small(rows) -> Fraction | int:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def _bareiss(rows: list[list[int]]) -> int:
    """Fraction-free elimination on an integer matrix; returns its determinant."""
    a = [list(r) for r in rows]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for p in range(k + 1, n):
                if a[p][k] != 0:
                    a[k], a[p] = a[p], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def _det_rows(rows) -> Fraction:
    if len(rows) <= 3:
        return Fraction(_det_small(rows))
    # Clear denominators row by row so elimination stays in the integers.
    scale = 1
    int_rows = []
    for r in rows:
        lcm = math.lcm(*(x.denominator for x in r))
        scale *= lcm
        int_rows.append([x.numerator * (lcm // x.denominator) for x in r])
    return Fraction(_bareiss(int_rows), scale)


def determinant(m: RationalMatrix) -> Fraction:
    """Exact determinant of a square matrix."""
    if m.nrows != m.ncols:
        raise DimensionError(f"determinant of non-square {m.nrows}x{m.ncols} matrix")
    return _det_rows(m.rows())


def minor(m: RationalMatrix, gamma: Iterable[int], delta: Iterable[int]) -> Fraction:
    """Determinant of the submatrix with rows ``gamma`` and columns ``delta`` (1-based)."""
    gamma = IndexSet(gamma).check_bound(m.nrows, "row index")
    delta = IndexSet(delta).check_bound(m.ncols, "column index")
    if len(gamma) != len(delta):
        raise DimensionError(f"row set {gamma!r} and column set {delta!r} differ in size")
    rows = m.rows()
    return _det_rows([[rows[i - 1][j - 1] for j in delta] for i in gamma])


def _lex_subsets(n: int) -> Iterator[tuple[int, ...]]:
    # {1}, {1,2}, {1,2,3}, ..., {1,3}, ..., {2}, ...: plain lexicographic order.
    stack = [((i,), i) for i in range(n, 0, -1)]
    while stack:
        subset, last = stack.pop()
        yield subset
        stack.extend((subset + (i,), i) for i in range(n, last, -1))


def _integer_scaled(m: RationalMatrix) -> tuple[list[list[int]], int]:
    # A principal minor of order r of c*M is c**r times that of M, so a
    # positive common denominator c never changes a sign.
    c = math.lcm(*(x.denominator for x in m.entries))
    return [[x.numerator * (c // x.denominator) for x in r] for r in m.rows()], c


def principal_minors(m: RationalMatrix) -> Iterator[tuple[IndexSet, Fraction]]:
    """Yield every ``(alpha, M[alpha])`` over nonempty alpha, lexicographically."""
    if m.nrows != m.ncols:
        raise DimensionError(f"principal minors of non-square {m.nrows}x{m.ncols} matrix")
    int_rows, c = _integer_scaled(m)
    for alpha in _lex_subsets(m.nrows):
        sub = [[int_rows[i - 1][j - 1] for j in alpha] for i in alpha]
        d = _det_small(sub) if len(alpha) <= 3 else _bareiss(sub)
        yield IndexSet(alpha), Fraction(d, c ** len(alpha))


def _first_failure(m: RationalMatrix, strict: bool) -> MinorVerdict:
    for alpha, value in principal_minors(m):
        if value < 0 or (strict and value == 0):
            return MinorVerdict(False, alpha, value)
    return MinorVerdict(True)


def is_P0(m: RationalMatrix) -> MinorVerdict:
    """Test that every principal minor is nonnegative."""
    return _first_failure(as_matrix(m), strict=False)


def is_P(m: RationalMatrix) -> MinorVerdict:
    """Test that every principal minor is strictly positive."""
    return _first_failure(as_matrix(m), strict=True)


def cauchy_binet_minor(ms: Sequence[RationalMatrix], alpha0: Iterable[int]) -> Fraction:
    """Principal minor ``A[alpha0]`` of ``A = ms[0] @ ... @ ms[k-1]`` by Cauchy-Binet.

    Sums, over every chain of intermediate index sets of size ``|alpha0|``,
    the product of factor minors. The product matrix is never formed, so
    this serves as an independent check on :func:`minor` of the product.
    """
    ms = [as_matrix(m) for m in ms]
    check_chain([m.shape for m in ms])
    alpha0 = IndexSet(alpha0).check_bound(ms[0].nrows)
    k, r = len(ms), len(alpha0)
    if k == 1:
        return minor(ms[0], alpha0, alpha0)

    def chain_sum(j: int, rows: IndexSet) -> Fraction:
        if j == k - 1:
            return minor(ms[j], rows, alpha0)
        total = Fraction(0)
        # No subsets of the right size means an empty sum.
        for cols in itertools.combinations(range(1, ms[j].ncols + 1), r):
            cols = IndexSet(cols)
            factor = minor(ms[j], rows, cols)
            if factor:
                total += factor * chain_sum(j + 1, cols)
        return total

    return chain_sum(0, alpha0)


def sample_qualitative(
    s: SignPattern,
    magnitude_bound=1,
    seed: int | np.random.Generator | None = 0,
    resolution: int = 1000,
) -> RationalMatrix:
    """Draw a matrix from the qualitative class of ``s``.

    Each nonzero magnitude is ``bound * p / q`` with ``q`` uniform on
    ``1..resolution`` and ``p`` uniform on ``1..q``, so it lies in
    ``(0, bound]``. ``seed`` may also be a numpy Generator, which lets a
    caller draw a stream of samples from one source.
    """
    s = as_pattern(s)
    bound = to_rational(magnitude_bound)
    if bound <= 0:
        raise ValueError(f"magnitude bound must be positive, got {bound}")
    rng = np.random.default_rng(seed)
    size = s.nrows * s.ncols
    dens = rng.integers(1, resolution + 1, size=size)
    nums = rng.integers(1, dens + 1)
    flat = [
        sign * bound * Fraction(int(p), int(q)) if sign else Fraction(0)
        for sign, p, q in zip(s.entries, nums, dens)
    ]
    return RationalMatrix([flat[i * s.ncols:(i + 1) * s.ncols] for i in range(s.nrows)])


def sign_pattern(m: RationalMatrix) -> SignPattern:
    """Entrywise signum."""
    m = as_matrix(m)
    return SignPattern([[_sign(x) for x in r] for r in m.rows()])
