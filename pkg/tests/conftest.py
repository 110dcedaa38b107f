import numpy as np
import pytest

from p0graph.ratmat import RationalMatrix, SignPattern

# Sign patterns of the three factors in the worked example (2x3, 3x2, 2x2).
WORKED_PATTERNS = [
    [[1, -1, -1], [1, 0, 1]],
    [[1, 0], [-1, 0], [0, 1]],
    [[1, 1], [-1, 1]],
]


@pytest.fixture
def worked_patterns():
    return [SignPattern(p) for p in WORKED_PATTERNS]


@pytest.fixture
def worked_unit():
    """The worked-example factors with every letter set to 1."""
    return [RationalMatrix(p) for p in WORKED_PATTERNS]


def random_pattern_list(rng, kmax=4, nmax=4, densities=(0.2, 0.35, 0.5, 0.8)):
    k = int(rng.integers(1, kmax + 1))
    n = [int(x) for x in rng.integers(1, nmax + 1, size=k)]
    d = float(rng.choice(densities))
    return [
        SignPattern(rng.choice([-1, 0, 1], size=(n[j], n[(j + 1) % k]), p=[d / 2, 1 - d, d / 2]).tolist())
        for j in range(k)
    ]


def random_rational_chain(rng, kmax=4, nmax=5, zero_prob=0.25):
    k = int(rng.integers(1, kmax + 1))
    n = [int(x) for x in rng.integers(1, nmax + 1, size=k)]
    chain = []
    for j in range(k):
        rows, cols = n[j], n[(j + 1) % k]
        nums = rng.integers(-9, 10, size=(rows, cols))
        dens = rng.integers(1, 7, size=(rows, cols))
        mask = rng.random((rows, cols)) < zero_prob
        chain.append(RationalMatrix(
            [[0 if mask[i, c] else f"{nums[i, c]}/{dens[i, c]}" for c in range(cols)] for i in range(rows)]
        ))
    return chain


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def random_single_cycle(rng, parity="e", kmax=4, nmax=4, unit=True):
    """Factor list whose graph is one simple cycle of the requested parity.

    Returns (factors, layer0_indices). Magnitudes are 1 when ``unit``,
    otherwise small positive rationals.
    """
    k = int(rng.integers(1, kmax + 1))
    n = [int(x) for x in rng.integers(1, nmax + 1, size=k)]
    r1 = int(rng.integers(1, min(n) + 1))
    visits = [list(rng.permutation(n[j])[:r1] + 1) for j in range(k)]
    order = [(j, int(visits[j][t])) for t in range(r1) for j in range(k)]
    signs = [int(s) for s in rng.choice([-1, 1], size=len(order))]
    r2 = signs.count(-1)
    if ((r1 + r2) % 2 == 0) != (parity == "e"):
        signs[0] = -signs[0]
    grids = [[[0] * n[(j + 1) % k] for _ in range(n[j])] for j in range(k)]
    for (u, v), s in zip(zip(order, order[1:] + order[:1]), signs):
        mag = 1 if unit else f"{int(rng.integers(1, 10))}/{int(rng.integers(1, 10))}"
        grids[u[0]][u[1] - 1][v[1] - 1] = s if unit else (f"-{mag}" if s < 0 else mag)
    return [RationalMatrix(g) for g in grids], sorted(int(i) for i in visits[0])
