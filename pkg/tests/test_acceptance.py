"""Acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL ...`` line to the
terminal (past pytest's capture) before asserting.
"""

import contextlib
import io
import itertools
import time

import numpy as np
import pytest

from conftest import WORKED_PATTERNS, random_pattern_list, random_rational_chain, random_single_cycle
from oracles import brute_force_non_p0, naive_product
from p0graph.bcdigraph import adjacency_blocks, build_graph, enumerate_simple_cycles, negate_signs
from p0graph.certify import (
    CLASS_IS_P0,
    COUNTEREXAMPLE,
    certify,
    cyclic_shift,
    negative_minor_of_restriction,
    restrict_to_ecycle,
)
from p0graph.cli import main
from p0graph.ratmat import (
    RationalMatrix,
    SignPattern,
    cauchy_binet_minor,
    is_P0,
    minor,
    principal_minors,
    product_chain,
    sign_pattern,
)

SWEEP_SIZE = 500
SWEEP_SAMPLES = 200


@pytest.fixture
def report(capsys):
    @contextlib.contextmanager
    def criterion(n, title):
        notes = {}
        start = time.perf_counter()
        try:
            yield notes
        except BaseException as exc:
            status, extra = "FAIL", f" ({type(exc).__name__}: {exc})".replace("\n", " ")[:200]
            raise
        else:
            status, extra = "PASS", ""
        finally:
            took = time.perf_counter() - start
            detail = ", ".join(f"{k}={v}" for k, v in notes.items())
            with capsys.disabled():
                print(f"\ncriterion {n}: {status} {title} [{detail}; {took:.2f}s]{extra}")

    return criterion


@pytest.fixture(scope="module")
def sweep():
    """The random lists shared by criteria 3, 4 and 7, with their certificates."""
    rng = np.random.default_rng(314159)
    lists = [random_pattern_list(rng) for _ in range(SWEEP_SIZE)]
    start = time.perf_counter()
    certs = [certify(ps, SWEEP_SAMPLES, seed=i, inventory=False) for i, ps in enumerate(lists)]
    return lists, certs, time.perf_counter() - start


def test_criterion_1_worked_example(report):
    with report(1, "worked example via cmd_check") as notes:
        path = "tests/data/worked_signs.json"
        out = io.StringIO()
        start = time.perf_counter()
        code = main(["check", path], out=out)
        elapsed = time.perf_counter() - start
        text = out.getvalue()
        notes["runtime"] = f"{elapsed:.3f}s"
        assert code == 0 and "verdict: class_is_P0" in text
        assert elapsed < 1.0

        cert = certify([SignPattern(p) for p in WORKED_PATTERNS])
        lengths = sorted(c.length for c in cert.cycle_inventory)
        notes["cycles"] = len(lengths)
        assert lengths == [3] * 5 + [6] * 3
        assert all(c.parity == "o" for c in cert.cycle_inventory)
        assert "simple cycles: 8 cycles (5 of length 3, 3 of length 6)" in text

        unit = [RationalMatrix(p) for p in WORKED_PATTERNS]
        product = product_chain(unit)
        assert product == RationalMatrix([[3, 1], [0, 2]])
        assert product.tolist() == naive_product(WORKED_PATTERNS)
        minors = {tuple(a): v for a, v in principal_minors(product)}
        assert minors == {(1,): 3, (2,): 2, (1, 2): 6}


def test_criterion_2_adjacency_blocks(report):
    expected = [
        [0, 0, 1, -1, -1, 0, 0],
        [0, 0, 1, 0, 1, 0, 0],
        [0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, -1, 0],
        [0, 0, 0, 0, 0, 0, 1],
        [1, 1, 0, 0, 0, 0, 0],
        [-1, 1, 0, 0, 0, 0, 0],
    ]
    with report(2, "7x7 block adjacency of the worked example") as notes:
        a = adjacency_blocks(build_graph([SignPattern(p) for p in WORKED_PATTERNS]))
        notes["shape"] = f"{a.nrows}x{a.ncols}"
        assert a.tolist() == expected


def test_criterion_3_soundness_sweep(report, sweep):
    lists, certs, elapsed = sweep
    with report(3, "soundness sweep") as notes:
        certified = [c for c in certs if c.verdict == CLASS_IS_P0]
        notes["lists"] = len(lists)
        notes["class_is_P0"] = len(certified)
        notes["samples"] = sum(c.samples_drawn for c in certified)
        notes["runtime"] = f"{elapsed:.1f}s"
        assert len(lists) >= 500
        assert all(c.samples_drawn == SWEEP_SAMPLES and c.samples_passed == SWEEP_SAMPLES for c in certified)
        assert all(c.verdict in (CLASS_IS_P0, COUNTEREXAMPLE) for c in certs)
        assert certified and len(certified) < len(certs)
        assert elapsed < 60.0


def test_criterion_4_completeness_sweep(report, sweep):
    lists, certs, _ = sweep
    with report(4, "completeness sweep") as notes:
        checked = 0
        for ps, cert in zip(lists, certs):
            if cert.verdict != COUNTEREXAMPLE:
                continue
            cx = cert.counterexample
            assert cx.ecycle.is_e
            assert [sign_pattern(w) for w in cx.witness] == ps
            product = product_chain(cx.witness)
            assert minor(product, cx.alpha0, cx.alpha0) < 0
            assert not is_P0(product)
            checked += 1
        notes["witnesses"] = checked
        assert checked > 0


def test_criterion_5_single_ecycle_minor(report):
    rng = np.random.default_rng(2718)
    with report(5, "single e-cycle restriction minor is -1") as notes:
        count = 0
        for _ in range(250):
            factors, layer0 = random_single_cycle(rng, parity="e")
            (c,) = enumerate_simple_cycles(build_graph(factors))
            restricted = restrict_to_ecycle([sign_pattern(f) for f in factors], c)
            alpha, value = negative_minor_of_restriction(restricted, c)
            assert list(alpha) == layer0
            assert value == -1
            assert minor(product_chain(restricted), alpha, alpha) == -1
            count += 1
        notes["graphs"] = count
        assert count >= 200


def test_criterion_6_cauchy_binet(report):
    rng = np.random.default_rng(1618)
    with report(6, "Cauchy-Binet equals direct minor") as notes:
        chains = minors = 0
        for _ in range(220):
            chain = random_rational_chain(rng, kmax=4, nmax=5)
            for alpha, value in principal_minors(product_chain(chain)):
                assert cauchy_binet_minor(chain, alpha) == value
                minors += 1
            chains += 1
        notes["chains"] = chains
        notes["minors"] = minors
        assert chains >= 200


def test_criterion_7_rotation_invariance(report, sweep):
    lists, certs, _ = sweep
    with report(7, "verdict invariant under cyclic shifts") as notes:
        shifts = 0
        for ps, cert in zip(lists, certs):
            for r in range(len(ps)):
                assert certify(cyclic_shift(ps, r), inventory=False).verdict == cert.verdict
                shifts += 1
        notes["shifts"] = shifts


def test_criterion_8_k1_correspondence(report):
    rng = np.random.default_rng(1414)
    with report(8, "e-cycles of G_A are the positive cycles of G_-A") as notes:
        count = 0
        for _ in range(250):
            n = int(rng.integers(1, 5))
            d = float(rng.choice([0.3, 0.5, 0.8]))
            a = SignPattern(rng.choice([-1, 0, 1], size=(n, n), p=[d / 2, 1 - d, d / 2]).tolist())
            g = build_graph([a])
            e = {c.vertices for c in enumerate_simple_cycles(g) if c.is_e}
            pos = {c.vertices for c in enumerate_simple_cycles(negate_signs(g)) if c.sign > 0}
            assert g.k == 1 and negate_signs(g) == build_graph([-a])
            assert e == pos
            count += 1
        notes["patterns"] = count
        assert count >= 200


def _micro_lists():
    for k, sizes in ((1, [(1,), (2,)]), (2, list(itertools.product((1, 2), repeat=2)))):
        for n in sizes:
            shapes = [(n[j], n[(j + 1) % k]) for j in range(k)]
            cells = sum(r * c for r, c in shapes)
            for vals in itertools.product((-1, 0, 1), repeat=cells):
                it = iter(vals)
                yield [[[next(it) for _ in range(c)] for _ in range(r)] for r, c in shapes]


def test_criterion_9_micro_exhaustive(report):
    with report(9, "exhaustive k<=2, n<=2 against brute force") as notes:
        start = time.perf_counter()
        lists = hard = converse_misses = 0
        for raw in _micro_lists():
            cert = certify([SignPattern(p) for p in raw], inventory=False)
            bad, _ = brute_force_non_p0(raw)
            if cert.verdict == CLASS_IS_P0:
                hard += bad > 0
            else:
                assert cert.verdict == COUNTEREXAMPLE
                converse_misses += bad == 0
            lists += 1
        elapsed = time.perf_counter() - start
        notes["lists"] = lists
        notes["violations"] = hard
        notes["counterexample_without_grid_failure"] = converse_misses
        notes["runtime"] = f"{elapsed:.1f}s"
        assert hard == 0
        # The grid also finds a failure for every counterexample verdict.
        assert converse_misses == 0
        assert elapsed < 120.0
