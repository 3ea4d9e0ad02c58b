"""Acceptance gate: end-to-end checks of the closure pipeline.

Each test pins the externally specified outputs (dimensions, component
counts, certification flags, splitting-field degrees) and the runtime
budgets; the shared helper re-checks the structural output invariants on
every run.
"""

import time

import pytest

from gmpy2 import mpq

from zclosure.closure import (
    ClosureConfig,
    ClosureContext,
    member_connected,
    zariski_closure,
)
from zclosure.errors import BudgetExhaustedError
from zclosure.field import QQ
from zclosure.fixtures import fixture
from zclosure.liealg import conjugate_subalgebra
from zclosure.linalg import MatrixF


def M(rows):
    return MatrixF(QQ, rows)


def diag(*entries):
    n = len(entries)
    return MatrixF(
        QQ, [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)]
    )


def check_output_invariants(G, gens, trace):
    """Structural sanity valid for every run, independent of ground truth."""
    assert G.lie_algebra.is_bracket_closed()
    for g in gens:
        assert conjugate_subalgebra(g, G.lie_algebra) == G.lie_algebra
    assert G.components[0] == MatrixF.identity(QQ, G.n)
    ctx = ClosureContext()
    reps = G.components
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            assert not member_connected(
                G.lie_algebra, reps[i] * reps[j].inverse(), ctx
            )
    hist = trace.dim_history
    assert all(a < b for a, b in zip(hist, hist[1:]))


def timed_closure(gens, limit, config=None):
    t0 = time.monotonic()
    G, trace = zariski_closure(gens, config or ClosureConfig())
    elapsed = time.monotonic() - t0
    assert elapsed < limit, f"took {elapsed:.1f}s, budget {limit}s"
    return G, trace


class TestSmallCases:
    def test_sl2_generation(self):
        gens = [M([[1, 1], [0, 1]]), M([[1, 0], [1, 1]])]
        G, trace = timed_closure(gens, 5.0)
        assert G.lie_algebra.dim == 3
        assert len(G.components) == 1
        check_output_invariants(G, gens, trace)

    def test_cyclic_torus(self):
        gens = [diag(2, mpq(1, 2))]
        G, trace = timed_closure(gens, 1.0)
        assert G.lie_algebra.dim == 1
        assert G.lie_algebra.contains(diag(1, -1))
        assert len(G.components) == 1
        assert G.certified
        check_output_invariants(G, gens, trace)

    def test_finite_group(self):
        gens = [diag(-1, 1)]
        G, trace = timed_closure(gens, 1.0)
        assert G.lie_algebra.dim == 0
        assert len(G.components) == 2
        check_output_invariants(G, gens, trace)


@pytest.fixture(scope="module")
def g2_result():
    gens = fixture("g2")
    t0 = time.monotonic()
    G, trace = zariski_closure(gens, ClosureConfig())
    return gens, G, trace, time.monotonic() - t0


@pytest.fixture(scope="module")
def b2_result():
    gens = fixture("b2")
    t0 = time.monotonic()
    G, trace = zariski_closure(gens, ClosureConfig())
    return gens, G, trace, time.monotonic() - t0


class TestG2Fixture:
    def test_outputs(self, g2_result):
        gens, G, trace, elapsed = g2_result
        assert elapsed < 1800
        assert G.lie_algebra.dim == 14
        assert len(G.components) == 1
        assert G.certified
        assert trace.max_field_degree == 12
        check_output_invariants(G, gens, trace)

    def test_trace_counters(self, g2_result):
        _, _, trace, _ = g2_result
        assert trace.multrel_calls > 0
        assert trace.membership_calls > 0
        assert trace.multrel_time >= 0
        assert trace.membership_time > 0


class TestB2Fixture:
    def test_outputs(self, b2_result):
        gens, G, trace, elapsed = b2_result
        assert elapsed < 1800
        assert G.lie_algebra.dim == 10
        assert len(G.components) == 2
        assert trace.max_field_degree == 8
        check_output_invariants(G, gens, trace)

    def test_trace_counters(self, b2_result):
        _, _, trace, _ = b2_result
        assert trace.multrel_calls > 0
        assert trace.membership_calls > 0


class TestA3Fixture:
    def test_outputs_or_clean_budget_exhaustion(self):
        # stretch case: a completed run must match the pinned outputs; a
        # budget exhaustion must still leave a monotone partial trace
        gens = fixture("a3")
        cfg = ClosureConfig(time_budget=1800)
        try:
            G, trace = zariski_closure(gens, cfg)
        except BudgetExhaustedError as e:
            assert e.trace is not None
            hist = e.trace.dim_history
            assert all(a < b for a, b in zip(hist, hist[1:]))
            return
        assert G.lie_algebra.dim == 15
        assert len(G.components) == 1
        assert trace.max_field_degree == 24
        check_output_invariants(G, gens, trace)
