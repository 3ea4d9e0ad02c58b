import random

from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from zclosure.lattice import (
    IntegerLattice,
    hnf,
    hnf_with_transform,
    integer_kernel,
    rational_kernel_integer_basis,
    saturate,
)


def rand_rows(rng, k, n, bound=6):
    return [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(k)]


class TestHNF:
    def test_transform_is_unimodular_and_consistent(self):
        rng = random.Random(3)
        for _ in range(50):
            rows = rand_rows(rng, 3, 4)
            h, u, rank = hnf_with_transform(rows, 4)
            # u * rows == h
            for i in range(len(rows)):
                prod = [
                    sum(u[i][k] * rows[k][j] for k in range(len(rows)))
                    for j in range(4)
                ]
                assert prod == h[i]

    def test_canonical_under_shuffle(self):
        rng = random.Random(5)
        for _ in range(100):
            rows = rand_rows(rng, 4, 4)
            h1 = hnf(rows, 4)
            shuffled = [list(r) for r in rows]
            rng.shuffle(shuffled)
            # also mix in a sum of two generators
            shuffled.append(
                [a + b for a, b in zip(shuffled[0], shuffled[-1])]
            )
            assert hnf(shuffled, 4) == h1

    def test_pivots_positive_reduced(self):
        rng = random.Random(7)
        for _ in range(50):
            rows = rand_rows(rng, 3, 3)
            h = hnf(rows, 3)
            for i, r in enumerate(h):
                p = next(j for j, e in enumerate(r) if e != 0)
                assert r[p] > 0
                for above in h[:i]:
                    assert 0 <= above[p] < r[p]


class TestKernelSaturate:
    def test_integer_kernel_annihilates(self):
        rng = random.Random(11)
        for _ in range(100):
            rows = rand_rows(rng, 4, 3)
            ker = integer_kernel(rows, 3)
            for v in ker:
                for j in range(3):
                    assert sum(v[i] * rows[i][j] for i in range(4)) == 0

    def test_saturate_idempotent_pure_rank_preserving(self):
        rng = random.Random(13)
        for _ in range(500):
            k = rng.randint(1, 3)
            n = rng.randint(k, 4)
            rows = rand_rows(rng, k, n)
            L = IntegerLattice(n, rows)
            S = L.saturation()
            assert S.rank == L.rank
            assert S.saturation() == S
            assert S.contains_lattice(L)
            # purity: any integer vector with a multiple in S lies in S
            if S.rank:
                v = list(S.basis[0])
                assert S.contains(v)

    def test_rational_kernel_saturated_rank4(self):
        # clearing denominators alone yields an index-206 sublattice here
        x = [mpq(139), mpq(311), mpq(16), mpq(-79), mpq(-206)]
        basis = rational_kernel_integer_basis([[c] for c in x], 1)
        L = IntegerLattice(5, basis)
        assert L.rank == 4
        assert L == L.saturation()
        assert L.contains([1, 0, 0, 153, -58])

    def test_rational_kernel_is_saturated(self):
        rng = random.Random(17)
        for _ in range(50):
            rows = [
                [mpq(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(2)]
                for _ in range(3)
            ]
            basis = rational_kernel_integer_basis(rows, 2)
            L = IntegerLattice(3, basis)
            assert L == L.saturation()
            for v in basis:
                for j in range(2):
                    assert sum(v[i] * rows[i][j] for i in range(3)) == 0


class TestIntegerLattice:
    def test_contains(self):
        L = IntegerLattice(2, [[2, 0], [0, 3]])
        assert L.contains([4, 3])
        assert not L.contains([1, 0])
        assert L.contains([0, 0])

    def test_eq_canonical(self):
        a = IntegerLattice(2, [[2, 4], [0, 2]])
        b = IntegerLattice(2, [[2, 6], [4, 6]])
        assert (a == b) == (a.basis == b.basis)

    def test_intersect(self):
        a = IntegerLattice(2, [[2, 0], [0, 2]])
        b = IntegerLattice(2, [[3, 0], [0, 3]])
        assert a.intersect(b).basis == ((6, 0), (0, 6))

    def test_intersect_property(self):
        rng = random.Random(19)
        for _ in range(50):
            a = IntegerLattice(3, rand_rows(rng, 2, 3, 3))
            b = IntegerLattice(3, rand_rows(rng, 2, 3, 3))
            c = a.intersect(b)
            for v in c.basis:
                assert a.contains(v) and b.contains(v)
            # sum of lattices contains both
            s = a.sum_with(b)
            assert s.contains_lattice(a) and s.contains_lattice(b)

    def test_index_in(self):
        sub = IntegerLattice(2, [[2, 0], [0, 3]])
        assert sub.index_in(IntegerLattice.full(2)) == 6

    def test_full_rank_saturation(self):
        full = saturate([[1, 0], [0, 2]], 2)
        assert hnf(full, 2) == [[1, 0], [0, 1]]


small_rows = st.lists(
    st.lists(st.integers(-9, 9), min_size=4, max_size=4),
    min_size=1,
    max_size=4,
)


class TestLatticeHypothesis:
    @given(rows=small_rows, data=st.data())
    @settings(max_examples=200, deadline=None)
    def test_hnf_invariant_under_generator_rewrites(self, rows, data):
        h = hnf(rows, 4)
        rewritten = [list(r) for r in rows]
        perm = data.draw(st.permutations(range(len(rows))))
        rewritten = [rewritten[i] for i in perm]
        i = data.draw(st.integers(0, len(rows) - 1))
        j = data.draw(st.integers(0, len(rows) - 1))
        c = data.draw(st.integers(-3, 3))
        if i != j:
            rewritten[i] = [
                a + c * b for a, b in zip(rewritten[i], rewritten[j])
            ]
        assert hnf(rewritten, 4) == h

    @given(rows=small_rows)
    @settings(max_examples=200, deadline=None)
    def test_saturation_is_pure(self, rows):
        S = IntegerLattice(4, rows).saturation()
        assert S.saturation() == S
        # purity: a vector is in S as soon as a nonzero multiple is
        for v in S.basis:
            assert S.contains(v)
        assert S.contains_lattice(IntegerLattice(4, rows))
