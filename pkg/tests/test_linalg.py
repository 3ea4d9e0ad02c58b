import random

from gmpy2 import mpq

import pytest

from zclosure.errors import NotDefinedOverQError, SingularMatrixError
from zclosure.field import QQ, NumberField, Poly
from zclosure.linalg import (
    MatrixF,
    Subspace,
    char_poly,
    eval_poly_at_matrix,
    kernel,
    min_poly,
    rational_form,
    rref,
    solve_right,
)


def rand_matrix(rng, n, bound=5):
    return MatrixF(
        QQ, [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
    )


class TestMatrix:
    def test_mul_identity(self):
        m = MatrixF(QQ, [[1, 2], [3, 4]])
        assert m * MatrixF.identity(QQ, 2) == m

    def test_inverse(self):
        m = MatrixF(QQ, [[2, 1], [1, 1]])
        assert m * m.inverse() == MatrixF.identity(QQ, 2)

    def test_inverse_singular(self):
        with pytest.raises(SingularMatrixError):
            MatrixF(QQ, [[1, 2], [2, 4]]).inverse()

    def test_det_matches_cofactor_oracle(self):
        rng = random.Random(7)
        for _ in range(30):
            m = rand_matrix(rng, 3)
            a = m.entries
            oracle = (
                a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
            )
            assert m.det() == oracle

    def test_pow_negative(self):
        m = MatrixF(QQ, [[2, 0], [0, 3]])
        assert m**-2 == MatrixF(QQ, [[mpq(1, 4), 0], [0, mpq(1, 9)]])

    def test_flatten_unflatten(self):
        m = MatrixF(QQ, [[1, 2], [3, 4]])
        assert MatrixF.unflatten(QQ, m.flatten(), 2) == m


class TestRrefKernel:
    def test_rref_canonical_under_row_ops(self):
        rng = random.Random(11)
        for _ in range(20):
            m = rand_matrix(rng, 4)
            rows = [list(r) for r in m.entries]
            rng.shuffle(rows)
            r1, k1, _ = rref(m)
            r2, k2, _ = rref(MatrixF(QQ, rows))
            assert k1 == k2
            assert r1.entries[:k1] == r2.entries[:k2]

    def test_kernel_annihilates(self):
        rng = random.Random(13)
        for _ in range(20):
            m = MatrixF(
                QQ,
                [[rng.randint(-3, 3) for _ in range(5)] for _ in range(3)],
            )
            ker = kernel(m)
            for v in ker.basis:
                img = [
                    sum(m.entries[i][j] * v[j] for j in range(5))
                    for i in range(3)
                ]
                assert all(x == 0 for x in img)
            _, rank, _ = rref(m)
            assert ker.dim == 5 - rank

    def test_solve_right(self):
        m = MatrixF(QQ, [[1, 2], [3, 4]])
        x = solve_right(m, [5, 6])
        assert [sum(m.entries[i][j] * x[j] for j in range(2)) for i in range(2)] == [5, 6]
        assert solve_right(MatrixF(QQ, [[1, 1], [1, 1]]), [0, 1]) is None


class TestCharMinPoly:
    def test_cayley_hamilton(self):
        rng = random.Random(17)
        for _ in range(25):
            m = rand_matrix(rng, 4, 3)
            assert eval_poly_at_matrix(char_poly(m), m).is_zero()

    def test_char_poly_trace_det(self):
        rng = random.Random(19)
        for _ in range(25):
            m = rand_matrix(rng, 3)
            cp = char_poly(m)
            assert cp.degree == 3
            assert cp.coeffs[3] == 1
            assert cp.coeffs[2] == -m.trace()
            assert cp.coeffs[0] == -m.det()

    def test_min_poly_divides_char_poly(self):
        rng = random.Random(23)
        for _ in range(25):
            m = rand_matrix(rng, 4, 2)
            mp = min_poly(m)
            cp = char_poly(m)
            _, r = cp.divmod(mp)
            assert r.is_zero()
            assert eval_poly_at_matrix(mp, m).is_zero()

    def test_min_poly_diagonal_repeats(self):
        d = MatrixF(QQ, [[2, 0, 0], [0, 2, 0], [0, 0, 5]])
        mp = min_poly(d)
        assert mp.degree == 2


class TestSubspace:
    def test_canonical_basis(self):
        s1 = Subspace.from_vectors(QQ, 3, [[1, 1, 0], [0, 1, 1]])
        s2 = Subspace.from_vectors(QQ, 3, [[1, 2, 1], [2, 3, 1]])
        assert s1 == s2

    def test_contains_and_coords(self):
        s = Subspace.from_vectors(QQ, 3, [[1, 0, 1], [0, 1, 1]])
        assert s.contains([2, 3, 5])
        assert not s.contains([1, 0, 0])
        c = s.coords_of([2, 3, 5])
        assert c == [mpq(2), mpq(3)]

    def test_sum(self):
        a = Subspace.from_vectors(QQ, 3, [[1, 0, 0]])
        b = Subspace.from_vectors(QQ, 3, [[0, 1, 0]])
        assert a.sum_with(b).dim == 2


class TestRationalForm:
    def test_identity_on_rational_subspace(self):
        K = NumberField(Poly(QQ, [mpq(1), mpq(0), mpq(1)]))
        V = Subspace.from_vectors(K, 2, [[K.one(), K.coerce(2)]])
        W = rational_form(V, K)
        assert W.dim == 1
        assert W.basis[0] == (mpq(1), mpq(2))

    def test_rejects_non_rational_line(self):
        K = NumberField(Poly(QQ, [mpq(1), mpq(0), mpq(1)]))
        V = Subspace.from_vectors(K, 2, [[K.one(), K.gen()]])
        with pytest.raises(NotDefinedOverQError):
            rational_form(V, K)

    def test_galois_stable_plane(self):
        # span{(1, i), (1, -i)} = all of K^2 restricted... the pair spans a
        # 2-dim K-space whose rational points are all of Q^2
        K = NumberField(Poly(QQ, [mpq(1), mpq(0), mpq(1)]))
        i = K.gen()
        V = Subspace.from_vectors(K, 2, [[K.one(), i], [K.one(), -i]])
        W = rational_form(V, K)
        assert W.dim == 2
