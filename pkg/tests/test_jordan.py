import random

from gmpy2 import mpq

import pytest

from zclosure.errors import NotUnipotentError, SingularMatrixError
from zclosure.field import QQ
from zclosure.jordan import (
    exp_nilpotent,
    is_semisimple,
    is_unipotent,
    jordan_additive,
    jordan_multiplicative,
    log_unipotent,
)
from zclosure.linalg import MatrixF, min_poly


def rand_matrix(rng, n, bound=5):
    return MatrixF(
        QQ, [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
    )


def rand_invertible(rng, n, bound=5):
    while True:
        m = rand_matrix(rng, n, bound)
        if m.det() != 0:
            return m


class TestAdditive:
    def test_diagonal_is_its_own_semisimple_part(self):
        d = MatrixF(QQ, [[2, 0], [0, 5]])
        s, nilp = jordan_additive(d)
        assert s == d and nilp.is_zero()

    def test_nilpotent_input(self):
        x = MatrixF(QQ, [[0, 1], [0, 0]])
        s, nilp = jordan_additive(x)
        assert s.is_zero() and nilp == x

    def test_shear_block(self):
        m = MatrixF(QQ, [[2, 1], [0, 2]])
        s, nilp = jordan_additive(m)
        assert s == MatrixF(QQ, [[2, 0], [0, 2]])
        assert nilp == MatrixF(QQ, [[0, 1], [0, 0]])


class TestMultiplicative:
    def test_identity(self):
        jp = jordan_multiplicative(MatrixF.identity(QQ, 3))
        assert jp.s == MatrixF.identity(QQ, 3)
        assert jp.u == MatrixF.identity(QQ, 3)

    def test_shear_block(self):
        jp = jordan_multiplicative(MatrixF(QQ, [[2, 1], [0, 2]]))
        assert jp.s == MatrixF(QQ, [[2, 0], [0, 2]])
        assert jp.u == MatrixF(QQ, [[1, mpq(1, 2)], [0, 1]])

    def test_already_semisimple(self):
        d = MatrixF(QQ, [[2, 0], [0, 3]])
        jp = jordan_multiplicative(d)
        assert jp.s == d and jp.u == MatrixF.identity(QQ, 2)

    def test_singular_rejected(self):
        with pytest.raises(SingularMatrixError):
            jordan_multiplicative(MatrixF(QQ, [[1, 1], [1, 1]]))

    def test_postconditions_and_uniqueness_random(self):
        # decomposition postconditions are a complete characterization, so
        # checking them exactly doubles as a uniqueness oracle
        rng = random.Random(29)
        for _ in range(500):
            n = rng.randint(2, 5)
            g = rand_invertible(rng, n)
            jp = jordan_multiplicative(g)
            assert jp.s * jp.u == g
            assert jp.s * jp.u == jp.u * jp.s
            assert is_semisimple(jp.s)
            assert is_unipotent(jp.u)
            # re-decomposing the parts is a fixed point
            jp2 = jordan_multiplicative(jp.s)
            assert jp2.s == jp.s and jp2.u == MatrixF.identity(QQ, n)
            jp3 = jordan_multiplicative(jp.u)
            assert jp3.s == MatrixF.identity(QQ, n) and jp3.u == jp.u

    def test_semisimple_part_squarefree_min_poly(self):
        rng = random.Random(31)
        for _ in range(50):
            g = rand_invertible(rng, 4, 3)
            s = jordan_multiplicative(g).s
            mp = min_poly(s)
            assert mp.gcd(mp.derivative()).degree == 0


class TestLogExp:
    def test_log_identity(self):
        assert log_unipotent(MatrixF.identity(QQ, 2)).is_zero()

    def test_log_elementary(self):
        u = MatrixF(QQ, [[1, 1], [0, 1]])
        assert log_unipotent(u) == MatrixF(QQ, [[0, 1], [0, 0]])

    def test_log_3x3_chain(self):
        u = MatrixF(QQ, [[1, 1, 0], [0, 1, 1], [0, 0, 1]])
        x = log_unipotent(u)
        assert x == MatrixF(
            QQ, [[0, 1, mpq(-1, 2)], [0, 0, 1], [0, 0, 0]]
        )

    def test_not_unipotent_rejected(self):
        with pytest.raises(NotUnipotentError):
            log_unipotent(MatrixF(QQ, [[2, 0], [0, 1]]))

    def test_round_trip_random(self):
        rng = random.Random(37)
        for _ in range(100):
            n = rng.randint(2, 4)
            # random strictly upper triangular nilpotent
            x = MatrixF(
                QQ,
                [
                    [
                        rng.randint(-3, 3) if j > i else 0
                        for j in range(n)
                    ]
                    for i in range(n)
                ],
            )
            u = exp_nilpotent(x)
            assert is_unipotent(u)
            assert log_unipotent(u) == x
            assert exp_nilpotent(log_unipotent(u)) == u
