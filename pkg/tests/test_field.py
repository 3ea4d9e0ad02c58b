import pytest
from gmpy2 import mpq

from zclosure.errors import FieldDegreeError, ZClosureError
from zclosure.field import (
    QQ,
    FieldCache,
    NumberField,
    Poly,
    adjoin_root,
    cyclotomic,
    element_min_poly,
    factor_over_Q,
    factor_over_field,
    is_root_of_unity,
    rat,
    root_of_unity_order_bound,
    splitting_field,
)


def P(*coeffs):
    return Poly(QQ, [mpq(c) for c in coeffs])


class TestPoly:
    def test_divmod_exact(self):
        f = P(-1, 0, 1)  # x^2 - 1
        g = P(1, 1)  # x + 1
        q, r = f.divmod(g)
        assert r.is_zero()
        assert q.coeffs == P(-1, 1).coeffs

    def test_gcd(self):
        f = P(-1, 0, 1)
        g = P(1, 2, 1)
        assert f.gcd(g).coeffs == P(1, 1).coeffs

    def test_xgcd_bezout(self):
        f = P(-2, 0, 1)
        g = P(1, 1)
        d, a, b = f.xgcd(g)
        assert (a * f + b * g).coeffs == d.coeffs

    def test_squarefree_part(self):
        f = P(1, 2, 1) * P(-3, 1)
        sf = f.squarefree_part()
        assert sf.monic().coeffs == (P(1, 1) * P(-3, 1)).monic().coeffs

    def test_eval(self):
        assert P(1, 2, 3).eval(mpq(2)) == 1 + 4 + 12


class TestFactorQ:
    def test_irreducible(self):
        # x^4 + 1 is irreducible over Q
        facs = factor_over_Q(P(1, 0, 0, 0, 1))
        assert len(facs) == 1 and facs[0][1] == 1

    def test_splits(self):
        facs = factor_over_Q(P(-1, 0, 1))
        assert len(facs) == 2
        assert all(f.degree == 1 for f, _ in facs)

    def test_multiplicity(self):
        facs = factor_over_Q(P(1, 2, 1))
        assert facs[0][1] == 2


class TestNumberField:
    def test_sqrt2_arithmetic(self):
        K, _, r = adjoin_root(QQ, P(-2, 0, 1))
        assert K.degree == 2
        assert r * r == K.coerce(2)
        assert (K.one() / r) * r == K.one()

    def test_element_inverse_random(self):
        K = NumberField(P(-2, 0, 0, 1))  # Q(cbrt 2)
        a = K.element([mpq(1), mpq(2), mpq(-1, 3)])
        assert a * a.inverse() == K.one()

    def test_min_poly_of_generator(self):
        K = NumberField(P(-2, 0, 1))
        mp = element_min_poly(K.gen())
        assert mp.coeffs == P(-2, 0, 1).coeffs

    def test_min_poly_of_rational_element(self):
        K = NumberField(P(-2, 0, 1))
        mp = element_min_poly(K.coerce(mpq(3, 2)))
        assert mp.degree == 1

    def test_as_rational(self):
        K = NumberField(P(-2, 0, 1))
        assert K.coerce(5).as_rational() == 5
        assert K.gen().as_rational() is None

    def test_tower_flattening(self):
        # Q -> Q(sqrt2) -> add i: flattened degree 4 with both roots present
        K, _, s2 = adjoin_root(QQ, P(-2, 0, 1))
        L, embed, i = adjoin_root(K, Poly(K, [K.one(), K.zero(), K.one()]))
        assert L.degree == 4
        assert i * i == -L.one()
        s2L = embed(s2)
        assert s2L * s2L == L.coerce(2)

    def test_degree_cap(self):
        with pytest.raises(FieldDegreeError):
            adjoin_root(QQ, P(-2, 0, 0, 1), max_degree=2)


class TestFactorOverField:
    def test_x2_plus_1_over_sqrt2(self):
        K = NumberField(P(-2, 0, 1))
        f = Poly(K, [K.one(), K.zero(), K.one()])
        facs = factor_over_field(f, K)
        assert len(facs) == 1

    def test_x2_minus_2_over_sqrt2(self):
        K = NumberField(P(-2, 0, 1))
        f = Poly(K, [K.coerce(-2), K.zero(), K.one()])
        facs = factor_over_field(f, K)
        assert len(facs) == 2
        assert all(g.degree == 1 for g, _ in facs)
        # roots are +-sqrt2
        for g, _ in facs:
            r = -(g.coeffs[0] / g.coeffs[1])
            assert r * r == K.coerce(2)


class TestSplittingField:
    def test_cubic(self):
        K, roots = splitting_field(P(-2, 0, 0, 1), max_degree=64, cache=FieldCache())
        assert K.degree == 6
        assert len(roots) == 3
        for r, mult in roots:
            assert mult == 1
            assert r * r * r == K.coerce(2)

    def test_rational_split(self):
        K, roots = splitting_field(P(-1, 0, 1), max_degree=64, cache=FieldCache())
        assert K.is_rational_field
        assert sorted(mpq(r) for r, _ in roots) == [-1, 1]

    def test_cache_reuse(self):
        cache = FieldCache()
        K1, _ = splitting_field(P(-2, 0, 1), max_degree=64, cache=cache)
        K2, _ = splitting_field(P(-8, 0, 1), max_degree=64, cache=cache)
        # sqrt8 = 2 sqrt2 lives in the cached field
        assert K2 is K1


class TestRootsOfUnity:
    def test_cyclotomic_poly(self):
        assert cyclotomic(4).coeffs == P(1, 0, 1).coeffs
        assert cyclotomic(1).coeffs == P(-1, 1).coeffs
        assert cyclotomic(6).coeffs == P(1, -1, 1).coeffs

    def test_is_root_of_unity(self):
        K = NumberField(P(1, 0, 1))  # Q(i)
        assert is_root_of_unity(K.gen()) == 4
        assert is_root_of_unity(-K.one()) == 2
        assert is_root_of_unity(K.one()) == 1
        assert is_root_of_unity(K.coerce(2)) is None

    def test_order_bound_monotone(self):
        assert root_of_unity_order_bound(1) == 2
        assert root_of_unity_order_bound(2) >= 6
        assert root_of_unity_order_bound(4) >= 12
