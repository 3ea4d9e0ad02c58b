"""Exact scalar arithmetic.

Rationals are gmpy2 ``mpq`` values.  A number field is Q[x]/(f) for a monic
irreducible f, with elements stored as power-basis coordinate tuples.  Field
towers are flattened to a single primitive extension as soon as a root is
adjoined, so every element in the system lives over Q or over one absolute
extension of Q.

Polynomial factorization over Q is delegated to sympy; factorization over a
number field uses Trager's norm-based reduction to the rational case.
"""

from __future__ import annotations

import itertools

import sympy
from gmpy2 import mpq, mpz

from . import deadline
from .errors import FieldDegreeError, ZClosureError

_X = sympy.Symbol("x")
_Y = sympy.Symbol("y")

DEFAULT_MAX_FIELD_DEGREE = 64


def rat(a, b=1):
    """Build an exact rational from ints, an mpq, or a 'p/q' string."""
    if isinstance(a, str):
        return mpq(a)
    return mpq(a, b)


def rat_to_sympy(q):
    return sympy.Rational(int(q.numerator), int(q.denominator))


def sympy_to_rat(r):
    r = sympy.Rational(r)
    return mpq(int(r.p), int(r.q))


class RationalField:
    """The field Q, as a degree-1 'number field' adapter."""

    degree = 1
    is_rational_field = True

    def zero(self):
        return mpq(0)

    def one(self):
        return mpq(1)

    def coerce(self, x):
        if isinstance(x, (int, mpq, mpz)):
            return mpq(x)
        if isinstance(x, str):
            return mpq(x)
        if isinstance(x, FieldElement):
            q = x.as_rational()
            if q is None:
                raise ZClosureError("cannot coerce irrational element into Q")
            return q
        raise ZClosureError(f"cannot coerce {x!r} into Q")

    def key(self):
        return ("Q",)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("RationalField")


QQ = RationalField()


def _strip(coeffs, zero):
    n = len(coeffs)
    while n > 0 and coeffs[n - 1] == zero:
        n -= 1
    return tuple(coeffs[:n])


class Poly:
    """Dense univariate polynomial over Q or a number field.

    Coefficients are stored lowest degree first with no trailing zeros.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        z = field.zero()
        self.coeffs = _strip([field.coerce(c) for c in coeffs], z)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def lc(self):
        if not self.coeffs:
            return self.field.zero()
        return self.coeffs[-1]

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one()

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field.key(), self.coeffs))

    def __repr__(self):
        return f"Poly({list(self.coeffs)})"

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        z = self.field.zero()
        n = max(len(a), len(b))
        out = [
            (a[i] if i < len(a) else z) + (b[i] if i < len(b) else z)
            for i in range(n)
        ]
        return Poly(self.field, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Poly(self.field, [-c for c in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(self.field, [])
        z = self.field.zero()
        out = [z] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == z:
                continue
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
        return Poly(self.field, out)

    def scale(self, c):
        c = self.field.coerce(c)
        return Poly(self.field, [a * c for a in self.coeffs])

    def monic(self):
        if self.is_zero() or self.is_monic():
            return self
        inv = self.field.one() / self.lc()
        return self.scale(inv)

    def divmod(self, other):
        """Exact Euclidean division; other must be nonzero."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        z = self.field.zero()
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(self.field, []), self
        quo = [z] * (dq + 1)
        inv_lc = self.field.one() / other.lc()
        oc = other.coeffs
        for k in range(dq, -1, -1):
            c = rem[k + len(oc) - 1] * inv_lc
            quo[k] = c
            if c != z:
                for j, ocj in enumerate(oc):
                    rem[k + j] = rem[k + j] - c * ocj
        return Poly(self.field, quo), Poly(self.field, rem)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def derivative(self):
        return Poly(
            self.field,
            [c * i for i, c in enumerate(self.coeffs)][1:],
        )

    def gcd(self, other):
        """Monic gcd by the Euclidean algorithm."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other):
        """Return (g, s, t) with s*self + t*other = g, g monic."""
        f = self.field
        a, b = self, other
        sa, sb = Poly(f, [1]), Poly(f, [])
        ta, tb = Poly(f, []), Poly(f, [1])
        while not b.is_zero():
            q, r = a.divmod(b)
            a, b = b, r
            sa, sb = sb, sa - q * sb
            ta, tb = tb, ta - q * tb
        if a.is_zero():
            return a, sa, ta
        inv = f.one() / a.lc()
        return a.scale(inv), sa.scale(inv), ta.scale(inv)

    def squarefree_part(self):
        g = self.gcd(self.derivative())
        return (self // g).monic()

    def eval(self, x):
        """Horner evaluation at a scalar of the same field (or coercible)."""
        x = self.field.coerce(x)
        acc = self.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, other):
        """self(other(x)) by Horner over polynomials."""
        acc = Poly(self.field, [])
        for c in reversed(self.coeffs):
            acc = acc * other + Poly(self.field, [c])
        return acc

    def map_coeffs(self, fn, new_field):
        return Poly(new_field, [fn(c) for c in self.coeffs])

    def coerce_to(self, new_field):
        return self.map_coeffs(new_field.coerce, new_field)

    def to_sympy(self, var=_X):
        """Sympy Poly over QQ; only valid for rational coefficients."""
        assert self.field == QQ
        return sympy.Poly(
            [rat_to_sympy(c) for c in reversed(self.coeffs)], var, domain="QQ"
        )

    @staticmethod
    def from_sympy(p):
        coeffs = [sympy_to_rat(c) for c in p.all_coeffs()]
        return Poly(QQ, list(reversed(coeffs)))


def poly_from_ints(coeffs, field=QQ):
    return Poly(field, coeffs)


class NumberField:
    """Absolute number field Q[x]/(f) for a monic irreducible f over Q.

    ``root_index`` selects which complex root of f (in sympy's canonical
    CRootOf order) the generator denotes.  The embedding is only used for
    root ordering and for the rigorous interval data consumed by the
    relation engine; equality of elements is always coordinate equality.
    """

    is_rational_field = False

    def __init__(self, defining, root_index=0, check_irreducible=True):
        if not defining.is_monic() or defining.degree < 2:
            raise ZClosureError("defining polynomial must be monic of degree >= 2")
        self.defining = defining
        self.degree = defining.degree
        self.root_index = root_index
        if check_irreducible:
            facs = factor_over_Q(defining)
            if len(facs) != 1 or facs[0][1] != 1:
                raise ZClosureError("defining polynomial is not irreducible")
        d = self.degree
        # Reduction table: coordinates of x^(d+j) mod f for j = 0..d-2.
        rows = []
        cur = [-c for c in defining.coeffs[:-1]]  # x^d
        rows.append(tuple(cur))
        for _ in range(d - 2):
            shifted = [mpq(0)] + cur[: d - 1]
            top = cur[d - 1]
            cur = [s + top * r for s, r in zip(shifted, rows[0])]
            rows.append(tuple(cur))
        self._red = rows
        self._roots = None  # cached CRootOf list

    # -- field adapter protocol -------------------------------------------

    def zero(self):
        return FieldElement(self, (mpq(0),) * self.degree)

    def one(self):
        return FieldElement(self, (mpq(1),) + (mpq(0),) * (self.degree - 1))

    def gen(self):
        d = self.degree
        coords = [mpq(0)] * d
        coords[1] = mpq(1)
        return FieldElement(self, tuple(coords))

    def element(self, coords):
        coords = [mpq(c) if not isinstance(c, str) else mpq(c) for c in coords]
        if len(coords) > self.degree:
            raise ZClosureError("too many coordinates for field degree")
        coords = coords + [mpq(0)] * (self.degree - len(coords))
        return FieldElement(self, tuple(coords))

    def coerce(self, x):
        if isinstance(x, FieldElement):
            if x.field is self or x.field == self:
                return x
            q = x.as_rational()
            if q is not None:
                return self.element([q])
            raise ZClosureError("cannot coerce element from a different field")
        if isinstance(x, (int, mpq, mpz, str)):
            return self.element([mpq(x)])
        raise ZClosureError(f"cannot coerce {x!r} into number field")

    def key(self):
        return ("NF", self.defining.coeffs, self.root_index)

    def __eq__(self, other):
        return (
            isinstance(other, NumberField)
            and other.defining.coeffs == self.defining.coeffs
            and other.root_index == self.root_index
        )

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"NumberField(deg={self.degree})"

    # -- embeddings -------------------------------------------------------

    def sympy_roots(self):
        """All complex roots of the defining polynomial, canonical order."""
        if self._roots is None:
            p = self.defining.to_sympy()
            self._roots = [sympy.CRootOf(p, i, radicals=False) for i in range(self.degree)]
        return self._roots


class FieldElement:
    """Element of a NumberField in power-basis coordinates over Q."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        self.field = field
        self.coords = coords

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def as_rational(self):
        """The element as an mpq if it is rational, else None."""
        if all(c == 0 for c in self.coords[1:]):
            return self.coords[0]
        return None

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coords == other.coords
        if isinstance(other, (int, mpq, mpz)):
            q = self.as_rational()
            return q is not None and q == other
        return NotImplemented

    def __hash__(self):
        q = self.as_rational()
        if q is not None:
            return hash(q)
        return hash((self.field.key(), self.coords))

    def __repr__(self):
        return f"FieldElement({list(self.coords)})"

    def _co(self, other):
        return self.field.coerce(other)

    def __add__(self, other):
        other = self._co(other)
        return FieldElement(
            self.field, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = self._co(other)
        return FieldElement(
            self.field, tuple(a - b for a, b in zip(self.coords, other.coords))
        )

    def __rsub__(self, other):
        return self._co(other) - self

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, (int, mpq, mpz)):
            q = mpq(other)
            return FieldElement(self.field, tuple(a * q for a in self.coords))
        other = self._co(other)
        a, b = self.coords, other.coords
        d = self.field.degree
        prod = [mpq(0)] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
        out = prod[:d]
        red = self.field._red
        for j in range(d - 2, -1, -1):
            c = prod[d + j]
            if c != 0:
                row = red[j]
                for k in range(d):
                    out[k] += c * row[k]
        return FieldElement(self.field, tuple(out))

    __rmul__ = __mul__

    def inverse(self):
        f = self.field
        p = Poly(QQ, list(self.coords))
        if p.is_zero():
            raise ZeroDivisionError("field element division by zero")
        g, s, _ = p.xgcd(f.defining)
        if g.degree != 0:
            raise ZClosureError("defining polynomial not irreducible?")
        inv = s.scale(mpq(1) / g.coeffs[0])
        coords = list(inv.coeffs) + [mpq(0)] * (f.degree - len(inv.coeffs))
        return FieldElement(f, tuple(coords[: f.degree]))

    def __truediv__(self, other):
        if isinstance(other, (int, mpq, mpz)):
            q = mpq(1) / mpq(other)
            return self * q
        return self * self._co(other).inverse()

    def __rtruediv__(self, other):
        return self._co(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


# ---------------------------------------------------------------------------
# element utilities


def element_min_poly(a):
    """Monic minimal polynomial over Q of a field element (or an mpq)."""
    if isinstance(a, (int, mpq, mpz)):
        return Poly(QQ, [-mpq(a), mpq(1)])
    q = a.as_rational()
    if q is not None:
        return Poly(QQ, [-q, mpq(1)])
    d = a.field.degree
    # Rows: coordinates of 1, a, a^2, ...; stop at first linear dependence.
    pivots = {}  # column -> (row, combo) in reduced form
    power = a.field.one()
    combos = []
    rows = []
    k = 0
    while True:
        vec = list(power.coords)
        combo = [mpq(0)] * (d + 1)
        combo[k] = mpq(1)
        for col in sorted(pivots):
            if vec[col] != 0:
                prow, pcombo = pivots[col]
                c = vec[col]
                vec = [v - c * p for v, p in zip(vec, prow)]
                combo = [u - c * p for u, p in zip(combo, pcombo)]
        nz = next((i for i, v in enumerate(vec) if v != 0), None)
        if nz is None:
            return Poly(QQ, combo).monic()
        inv = mpq(1) / vec[nz]
        vec = [v * inv for v in vec]
        combo = [u * inv for u in combo]
        pivots[nz] = (vec, combo)
        rows.append(vec)
        combos.append(combo)
        power = power * a
        k += 1
        if k > d:
            raise ZClosureError("min poly search overran field degree")


def _euler_phi(k):
    return int(sympy.totient(k))


def cyclotomic(k):
    return Poly.from_sympy(sympy.Poly(sympy.cyclotomic_poly(k, _X), _X))


def is_root_of_unity(a):
    """The exact multiplicative order of a if it is a root of unity, else None."""
    if isinstance(a, (int, mpq, mpz)):
        q = mpq(a)
        if q == 1:
            return 1
        if q == -1:
            return 2
        return None
    if a.is_zero():
        raise ZClosureError("zero is not a unit")
    q = a.as_rational()
    if q is not None:
        return is_root_of_unity(q)
    mp = element_min_poly(a)
    d = mp.degree
    # phi(k) >= sqrt(k/2), so phi(k) = d forces k <= 2*d^2 + 1.
    for k in range(2, 2 * d * d + 2):
        if _euler_phi(k) == d and mp == cyclotomic(k):
            assert a**k == a.field.one()
            return k
    return None


def root_of_unity_order_bound(degree):
    """Largest k such that a primitive k-th root of unity can live in a
    field of the given degree (phi(k) divides degree)."""
    best = 1
    for k in range(1, 2 * degree * degree + 2):
        if degree % _euler_phi(k) == 0:
            best = max(best, k)
    return best


# ---------------------------------------------------------------------------
# factorization


def factor_over_Q(f):
    """Monic irreducible factorization over Q as [(Poly, multiplicity)]."""
    if f.is_zero():
        raise ZClosureError("cannot factor the zero polynomial")
    if f.field != QQ:
        raise ZClosureError("factor_over_Q needs rational coefficients")
    if f.degree == 0:
        return []
    _, facs = f.to_sympy().factor_list()
    out = []
    for p, m in facs:
        out.append((Poly.from_sympy(sympy.Poly(p, _X)).monic(), int(m)))
    out.sort(key=lambda t: (t[0].degree, t[0].coeffs))
    return out


def _bivariate_sympy(f):
    """f over K as a sympy expression in (x, y), generator -> y."""
    terms = []
    for i, c in enumerate(f.coeffs):
        if isinstance(c, FieldElement):
            cexpr = sum(
                rat_to_sympy(cc) * _Y**j for j, cc in enumerate(c.coords)
            )
        else:
            cexpr = rat_to_sympy(c)
        terms.append(cexpr * _X**i)
    return sympy.expand(sum(terms))


def _norm_poly(f, K, shift):
    """Res_y(m(y), F(x - shift*y, y)) as a Poly over Q.

    F is f with the field generator replaced by y.  This is the field norm
    of f(x - shift*theta), the workhorse of Trager's algorithm.
    """
    m_expr = K.defining.to_sympy().as_expr().subs(_X, _Y)
    F = _bivariate_sympy(f)
    if shift:
        F = sympy.expand(F.subs(_X, _X - shift * _Y))
    res = sympy.resultant(m_expr, F, _Y)
    return Poly.from_sympy(sympy.Poly(res, _X, domain="QQ"))


def _shift_candidates():
    yield 0
    for k in itertools.count(1):
        yield k
        yield -k


def _squarefree_over_Q(f):
    return f.gcd(f.derivative()).degree == 0


def factor_over_field(f, K):
    """Monic irreducible factorization over the number field K (Trager)."""
    if f.is_zero():
        raise ZClosureError("cannot factor the zero polynomial")
    f = f.coerce_to(K).monic()
    if f.degree == 0:
        return []
    # Squarefree reduction first.
    sqf = f.squarefree_part()
    parts = _factor_squarefree_over_field(sqf, K)
    out = []
    rem = f
    for p in parts:
        mult = 0
        while True:
            q, r = rem.divmod(p)
            if not r.is_zero():
                break
            rem = q
            mult += 1
        out.append((p, mult))
    assert rem.degree == 0
    out.sort(key=lambda t: (t[0].degree, tuple(map(str, t[0].coeffs))))
    return out


def _factor_squarefree_over_field(f, K):
    if f.degree <= 1:
        return [f] if f.degree == 1 else []
    parts = _sympy_factor_squarefree(f, K)
    if parts is not None:
        return parts
    return _trager_factor_squarefree(f, K)


def _sympy_algebraic_field(K):
    """sympy QQ(theta) domain whose power basis matches K's, or None."""
    cached = getattr(K, "_sympy_domain", False)
    if cached is not False:
        return cached
    theta = K.sympy_roots()[K.root_index]
    A = sympy.QQ.algebraic_field(theta)
    mod_asc = [
        mpq(int(c.numerator), int(c.denominator))
        for c in reversed(A.mod.to_list())
    ]
    if tuple(mod_asc) != K.defining.coeffs:
        A = None  # internal basis differs; coordinates would not line up
    K._sympy_domain = A
    return A


def _sympy_factor_squarefree(f, K):
    from sympy.polys.polyclasses import ANP

    A = _sympy_algebraic_field(K)
    if A is None:
        return None
    mod = A.mod.to_list()
    dom = A.dom

    def to_anp(c):
        coords = K.coerce(c).coords
        desc = [dom(int(q.numerator), int(q.denominator)) for q in reversed(coords)]
        return ANP(desc, mod, dom)

    P = sympy.Poly.from_list([to_anp(c) for c in reversed(f.coeffs)], _X, domain=A)
    _, facs = P.factor_list()
    out = []
    for g, mult in facs:
        assert mult == 1
        coeffs = []
        for anp in reversed(g.rep.to_list()):
            desc = anp.to_list()
            asc = [
                mpq(int(q.numerator), int(q.denominator)) for q in reversed(desc)
            ]
            coeffs.append(K.element(asc))
        out.append(Poly(K, coeffs).monic())
    assert sum(g.degree for g in out) == f.degree
    return out


def _trager_factor_squarefree(f, K):
    for s in _shift_candidates():
        N = _norm_poly(f, K, s)
        if _squarefree_over_Q(N):
            break
    gen = K.gen()
    factors = []
    nfacs = factor_over_Q(N)
    if len(nfacs) == 1:
        return [f]
    for H, _ in nfacs:
        HK = H.coerce_to(K)
        if s:
            # H(x + s*theta)
            shift_poly = Poly(K, [gen * s, K.one()])
            HK = HK.compose(shift_poly)
        g = f.gcd(HK)
        if g.degree >= 1:
            factors.append(g.monic())
    assert sum(g.degree for g in factors) == f.degree
    return factors


# ---------------------------------------------------------------------------
# building extensions


def _nearest_root_index(field_poly, target, prec=120):
    """Index of the CRootOf of field_poly closest to the mpmath complex target."""
    import mpmath

    p = field_poly.to_sympy()
    best = None
    with mpmath.workprec(prec):
        for i in range(field_poly.degree):
            r = sympy.CRootOf(p, i, radicals=False)
            val = mpmath.mpc(
                sympy.re(r.evalf(prec // 3)), sympy.im(r.evalf(prec // 3))
            )
            dist = abs(val - target)
            if best is None or dist < best[0]:
                best = (dist, i)
    return best[1]


def _approx_generator(K, prec=120):
    import mpmath

    if K == QQ:
        return mpmath.mpc(0)
    r = K.sympy_roots()[K.root_index]
    v = r.evalf(prec // 3)
    return mpmath.mpc(sympy.re(v), sympy.im(v))


def adjoin_root(K, g, max_degree=DEFAULT_MAX_FIELD_DEGREE):
    """Adjoin a root of the irreducible g over K; flatten to a primitive field.

    Returns (L, embed, beta) where embed maps K-elements into L and beta is a
    root of g in L.  For K = Q this is a plain extension; otherwise a
    primitive element gamma = beta + s*theta is found via a squarefree norm.
    """
    import mpmath

    new_deg = (1 if K == QQ else K.degree) * g.degree
    if new_deg > max_degree:
        raise FieldDegreeError(
            f"field degree {new_deg} exceeds the cap {max_degree}"
        )
    if K == QQ:
        if g.degree == 1:
            raise ZClosureError("adjoining a root of a linear polynomial")
        L = NumberField(g.monic(), root_index=0, check_irreducible=False)
        return L, lambda q: L.coerce(q), L.gen()

    for s in _shift_candidates():
        if s == 0 and not all(
            c.as_rational() is not None for c in g.coerce_to(K).coeffs
        ):
            # s = 0 only makes sense when N could be squarefree; try anyway.
            pass
        N = _norm_poly(g, K, s)
        if _squarefree_over_Q(N):
            break
    # g irreducible over K and N squarefree => N irreducible over Q.
    L = NumberField(N.monic(), root_index=0, check_irreducible=False)
    gamma = L.gen()
    # theta in L: unique common root of m(y) and G(gamma - s*y, y).
    m_L = K.defining.coerce_to(L)
    # Build G(gamma - s*y, y) in L[y]: for each coefficient c(theta) of g,
    # theta becomes y, and x becomes gamma - s*y.
    x_poly = Poly(L, [gamma, L.coerce(-s)])  # gamma - s*y
    acc = Poly(L, [])
    for c in reversed(g.coerce_to(K).coeffs):
        c_poly = Poly(L, [L.coerce(q) for q in c.coords])  # c as poly in y
        acc = acc * x_poly + c_poly
    d = m_L.gcd(acc)
    if d.degree != 1:
        raise ZClosureError("primitive element gcd was not linear")
    theta_L = (-d.coeffs[0]) / d.coeffs[1]

    def embed(elt, _theta=theta_L, _L=L):
        if isinstance(elt, (int, mpq, mpz)):
            return _L.coerce(elt)
        acc = _L.zero()
        for c in reversed(elt.coords):
            acc = acc * _theta + _L.coerce(c)
        return acc

    beta_L = gamma - embed(K.gen()) * s

    # Choose the embedding of L extending K's: gamma ~ beta_num + s*theta_num.
    theta_num = _approx_generator(K)
    with mpmath.workprec(200):
        coeff_vals = []
        for c in g.coerce_to(K).coeffs:
            num_coeffs = [
                mpmath.mpf(int(q.numerator)) / mpmath.mpf(int(q.denominator))
                for q in reversed(c.coords)
            ]
            coeff_vals.append(mpmath.polyval(num_coeffs, theta_num))
        roots = mpmath.polyroots(
            list(reversed(coeff_vals)), maxsteps=200, extraprec=200
        )
        beta_num = sorted(
            roots, key=lambda z: (float(z.real), float(z.imag))
        )[0]
        gamma_num = beta_num + s * theta_num
    idx = _nearest_root_index(N, gamma_num)
    if idx != 0:
        L2 = NumberField(N.monic(), root_index=idx, check_irreducible=False)
        theta_L2 = FieldElement(L2, theta_L.coords)

        def embed2(elt, _theta=theta_L2, _L=L2):
            if isinstance(elt, (int, mpq, mpz)):
                return _L.coerce(elt)
            acc = _L.zero()
            for c in reversed(elt.coords):
                acc = acc * _theta + _L.coerce(c)
            return acc

        return L2, embed2, FieldElement(L2, beta_L.coords)
    return L, embed, beta_L


class FieldCache:
    """Remembers constructed splitting fields so later polynomials can be
    split in an existing field instead of triggering a fresh tower."""

    def __init__(self):
        self.fields = []
        self._splits = {}

    def remember(self, K):
        if K != QQ and all(K != F for F in self.fields):
            self.fields.append(K)
            self.fields.sort(key=lambda F: F.degree)


def splitting_field(f, max_degree=DEFAULT_MAX_FIELD_DEGREE, cache=None):
    """Smallest-constructed field containing all roots of the rational f.

    Returns (K, roots) where roots is a list of (root, multiplicity) with
    multiplicities summing to deg f, in a deterministic order.
    """
    if f.is_zero():
        raise ZClosureError("cannot take the splitting field of zero")
    if f.field != QQ:
        raise ZClosureError("splitting_field expects rational coefficients")
    f = f.monic()
    key = f.coeffs
    if cache is not None and key in cache._splits:
        return cache._splits[key]

    result = None
    # Fast path: an already-built field may split f completely.
    if cache is not None:
        for K in cache.fields:
            facs = factor_over_field(f, K)
            if all(p.degree == 1 for p, _ in facs):
                roots = _roots_from_linear_factors(facs, K)
                result = (K, roots)
                break

    if result is None:
        K = QQ
        while True:
            deadline.checkpoint()
            if K == QQ:
                facs = [(p, m) for p, m in factor_over_Q(f)]
            else:
                facs = factor_over_field(f, K)
            nonlinear = [p for p, _ in facs if p.degree >= 2]
            if not nonlinear:
                break
            g = min(
                nonlinear, key=lambda p: (p.degree, tuple(map(str, p.coeffs)))
            )
            if K == QQ:
                K, _, _ = adjoin_root(QQ, g, max_degree)
            else:
                K, _, _ = adjoin_root(K, g, max_degree)
        if K == QQ:
            roots = [
                (-p.coeffs[0], m) for p, m in facs
            ]
            roots.sort(key=lambda t: t[0])
        else:
            roots = _roots_from_linear_factors(facs, K)
        result = (K, roots)

    if cache is not None:
        cache.remember(result[0])
        cache._splits[key] = result
    return result


def _roots_from_linear_factors(facs, K):
    from .intervals import order_elements

    roots = []
    for p, m in facs:
        assert p.degree == 1
        roots.append(((-p.coeffs[0]) / p.coeffs[1], m))
    order = order_elements([r for r, _ in roots])
    return [roots[i] for i in order]
