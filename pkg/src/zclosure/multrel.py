"""Multiplicative relation lattices of nonzero algebraic numbers.

Two layers, both sound; the certified flag records completeness.

Layer 1 applies when every input has some power that is rational (covers
rationals, roots of unity and rational multiples of them, surds): relations
descend to prime factorizations plus a finite torsion congruence, all exact.

Layer 2 handles arbitrary inputs: Masser's bound limits the size of a basis
of the relation lattice, LLL reduction on rigorously rounded logarithms of
one complex embedding finds all vectors below that bound, and every candidate
is verified by exact evaluation. When the Gram-Schmidt criterion shows the
search was exhaustive and all candidates verify, the result is certified
complete; otherwise a verified sublattice is returned uncertified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import sympy
from gmpy2 import mpq
from sympy.polys.matrices import DomainMatrix

from . import deadline
from .errors import InvariantViolationError, ZClosureError
from .field import QQ, element_min_poly, root_of_unity_order_bound
from .intervals import arg_box, elem_box, iv_prec, log_abs, root_box
from .lattice import IntegerLattice, hnf, integer_kernel

iv = mpmath.iv

DEFAULT_PRECISION_CAP = 1 << 16

# largest exponent entry we are willing to check by exact powering
VERIFY_EXPONENT_CAP = 1 << 12


@dataclass(frozen=True)
class RelationLattice:
    """Verified multiplicative relations among fixed algebraic numbers."""

    alphas: tuple
    lattice: "IntegerLattice"
    certified: bool

    def __post_init__(self):
        for e in self.lattice.basis:
            if not _verify_relation(self.alphas, e):
                raise InvariantViolationError(
                    "relation lattice basis vector fails exact evaluation"
                )


def _power(a, e):
    if isinstance(a, mpq) or not hasattr(a, "field"):
        a = mpq(a)
        return a**e if e >= 0 else (1 / a) ** (-e)
    if e >= 0:
        return a**e
    return a.inverse() ** (-e)


def _one_like(a):
    if hasattr(a, "field"):
        return a.field.one()
    return mpq(1)


def _verify_relation(alphas, e):
    if not alphas:
        return True
    prod = _one_like(alphas[0])
    for a, exp in zip(alphas, e):
        deadline.checkpoint()
        if exp:
            prod = prod * _power(a, int(exp))
    return prod == _one_like(alphas[0])


def _pullback(map_rows, target):
    """{e in Z^n : e mapped by the rows lands in the target lattice}.

    map_rows: n rows of length r (the linear map Z^n -> Z^r, row convention);
    target: IntegerLattice in Z^r. Returns an HNF basis list.
    """
    n = len(map_rows)
    r = target.ncols
    if n == 0:
        return []
    stacked = [list(row) for row in map_rows]
    for b in target.basis:
        stacked.append([-x for x in b])
    ker = integer_kernel(stacked, r)
    return hnf([v[:n] for v in ker], n)


def _rational_relations(rats):
    """Relation lattice of nonzero rationals: prime valuations plus sign."""
    rats = [mpq(r) for r in rats]
    n = len(rats)
    primes = set()
    facs = []
    signs = []
    for r in rats:
        if r == 0:
            raise ZClosureError("zero has no multiplicative relations")
        signs.append(1 if r < 0 else 0)
        f = dict(sympy.factorint(int(r.numerator)))
        for p, v in sympy.factorint(int(r.denominator)).items():
            f[p] = f.get(p, 0) - v
        f.pop(-1, None)
        f.pop(1, None)
        facs.append(f)
        primes.update(f)
    primes = sorted(primes)
    rows = [[f.get(p, 0) for p in primes] for f in facs]
    if primes:
        val_kernel = integer_kernel(rows, len(primes))
    else:
        val_kernel = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    if not val_kernel:
        return IntegerLattice.zero(n)
    # Sign congruence: sum e_i sign_i must be even on the valuation kernel.
    ts = [sum(b * s for b, s in zip(vec, signs)) for vec in val_kernel]
    coeff_basis = _pullback([[t] for t in ts], IntegerLattice(1, [[2]]))
    out = []
    for c in coeff_basis:
        v = [0] * n
        for coef, vec in zip(c, val_kernel):
            v = [a + coef * b for a, b in zip(v, vec)]
        out.append(v)
    return IntegerLattice(n, out)


def _rational_power(a, max_exp):
    """Smallest m with a^m rational, or None; returns (m, a^m)."""
    q = a.as_rational() if hasattr(a, "as_rational") else mpq(a)
    if q is not None:
        return 1, mpq(q)
    p = a
    for m in range(2, max_exp + 1):
        p = p * a
        q = p.as_rational()
        if q is not None:
            return m, mpq(q)
    return None


def _torsion_subgroup(elems, deg):
    """Cyclic subgroup generated by roots of unity in a degree-deg field;
    returns (order, zeta, discrete logs of the given elements)."""
    one = _one_like(elems[0])
    cap = 2 * root_of_unity_order_bound(deg) + 2
    orders = []
    for z in elems:
        o = _elem_order(z, cap)
        if o is None:
            raise InvariantViolationError(
                "element is not torsion within the field's order bound"
            )
        orders.append(o)
    order = 1
    for o in orders:
        order = order * o // math.gcd(order, o)
    # Assemble a generator from prime-power parts of the component orders.
    zeta = one
    for p, k in sympy.factorint(order).items():
        pk = p**k
        for z, o in zip(elems, orders):
            if o % pk == 0:
                zeta = zeta * _power(z, o // pk)
                break
    if _elem_order(zeta, order) != order:
        raise InvariantViolationError("torsion subgroup of a field not cyclic")
    logs = []
    for z in elems:
        t = 0
        cur = one
        while cur != z:
            cur = cur * zeta
            t += 1
            if t > order:
                raise InvariantViolationError("discrete log not found")
        logs.append(t)
    return order, zeta, logs


def _key(a):
    return tuple(a.coords) if hasattr(a, "coords") else str(mpq(a))


def _elem_order(g, cap):
    one = _one_like(g)
    cur = g
    for k in range(1, cap + 1):
        if cur == one:
            return k
        cur = cur * g
    return None


def _layer1(alphas):
    """Certified relations when every alpha has a rational power.

    Returns None when some alpha does not (within the torsion order bound).
    """
    deg = 1
    for a in alphas:
        if hasattr(a, "field") and not a.field.is_rational_field:
            deg = max(deg, a.field.degree)
    max_exp = 2 * root_of_unity_order_bound(deg)
    powers = []
    for a in alphas:
        res = _rational_power(a, max_exp)
        if res is None:
            return None
        powers.append(res)
    M = 1
    for m, _ in powers:
        M = M * m // math.gcd(M, m)
    rats = [_power(a, M) for a in alphas]
    rats = [r.as_rational() if hasattr(r, "as_rational") else mpq(r) for r in rats]
    lam_m = _rational_relations(rats)
    if lam_m.rank == 0:
        return IntegerLattice.zero(len(alphas))
    # Kernel of the torsion character on the rational-power relation lattice.
    zs = []
    for b in lam_m.basis:
        z = _one_like(alphas[0])
        for a, exp in zip(alphas, b):
            if exp:
                z = z * _power(a, int(exp))
        zs.append(z)
    order, _, logs = _torsion_subgroup(zs, deg)
    if order == 1:
        return lam_m
    coeff_basis = _pullback([[t] for t in logs], IntegerLattice(1, [[order]]))
    out = []
    for c in coeff_basis:
        v = [0] * len(alphas)
        for coef, vec in zip(c, lam_m.basis):
            v = [a + coef * b for a, b in zip(v, vec)]
        out.append(v)
    return IntegerLattice(len(alphas), out)


def _integer_minpoly(a):
    """Primitive integer version of the monic rational minimal polynomial."""
    p = element_min_poly(a) if hasattr(a, "field") else None
    if p is None:
        q = mpq(a)
        return [-int(q.numerator), int(q.denominator)], 1
    den = 1
    for c in p.coeffs:
        d = int(mpq(c).denominator)
        den = den * d // math.gcd(den, d)
    ints = [int(mpq(c) * den) for c in p.coeffs]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    if g > 1:
        ints = [c // g for c in ints]
    return ints, p.degree


def _height_upper(a, bits=64):
    """Rigorous upper bound on the absolute logarithmic Weil height.

    h(a) = log(Mahler measure of the integer minimal polynomial) / deg, and
    the Mahler measure is at most the polynomial's 2-norm (Landau), so the
    bound needs only the integer coefficients.
    """
    ints, deg = _integer_minpoly(a)
    norm2 = sum(c * c for c in ints)
    with mpmath.workprec(bits):
        h = mpmath.log(norm2) / (2 * deg)
        # Small inflation absorbs directed-rounding slack in mpf arithmetic.
        return h * (1 + mpmath.mpf("1e-9")) + mpmath.mpf("1e-12")


def _masser_bound(alphas, deg):
    """Upper bound on the sup-norm of some basis of the relation lattice of
    algebraic integers, after Masser."""
    s = len(alphas)
    if deg < 2:
        raise ZClosureError("Masser bound needs an irrational input")
    h0 = max(_height_upper(a) for a in alphas)
    h0 = max(h0, mpmath.log(2))
    if deg == 2:
        eta0 = mpmath.log(mpmath.mpf("1.17")) / 2
    else:
        eta0 = (mpmath.log(mpmath.log(deg)) / mpmath.log(deg)) ** 3 / (4 * deg)
    R = mpmath.mpf(s) ** (s - 1) * (deg + 1) ** 2 * (h0 / eta0) ** (s - 1)
    return int(mpmath.ceil(R * (1 + mpmath.mpf("1e-9")))) + 1


def _gram_schmidt_norms(rows):
    """Exact squared Gram-Schmidt norms of integer basis rows."""
    basis = [[mpq(x) for x in r] for r in rows]
    ortho = []
    norms = []
    for v in basis:
        w = list(v)
        for u, n2 in zip(ortho, norms):
            if n2 == 0:
                continue
            coef = sum(a * b for a, b in zip(w, u)) / n2
            w = [a - coef * b for a, b in zip(w, u)]
        ortho.append(w)
        norms.append(sum(a * a for a in w))
    return norms


def _lll_rows(rows):
    m = DomainMatrix([[sympy.ZZ(int(x)) for x in r] for r in rows],
                     (len(rows), len(rows[0])), sympy.ZZ)
    red = m.lll(delta=sympy.QQ(3, 4))
    return [[int(x) for x in row] for row in red.to_list()]


def _certified_integer_relations(alphas, K, precision_cap):
    """Masser/LLL engine for algebraic integers in the number field K.

    Keeps a shrinking candidate basis in Z^(s+1) (one exponent slot per
    input plus a 2*pi multiplier for the argument branch).  Each pass
    doubles the working scale 2^N, re-embeds the candidates against fresh
    log/argument enclosures, LLL-reduces and prunes trailing rows whose
    Gram-Schmidt norm provably exceeds the Masser bound.  A genuine
    relation keeps residual 0 at every scale, while a near-relation grows
    with the scale until it is pruned, so the basis converges to exactly
    the relation lattice.

    Returns (IntegerLattice, certified).
    """
    s = len(alphas)
    deg = K.degree
    R = _masser_bound(alphas, deg)
    # a relation basis row has alpha-exponents bounded by R, a 2*pi slot
    # bounded by s*R/2 and residual entries absorbed by unit rounding
    B2 = s * R * R + (s * R + 2) ** 2 + 8
    j = K.root_index
    basis = [
        [1 if c == i else 0 for c in range(s + 1)] for i in range(s + 1)
    ]
    last_verified = []
    N = max(64, B2.bit_length() + 80)
    while N <= precision_cap:
        deadline.checkpoint()
        bits_e = max(
            (abs(x).bit_length() for row in basis for x in row), default=1
        )
        guard = N + bits_e + 96
        logs = []
        args = []
        degenerate = False
        for a in alphas:
            box = elem_box(a, j, guard)
            if box.contains_zero():
                degenerate = True
                break
            logs.append(log_abs(box, guard))
            args.append(arg_box(a, j, guard))
        if degenerate:
            N *= 2
            continue
        rows = []
        sharp = True
        with iv_prec(guard):
            two_pi = 2 * iv.pi
            scale = iv.mpf(2) ** N
            for e in basis:
                acc_log = iv.mpf(0)
                acc_arg = two_pi * e[s] if e[s] else iv.mpf(0)
                for c, lg, ag in zip(e, logs, args):
                    if c:
                        acc_log = acc_log + c * lg
                        acc_arg = acc_arg + c * ag
                acc_log = acc_log * scale
                acc_arg = acc_arg * scale
                with mpmath.workprec(guard + 40):
                    if (
                        mpmath.mpf(acc_log.delta) > 0.25
                        or mpmath.mpf(acc_arg.delta) > 0.25
                    ):
                        sharp = False
                        break
                    rows.append(
                        list(e)
                        + [
                            int(mpmath.nint(mpmath.mpf(acc_log.mid))),
                            int(mpmath.nint(mpmath.mpf(acc_arg.mid))),
                        ]
                    )
        if not sharp:
            N *= 2
            continue
        red = _lll_rows(rows)
        norms = _gram_schmidt_norms(red)
        r = len(red)
        while r > 0 and norms[r - 1] > B2:
            r -= 1
        basis = [row[: s + 1] for row in red[:r]]
        verified = []
        all_ok = True
        for e in basis:
            if max(abs(x) for x in e) > VERIFY_EXPONENT_CAP:
                all_ok = False
            elif _verify_relation(alphas, e[:s]):
                verified.append(list(e[:s]))
            else:
                all_ok = False
        if all_ok:
            return IntegerLattice(s, verified), True
        last_verified = verified
        N *= 2
    return IntegerLattice(s, last_verified), False


def _layer2(alphas, precision_cap):
    """General engine: reduce to algebraic integers by the denominator
    doubling trick, then run the certified search."""
    K = None
    for a in alphas:
        if hasattr(a, "field") and not a.field.is_rational_field:
            K = a.field
            break
    if K is None:
        raise ZClosureError("layer 2 requires an irrational input")
    s = len(alphas)
    elems = [a if hasattr(a, "field") else K.coerce(mpq(a)) for a in alphas]
    dens = []
    for a in elems:
        ints, _ = _integer_minpoly(a)
        dens.append(abs(ints[-1]))
    if all(d == 1 for d in dens):
        lat, cert = _certified_integer_relations(elems, K, precision_cap)
        return lat, cert
    doubled = [a * K.coerce(d) for a, d in zip(elems, dens)] + [
        K.coerce(d) for d in dens
    ]
    ext, cert = _certified_integer_relations(doubled, K, precision_cap)
    diag = IntegerLattice(
        2 * s,
        [
            [1 if j == i else (-1 if j == s + i else 0) for j in range(2 * s)]
            for i in range(s)
        ],
    )
    inter = ext.intersect(diag)
    return IntegerLattice(s, [list(b[:s]) for b in inter.basis]), cert


def relations(alphas, precision_cap=DEFAULT_PRECISION_CAP):
    """Relation lattice {e : prod alpha_i^{e_i} = 1} with a certification
    flag; every returned basis relation is verified exactly."""
    alphas = tuple(alphas)
    n = len(alphas)
    if n == 0:
        return RelationLattice(alphas=alphas, lattice=IntegerLattice.zero(0), certified=True)
    # Deduplicate exact repeats; relations pull back along the summing map.
    distinct = []
    index = {}
    classes = []
    for a in alphas:
        k = _key(a)
        if k not in index:
            index[k] = len(distinct)
            distinct.append(a)
        classes.append(index[k])
    lat_d = _layer1(distinct)
    certified = True
    if lat_d is None:
        lat_d, certified = _layer2(distinct, precision_cap)
    if len(distinct) == n:
        lattice = lat_d
    else:
        r = len(distinct)
        map_rows = [[1 if c == classes[i] else 0 for c in range(r)] for i in range(n)]
        lattice = IntegerLattice(n, _pullback(map_rows, lat_d))
    return RelationLattice(alphas=alphas, lattice=lattice, certified=certified)


def is_trivial_quick(alphas):
    """Cheap certificate that the relation lattice is zero; None if unknown."""
    alphas = list(alphas)
    if not alphas:
        return True
    rats = []
    for a in alphas:
        q = a.as_rational() if hasattr(a, "as_rational") else mpq(a)
        if q is None:
            return None
        rats.append(q)
    if _rational_relations(rats).rank == 0:
        return True
    return None
