"""Rigorous complex enclosures for number field embeddings.

Roots of defining polynomials are enclosed by sympy's CRootOf isolating
rectangles (exact rational bounds), converted to mpmath interval arithmetic.
These enclosures drive root ordering and the completeness certificate of the
relation engine; they never decide equality of exact values.
"""

from __future__ import annotations

from contextlib import contextmanager

import mpmath
import sympy
from gmpy2 import mpq

from . import deadline
from .errors import ResourceLimitError

iv = mpmath.iv


@contextmanager
def iv_prec(bits):
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


def iv_from_rat(q):
    """Interval containing the exact rational q (at current precision)."""
    q = mpq(q)
    return iv.mpf(int(q.numerator)) / iv.mpf(int(q.denominator))


def iv_hull(a, b):
    return iv.mpf([min(a.a, b.a), max(a.b, b.b)])


class Box:
    """Axis-aligned rectangle in C with mpmath interval coordinates."""

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = re
        self.im = im

    def __repr__(self):
        return f"Box({self.re}, {self.im})"

    def __add__(self, other):
        return Box(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return Box(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        return Box(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def add_rat(self, q):
        return Box(self.re + iv_from_rat(q), self.im)

    def abs2(self):
        return self.re * self.re + self.im * self.im

    def width(self):
        return max(self.re.delta.b, self.im.delta.b)

    def contains_zero(self):
        return 0 in self.re and 0 in self.im

    def mid(self):
        return (mpmath.mpf(self.re.mid), mpmath.mpf(self.im.mid))

    def disjoint(self, other):
        return (
            self.re.b < other.re.a
            or other.re.b < self.re.a
            or self.im.b < other.im.a
            or other.im.b < self.im.a
        )


def _rootof_box(rootof):
    """Box for a CRootOf from its current isolating interval."""
    if rootof.is_real:
        i = rootof._get_interval()
        lo, hi = iv_from_rat(mpq(str(i.a))), iv_from_rat(mpq(str(i.b)))
        return Box(iv_hull(lo, hi), iv.mpf(0))
    i = rootof._get_interval()
    ax, bx = iv_from_rat(mpq(str(i.ax))), iv_from_rat(mpq(str(i.bx)))
    ay, by = iv_from_rat(mpq(str(i.ay))), iv_from_rat(mpq(str(i.by)))
    return Box(iv_hull(ax, bx), iv_hull(ay, by))


def _expr_box(expr):
    """Box for a sympy algebraic expression built from rationals and CRootOf
    atoms (CRootOf constructors may rescale into Mul/Add forms)."""
    if expr.is_Rational:
        return Box(iv_from_rat(mpq(int(expr.p), int(expr.q))), iv.mpf(0))
    if isinstance(expr, sympy.CRootOf):
        return _rootof_box(expr)
    if expr.is_Add:
        acc = Box(iv.mpf(0), iv.mpf(0))
        for t in expr.args:
            acc = acc + _expr_box(t)
        return acc
    if expr.is_Mul:
        acc = Box(iv.mpf(1), iv.mpf(0))
        for t in expr.args:
            acc = acc * _expr_box(t)
        return acc
    if expr.is_Pow and expr.exp.is_Integer and expr.exp > 0:
        base = _expr_box(expr.base)
        acc = base
        for _ in range(int(expr.exp) - 1):
            acc = acc * base
        return acc
    raise ResourceLimitError(f"cannot enclose expression {expr}")


def _refine_expr(expr, digits):
    for r in expr.atoms(sympy.CRootOf):
        r.evalf(digits)


def root_box(K, j, bits):
    """Enclosure of the j-th root of K's defining polynomial, refined until
    its width is below 2^-bits."""
    r = K.sympy_roots()[j]
    digits = max(20, int(bits * 0.3103) + 10)
    with iv_prec(bits + 40):
        for _ in range(60):
            deadline.checkpoint()
            box = _expr_box(r)
            if box.width() < mpmath.mpf(2) ** (-bits):
                return box
            _refine_expr(r, digits)
            digits *= 2
    raise ResourceLimitError("could not refine root enclosure")


def elem_box(a, j, bits):
    """Enclosure of the image of field element a under the j-th embedding."""
    q = a.as_rational() if hasattr(a, "as_rational") else mpq(a)
    if not hasattr(a, "as_rational"):
        with iv_prec(bits + 40):
            return Box(iv_from_rat(a), iv.mpf(0))
    if q is not None:
        with iv_prec(bits + 40):
            return Box(iv_from_rat(q), iv.mpf(0))
    # Horner at a refined root box; widen root precision for cancellation.
    extra = 0
    target = mpmath.mpf(2) ** (-bits)
    while True:
        deadline.checkpoint()
        t = root_box(a.field, j, bits + extra)
        with iv_prec(bits + extra + 40):
            acc = Box(iv.mpf(0), iv.mpf(0))
            for c in reversed(a.coords):
                acc = (acc * t).add_rat(c)
        if acc.width() < target:
            return acc
        extra += bits + 40
        if extra > 40000:
            raise ResourceLimitError("element enclosure did not converge")


def log_abs(box, bits):
    """Interval containing log|z| for z in the box; box must exclude 0."""
    with iv_prec(bits + 40):
        a2 = box.abs2()
        if 0 in a2:
            raise ResourceLimitError("log of a box containing zero")
        return iv.log(a2) / 2


def _real_value_of(a, j, bits):
    """If the j-th embedding of a is provably an exactly real number, return
    its real interval; else None.

    Decided by matching the enclosure against the roots of a's minimal
    polynomial over Q: when exactly one of them intersects the enclosure and
    that root is real, the image is that real root.
    """
    from .field import element_min_poly

    mp = element_min_poly(a)
    if mp.degree == 1:
        with iv_prec(bits + 40):
            return iv_from_rat(-mp.coeffs[0])
    p = mp.to_sympy()
    cands = [sympy.CRootOf(p, i, radicals=False) for i in range(mp.degree)]
    cur_bits = bits
    for _ in range(12):
        box = elem_box(a, j, cur_bits)
        with iv_prec(cur_bits + 40):
            digits = max(20, int(cur_bits * 0.3103) + 10)
            hits = []
            for r in cands:
                _refine_expr(r, digits)
                rb = _expr_box(r)
                if not box.disjoint(rb):
                    hits.append((r, rb))
            if len(hits) == 1:
                r, rb = hits[0]
                if r.is_real:
                    return rb.re
                return None
        cur_bits *= 2
    return None


def arg_box(a, j, bits):
    """Interval containing the principal argument of the j-th embedding of a.

    Handles values on the negative real axis exactly (argument pi).
    """
    cur = bits
    for _ in range(10):
        box = elem_box(a, j, cur)
        with iv_prec(cur + 40):
            if box.im.a > 0 or box.im.b < 0 or box.re.a > 0:
                return iv.atan2(box.im, box.re)
        real_iv = _real_value_of(a, j, cur)
        if real_iv is not None:
            with iv_prec(cur + 40):
                if real_iv.a > 0:
                    return iv.mpf(0)
                if real_iv.b < 0:
                    return +iv.pi
            cur *= 2
            continue
        cur *= 2
    raise ResourceLimitError("argument enclosure did not converge")


def order_elements(elems):
    """Deterministic ordering of distinct field elements by their embedding
    under the field's chosen root, midpoints lexicographic by (re, im),
    with an exact tie-break on coordinates.

    Returns the permutation as a list of indices.
    """
    keyed = []
    for i, a in enumerate(elems):
        q = a.as_rational() if hasattr(a, "as_rational") else mpq(a)
        if q is not None:
            mid = (mpmath.mpf(int(q.numerator)) / mpmath.mpf(int(q.denominator)), mpmath.mpf(0))
            tie = (str(q),)
        else:
            box = elem_box(a, a.field.root_index, 80)
            mid = box.mid()
            tie = tuple(str(c) for c in a.coords)
        keyed.append((mid[0], mid[1], tie, i))
    keyed.sort(key=lambda t: (t[0], t[1], t[2]))
    return [t[3] for t in keyed]
