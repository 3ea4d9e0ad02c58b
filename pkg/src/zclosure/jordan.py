"""Jordan decomposition without leaving the ground field.

The semisimple part is obtained by a Newton iteration against the squarefree
part of the characteristic polynomial, which stays inside F^{n x n} for any
exact field F.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotUnipotentError, SingularMatrixError, ZClosureError
from .field import Poly
from .linalg import MatrixF, char_poly, eval_poly_at_matrix, min_poly


def is_semisimple(m) -> bool:
    return min_poly(m).squarefree_part().degree == min_poly(m).degree


def is_unipotent(m) -> bool:
    n = MatrixF.identity(m.field, m.rows)
    d = m - n
    p = d
    for _ in range(m.rows):
        if p.is_zero():
            return True
        p = p * d
    return p.is_zero()


def semisimple_part(m):
    """Semisimple summand of the additive Jordan decomposition of m."""
    field = m.field
    p = char_poly(m).squarefree_part()
    dp = p.derivative()
    g, a, b = p.xgcd(dp)
    if g.degree != 0:
        raise ZClosureError("squarefree part is not separable")
    # b/g is the inverse of p' modulo p.
    binv = b.scale(field.one() / g.coeffs[0])
    s = m
    steps = max(1, m.rows.bit_length())
    for _ in range(steps):
        ps = eval_poly_at_matrix(p, s)
        if ps.is_zero():
            break
        corr = eval_poly_at_matrix(binv, s)
        s = s - ps * corr
    if not eval_poly_at_matrix(p, s).is_zero():
        raise ZClosureError("Newton iteration did not terminate")
    return s


@dataclass(frozen=True)
class JordanPair:
    """Multiplicative decomposition g = s * u = u * s."""

    s: "MatrixF"
    u: "MatrixF"


def jordan_additive(m):
    """(s, n) with m = s + n, s semisimple, n nilpotent, s*n = n*s."""
    s = semisimple_part(m)
    return s, m - s


def jordan_multiplicative(g) -> JordanPair:
    """g = s * u with s semisimple, u unipotent, commuting. g must be
    invertible."""
    s = semisimple_part(g)
    if not s.is_invertible():
        raise SingularMatrixError("input matrix is singular")
    u = s.inverse() * g
    return JordanPair(s=s, u=u)


def log_unipotent(u):
    """Matrix logarithm of a unipotent matrix: the nilpotent series
    sum_{k>=1} (-1)^(k+1) (u - 1)^k / k, exact and finite."""
    field = u.field
    n = u.rows
    d = u - MatrixF.identity(field, n)
    acc = MatrixF.zeros(field, n, n)
    p = d
    for k in range(1, n):
        term = p.scale(field.coerce(1) / field.coerce(k))
        if k % 2 == 0:
            term = -term
        acc = acc + term
        p = p * d
    if not p.is_zero():
        raise NotUnipotentError("matrix is not unipotent")
    return acc


def exp_nilpotent(x):
    """Matrix exponential of a nilpotent matrix, exact and finite."""
    field = x.field
    n = x.rows
    acc = MatrixF.identity(field, n)
    p = MatrixF.identity(field, n)
    fact = 1
    for k in range(1, n):
        p = p * x
        fact *= k
        acc = acc + p.scale(field.coerce(1) / field.coerce(fact))
    if not (p * x).is_zero():
        raise ZClosureError("matrix is not nilpotent")
    return acc
