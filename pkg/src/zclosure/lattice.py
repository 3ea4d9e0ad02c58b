"""Integer lattice arithmetic: Hermite normal form, kernels, saturation.

Lattices are stored as row bases in row-style HNF, so equal lattices have
identical stored bases. All entries are Python ints.
"""

from __future__ import annotations

import math
from fractions import Fraction

from gmpy2 import mpq

from .errors import ZClosureError


def hnf_with_transform(rows, ncols):
    """Row-style Hermite normal form.

    Returns (H, U, rank) with U unimodular, U * rows == H (as stacked row
    matrices), H's nonzero rows first, pivots positive, entries above a pivot
    reduced into [0, pivot).
    """
    m = [list(map(int, r)) for r in rows]
    n = len(m)
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    row = 0
    for col in range(ncols):
        piv = None
        for i in range(row, n):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        u[row], u[piv] = u[piv], u[row]
        # Clear below with extended gcd steps.
        for i in range(row + 1, n):
            while m[i][col] != 0:
                q = m[row][col] // m[i][col]
                m[row] = [a - q * b for a, b in zip(m[row], m[i])]
                u[row] = [a - q * b for a, b in zip(u[row], u[i])]
                m[row], m[i] = m[i], m[row]
                u[row], u[i] = u[i], u[row]
        if m[row][col] < 0:
            m[row] = [-a for a in m[row]]
            u[row] = [-a for a in u[row]]
        for i in range(row):
            q = m[i][col] // m[row][col]
            if q:
                m[i] = [a - q * b for a, b in zip(m[i], m[row])]
                u[i] = [a - q * b for a, b in zip(u[i], u[row])]
        row += 1
    return m, u, row


def hnf(rows, ncols):
    h, _, rank = hnf_with_transform(rows, ncols)
    return h[:rank]


def integer_kernel(rows, ncols):
    """Basis of {v in Z^k : v * rows == 0} where rows is a k x ncols integer
    matrix, returned in HNF."""
    _, u, rank = hnf_with_transform(rows, ncols)
    ker = u[rank:]
    return hnf(ker, len(rows)) if ker else []


def _clear_denominators(vec):
    qs = [mpq(Fraction(v) if isinstance(v, float) else v) for v in vec]
    den = 1
    for q in qs:
        d = int(q.denominator)
        den = den * d // math.gcd(den, d)
    return [int(q * den) for q in qs]


def rational_kernel_integer_basis(rows, ncols):
    """Basis (in HNF) of the saturated lattice {v in Z^k : v * rows = 0} for a
    k x ncols matrix with rational entries."""
    from .linalg import MatrixF, kernel
    from .field import QQ

    if not rows:
        return []
    m = MatrixF(QQ, [[mpq(e) for e in r] for r in rows]).transpose()
    ker = kernel(m)
    basis = [_clear_denominators(v) for v in ker.basis]
    # clearing denominators gives a finite-index sublattice of the integer
    # kernel, so saturate to recover every integer solution
    return saturate(basis, len(rows))


def saturate(rows, ncols):
    """Saturation of the lattice spanned by rows: the set of integer vectors
    with some positive multiple in the lattice. Computed by a double integer
    kernel, returned in HNF."""
    if not rows:
        return []
    k1 = integer_kernel([list(c) for c in zip(*rows)], len(rows))
    if not k1:
        # Full rank: saturation is Z^ncols restricted to the row space, i.e.
        # the rational row space intersected with Z^ncols.
        return rational_row_space_integers(rows, ncols)
    return integer_kernel([list(c) for c in zip(*k1)], len(k1))


def rational_row_space_integers(rows, ncols):
    """Integer points of the rational span of rows, as an HNF basis."""
    # v in span_Q(rows) iff v kills every rational-kernel vector of rows^T.
    from .linalg import MatrixF, kernel
    from .field import QQ

    if not rows:
        return []
    # Right kernel x of rows: v in span(rows) iff v . x = 0 for all such x,
    # so take the integer solutions of that rational system.
    ker = kernel(MatrixF(QQ, [[mpq(e) for e in r] for r in rows]))
    if ker.dim == 0:
        return [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    cons = [_clear_denominators(v) for v in ker.basis]
    return integer_kernel([list(c) for c in zip(*cons)], len(cons))


class IntegerLattice:
    """Sublattice of Z^n with a canonical HNF row basis."""

    __slots__ = ("ncols", "basis")

    def __init__(self, ncols, rows):
        self.ncols = ncols
        self.basis = tuple(tuple(r) for r in hnf(rows, ncols))

    @staticmethod
    def full(ncols):
        return IntegerLattice(
            ncols, [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
        )

    @staticmethod
    def zero(ncols):
        return IntegerLattice(ncols, [])

    @property
    def rank(self):
        return len(self.basis)

    def contains(self, vec):
        vec = list(map(int, vec))
        if len(vec) != self.ncols:
            raise ZClosureError("vector length mismatch")
        for row in self.basis:
            p = next(i for i, e in enumerate(row) if e != 0)
            if vec[p] % row[p] != 0:
                return False
            q = vec[p] // row[p]
            if q:
                vec = [a - q * b for a, b in zip(vec, row)]
        return all(v == 0 for v in vec)

    def contains_lattice(self, other):
        return all(self.contains(r) for r in other.basis)

    def __eq__(self, other):
        return (
            isinstance(other, IntegerLattice)
            and self.ncols == other.ncols
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ncols, self.basis))

    def __repr__(self):
        return f"IntegerLattice(ncols={self.ncols}, rank={self.rank})"

    def sum_with(self, other):
        if self.ncols != other.ncols:
            raise ZClosureError("ambient mismatch")
        return IntegerLattice(self.ncols, list(self.basis) + list(other.basis))

    def intersect(self, other):
        """Lattice intersection via the stacked-kernel trick."""
        if self.ncols != other.ncols:
            raise ZClosureError("ambient mismatch")
        if not self.basis or not other.basis:
            return IntegerLattice.zero(self.ncols)
        stacked = [list(r) for r in self.basis] + [list(r) for r in other.basis]
        ker = integer_kernel(stacked, self.ncols)
        rows = []
        for coeffs in ker:
            v = [0] * self.ncols
            for c, r in zip(coeffs[: len(self.basis)], self.basis):
                v = [a + c * b for a, b in zip(v, r)]
            rows.append(v)
        return IntegerLattice(self.ncols, rows)

    def saturation(self):
        return IntegerLattice(self.ncols, saturate([list(r) for r in self.basis], self.ncols))

    def is_saturated(self):
        return self == self.saturation()

    def index_in(self, other):
        """Index [other : self] when finite and both have equal rank.

        Returns None if ranks differ.
        """
        if self.rank != other.rank:
            return None
        det_ratio = 1
        # Solve self.basis rows in terms of other's basis; index is |det|.
        from .field import QQ
        from .linalg import MatrixF, solve_right

        omat = MatrixF(QQ, [[mpq(e) for e in r] for r in other.basis]).transpose()
        coords = []
        for r in self.basis:
            x = solve_right(omat, [mpq(e) for e in r])
            if x is None:
                return None
            coords.append(x)
        d = MatrixF(QQ, coords).det()
        d = abs(d)
        if d.denominator != 1:
            return None
        det_ratio = int(d)
        return det_ratio
