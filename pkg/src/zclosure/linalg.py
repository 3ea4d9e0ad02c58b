"""Dense exact linear algebra over Q or a number field.

Matrices carry their field; subspaces of Q^N (or K^N) are stored with a
reduced-echelon basis under row-major flattening, so equal subspaces have
identical stored bases.
"""

from __future__ import annotations

from gmpy2 import mpq

from . import deadline
from .errors import NotDefinedOverQError, SingularMatrixError, ZClosureError
from .field import QQ, FieldElement, Poly


class MatrixF:
    """Immutable dense matrix with entries in one exact field."""

    __slots__ = ("field", "rows", "cols", "entries", "_key")

    def __init__(self, field, entries):
        self.field = field
        self.entries = tuple(
            tuple(field.coerce(e) for e in row) for row in entries
        )
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        if any(len(r) != self.cols for r in self.entries):
            raise ZClosureError("ragged matrix")
        self._key = None

    @staticmethod
    def identity(field, n):
        one, zero = field.one(), field.zero()
        return MatrixF(
            field,
            [[one if i == j else zero for j in range(n)] for i in range(n)],
        )

    @staticmethod
    def zeros(field, r, c):
        zero = field.zero()
        return MatrixF(field, [[zero] * c for _ in range(r)])

    def key(self):
        """Canonical hashable key for caching."""
        if self._key is None:
            self._key = (self.field.key(), self.entries)
        return self._key

    def __eq__(self, other):
        return (
            isinstance(other, MatrixF)
            and self.field == other.field
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"MatrixF({[list(map(str, r)) for r in self.entries]})"

    def __add__(self, other):
        return MatrixF(
            self.field,
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.entries, other.entries)
            ],
        )

    def __sub__(self, other):
        return MatrixF(
            self.field,
            [
                [a - b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.entries, other.entries)
            ],
        )

    def __neg__(self):
        return MatrixF(self.field, [[-a for a in r] for r in self.entries])

    def scale(self, c):
        c = self.field.coerce(c)
        return MatrixF(self.field, [[a * c for a in r] for r in self.entries])

    def __mul__(self, other):
        if not isinstance(other, MatrixF):
            return self.scale(other)
        if self.cols != other.rows:
            raise ZClosureError("matrix dimension mismatch")
        zero = self.field.zero()
        bt = list(zip(*other.entries))
        out = []
        for r in self.entries:
            deadline.checkpoint()
            out.append(
                [
                    sum(
                        (a * b for a, b in zip(r, col) if a != zero),
                        zero,
                    )
                    for col in bt
                ]
            )
        return MatrixF(self.field, out)

    __rmul__ = scale

    def __pow__(self, k):
        if self.rows != self.cols:
            raise ZClosureError("pow needs a square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        result = MatrixF.identity(self.field, self.rows)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def transpose(self):
        return MatrixF(self.field, list(zip(*self.entries)))

    def trace(self):
        return sum(
            (self.entries[i][i] for i in range(self.rows)), self.field.zero()
        )

    def is_zero(self):
        zero = self.field.zero()
        return all(e == zero for r in self.entries for e in r)

    def is_diagonal(self):
        zero = self.field.zero()
        return all(
            e == zero
            for i, r in enumerate(self.entries)
            for j, e in enumerate(r)
            if i != j
        )

    def diagonal(self):
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]

    def flatten(self):
        """Row-major flattening, the fixed convention for subspace coords."""
        return tuple(e for r in self.entries for e in r)

    @staticmethod
    def unflatten(field, vec, n):
        return MatrixF(field, [vec[i * n : (i + 1) * n] for i in range(n)])

    def map_entries(self, fn, new_field):
        return MatrixF(new_field, [[fn(e) for e in r] for r in self.entries])

    def coerce_to(self, new_field):
        return self.map_entries(new_field.coerce, new_field)

    def det(self):
        if self.rows != self.cols:
            raise ZClosureError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return self.field.one()
        m = [list(r) for r in self.entries]
        zero, one = self.field.zero(), self.field.one()
        sign = 1
        prev = one
        for k in range(n - 1):
            deadline.checkpoint()
            if m[k][k] == zero:
                for i in range(k + 1, n):
                    if m[i][k] != zero:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return zero
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                    m[i][j] = num / prev
            prev = m[k][k]
        d = m[n - 1][n - 1]
        return -d if sign < 0 else d

    def inverse(self):
        if self.rows != self.cols:
            raise ZClosureError("inverse of a non-square matrix")
        n = self.rows
        zero, one = self.field.zero(), self.field.one()
        m = [list(r) + [one if i == j else zero for j in range(n)]
             for i, r in enumerate(self.entries)]
        for col in range(n):
            deadline.checkpoint()
            piv = next(
                (i for i in range(col, n) if m[i][col] != zero), None
            )
            if piv is None:
                raise SingularMatrixError("singular input")
            m[col], m[piv] = m[piv], m[col]
            inv = one / m[col][col]
            m[col] = [e * inv for e in m[col]]
            for i in range(n):
                if i != col and m[i][col] != zero:
                    c = m[i][col]
                    m[i] = [a - c * b for a, b in zip(m[i], m[col])]
        return MatrixF(self.field, [row[n:] for row in m])

    def is_invertible(self):
        return self.det() != self.field.zero()


def rref(m):
    """Reduced row echelon form: (matrix, rank, pivot column list)."""
    field = m.field
    zero, one = field.zero(), field.one()
    rows = [list(r) for r in m.entries]
    nr, nc = m.rows, m.cols
    pivots = []
    r = 0
    for c in range(nc):
        deadline.checkpoint()
        piv = next((i for i in range(r, nr) if rows[i][c] != zero), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = one / rows[r][c]
        rows[r] = [e * inv for e in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c] != zero:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return MatrixF(field, rows), len(pivots), pivots


class Subspace:
    """Subspace of F^N with a canonical reduced-echelon basis."""

    __slots__ = ("field", "ambient", "basis", "pivots")

    def __init__(self, field, ambient, basis, pivots, _trusted=False):
        self.field = field
        self.ambient = ambient
        self.basis = tuple(tuple(v) for v in basis)
        self.pivots = tuple(pivots)

    @staticmethod
    def from_vectors(field, ambient, vectors):
        if not vectors:
            return Subspace(field, ambient, [], [])
        m = MatrixF(field, list(vectors))
        red, rank, pivots = rref(m)
        return Subspace(field, ambient, red.entries[:rank], pivots)

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, vec):
        vec = [self.field.coerce(v) for v in vec]
        zero = self.field.zero()
        for row, p in zip(self.basis, self.pivots):
            c = vec[p]
            if c != zero:
                vec = [a - c * b for a, b in zip(vec, row)]
        return all(v == zero for v in vec)

    def coords_of(self, vec):
        """Coordinates of vec in the canonical basis; None if not contained."""
        vec = [self.field.coerce(v) for v in vec]
        zero = self.field.zero()
        coords = []
        for row, p in zip(self.basis, self.pivots):
            c = vec[p]
            coords.append(c)
            if c != zero:
                vec = [a - c * b for a, b in zip(vec, row)]
        if any(v != zero for v in vec):
            return None
        return coords

    def sum_with(self, other):
        return Subspace.from_vectors(
            self.field, self.ambient, list(self.basis) + list(other.basis)
        )

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.ambient == other.ambient
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.field.key(), self.ambient, self.basis))

    def key(self):
        return (self.field.key(), self.ambient, self.basis)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"


class Echelon:
    """Mutable incremental echelon structure for span-building loops."""

    def __init__(self, field, ambient):
        self.field = field
        self.ambient = ambient
        self.rows = {}  # pivot column -> normalized row

    def reduce(self, vec):
        vec = [self.field.coerce(v) for v in vec]
        zero = self.field.zero()
        for p in sorted(self.rows):
            c = vec[p]
            if c != zero:
                row = self.rows[p]
                vec = [a - c * b for a, b in zip(vec, row)]
        return vec

    def add(self, vec):
        """Insert vec; returns True if it increased the dimension."""
        vec = self.reduce(vec)
        zero = self.field.zero()
        p = next((i for i, v in enumerate(vec) if v != zero), None)
        if p is None:
            return False
        inv = self.field.one() / vec[p]
        vec = [v * inv for v in vec]
        for q, row in self.rows.items():
            if row[p] != zero:
                c = row[p]
                self.rows[q] = [a - c * b for a, b in zip(row, vec)]
        self.rows[p] = vec
        return True

    def contains(self, vec):
        return all(v == self.field.zero() for v in self.reduce(vec))

    @property
    def dim(self):
        return len(self.rows)

    def subspace(self):
        pivots = sorted(self.rows)
        return Subspace(
            self.field, self.ambient, [self.rows[p] for p in pivots], pivots
        )


def kernel(m):
    """Right null space of m as a Subspace of F^cols."""
    red, rank, pivots = rref(m)
    field = m.field
    zero, one = field.zero(), field.one()
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for f in free:
        vec = [zero] * m.cols
        vec[f] = one
        for r, p in enumerate(pivots):
            vec[p] = -red.entries[r][f]
        basis.append(vec)
    return Subspace.from_vectors(field, m.cols, basis)


def solve_right(m, rhs):
    """One solution x of m*x = rhs, or None."""
    field = m.field
    aug = MatrixF(
        field,
        [list(r) + [field.coerce(b)] for r, b in zip(m.entries, rhs)],
    )
    red, rank, pivots = rref(aug)
    if m.cols in pivots:
        return None
    zero = field.zero()
    x = [zero] * m.cols
    for r, p in enumerate(pivots):
        x[p] = red.entries[r][m.cols]
    return x


def _bareiss_poly_det(rows, field):
    """Fraction-free determinant of a matrix of polynomials."""
    n = len(rows)
    one = Poly(field, [1])
    m = [list(r) for r in rows]
    sign = 1
    prev = one
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Poly(field, [])
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                q, r = num.divmod(prev)
                assert r.is_zero()
                m[i][j] = q
        prev = m[k][k]
    d = m[n - 1][n - 1]
    return -d if sign < 0 else d


def char_poly(m):
    """det(xI - m), computed fraction-free (Bareiss over F[x])."""
    if m.rows != m.cols:
        raise ZClosureError("char_poly needs a square matrix")
    field = m.field
    n = m.rows
    if n == 0:
        return Poly(field, [1])
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            e = m.entries[i][j]
            if i == j:
                row.append(Poly(field, [-e, field.one()]))
            else:
                row.append(Poly(field, [-e]))
        rows.append(row)
    return _bareiss_poly_det(rows, field)


def min_poly(m):
    """Monic minimal polynomial of a square matrix, exact."""
    if m.rows != m.cols:
        raise ZClosureError("min_poly needs a square matrix")
    field = m.field
    n = m.rows
    ech = {}  # pivot -> (row, combo)
    power = MatrixF.identity(field, n)
    zero = field.zero()
    k = 0
    while True:
        vec = list(power.flatten())
        combo = [zero] * (n + 1)
        combo[k] = field.one()
        for p in sorted(ech):
            c = vec[p]
            if c != zero:
                prow, pcombo = ech[p]
                vec = [a - c * b for a, b in zip(vec, prow)]
                combo = [a - c * b for a, b in zip(combo, pcombo)]
        piv = next((i for i, v in enumerate(vec) if v != zero), None)
        if piv is None:
            return Poly(field, combo).monic()
        inv = field.one() / vec[piv]
        ech[piv] = (
            [v * inv for v in vec],
            [c * inv for c in combo],
        )
        power = power * m
        k += 1
        if k > n:
            raise ZClosureError("min_poly iteration overran matrix size")


def eval_poly_at_matrix(p, m):
    """p(m) by Horner."""
    field = m.field
    n = m.rows
    acc = MatrixF.zeros(field, n, n)
    ident = MatrixF.identity(field, n)
    for c in reversed(p.coeffs):
        acc = acc * m + ident.scale(field.coerce(c))
    return acc


def rational_form(V, K):
    """Descend a K-subspace of F^N to its rational points, as a Q-subspace.

    Splits each K-linear membership constraint into deg(K) rational
    constraints and checks dim_Q(result) = dim_K(V).
    """
    if K == QQ:
        return V
    N = V.ambient
    if V.dim == 0:
        return Subspace(QQ, N, [], [])
    constraints = kernel(MatrixF(K, list(V.basis)))
    qrows = []
    for cvec in constraints.basis:
        for t in range(K.degree):
            qrows.append([mpq(c.coords[t]) for c in cvec])
    if not qrows:
        qmat = MatrixF.zeros(QQ, 1, N)
    else:
        qmat = MatrixF(QQ, qrows)
    result = kernel(qmat)
    if result.dim != V.dim:
        raise NotDefinedOverQError(
            f"subspace is not defined over Q (dim_K={V.dim}, dim_Q={result.dim})"
        )
    # Sanity: every rational basis vector lies in V when viewed inside K.
    for v in result.basis:
        if not V.contains([K.coerce(q) for q in v]):
            raise NotDefinedOverQError("descent produced a vector outside V")
    return result
