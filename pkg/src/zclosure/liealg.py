"""Matrix Lie subalgebras of gl(n, Q).

Subalgebras are subspaces of the n^2-dimensional matrix space under row-major
flattening; the stored echelon basis makes equality tests canonical.
"""

from __future__ import annotations

import random

from gmpy2 import mpq

from .errors import NotSplitError, SearchExhaustedError, ZClosureError
from .field import QQ
from .jordan import jordan_additive
from .linalg import Echelon, MatrixF, Subspace, kernel


def bracket(a, b):
    return a * b - b * a


class LieSubalgebra:
    """Bracket-closed subspace of n x n rational matrices."""

    __slots__ = ("n", "space", "_basis_mats")

    def __init__(self, n, space, check=False):
        self.n = n
        self.space = space
        self._basis_mats = None
        if check and not self.is_bracket_closed():
            raise ZClosureError("subspace is not bracket-closed")

    @staticmethod
    def zero(n):
        return LieSubalgebra(n, Subspace(QQ, n * n, [], []))

    @staticmethod
    def from_matrices(mats, n=None, check=False):
        if n is None:
            if not mats:
                raise ZClosureError("ambient size needed for empty generator set")
            n = mats[0].rows
        space = Subspace.from_vectors(QQ, n * n, [m.flatten() for m in mats])
        return LieSubalgebra(n, space, check=check)

    @property
    def dim(self):
        return self.space.dim

    def basis_matrices(self):
        if self._basis_mats is None:
            self._basis_mats = [
                MatrixF.unflatten(QQ, v, self.n) for v in self.space.basis
            ]
        return self._basis_mats

    def contains(self, m):
        return self.space.contains(m.flatten())

    def contains_algebra(self, other):
        return all(self.space.contains(v) for v in other.space.basis)

    def is_bracket_closed(self):
        bm = self.basis_matrices()
        return all(
            self.contains(bracket(x, y))
            for i, x in enumerate(bm)
            for y in bm[i + 1 :]
        )

    def __eq__(self, other):
        return (
            isinstance(other, LieSubalgebra)
            and self.n == other.n
            and self.space == other.space
        )

    def __hash__(self):
        return hash((self.n, self.space))

    def key(self):
        return (self.n, self.space.basis)

    def __repr__(self):
        return f"LieSubalgebra(n={self.n}, dim={self.dim})"


def generated_subalgebra(gens, n=None):
    """Smallest bracket-closed subspace containing the generators."""
    if not gens and n is None:
        raise ZClosureError("ambient size needed for empty generator set")
    if n is None:
        n = gens[0].rows
    ech = Echelon(QQ, n * n)
    mats = []
    work = []
    for g in gens:
        if ech.add(g.flatten()):
            mats.append(g)
            work.append(g)
    while work:
        x = work.pop()
        new = []
        for y in mats:
            c = bracket(x, y)
            if ech.add(c.flatten()):
                new.append(c)
        mats.extend(new)
        work.extend(new)
    return LieSubalgebra(n, ech.subspace())


def close_under_brackets(L, extra):
    """Bracket closure of L together with extra matrices."""
    return generated_subalgebra(list(L.basis_matrices()) + list(extra), L.n)


def conjugate_subalgebra(g, L):
    """{g x g^-1 : x in L}."""
    ginv = g.inverse()
    return LieSubalgebra.from_matrices(
        [g * x * ginv for x in L.basis_matrices()], L.n
    )


def centralizer_in(L, s):
    """Subspace of L commuting with the matrix s, as a subalgebra."""
    bm = L.basis_matrices()
    if not bm:
        return L
    rows = [bracket(s, x).flatten() for x in bm]
    ker = kernel(MatrixF(QQ, rows).transpose())
    vecs = []
    for c in ker.basis:
        v = [QQ.zero()] * (L.n * L.n)
        for coef, x in zip(c, bm):
            xf = x.flatten()
            v = [a + coef * b for a, b in zip(v, xf)]
        vecs.append(v)
    return LieSubalgebra(L.n, Subspace.from_vectors(QQ, L.n * L.n, vecs))


def _ad_matrix(L, x):
    """Matrix of ad(x) = [x, .] on L in its canonical basis (columns)."""
    bm = L.basis_matrices()
    cols = []
    for y in bm:
        c = L.space.coords_of(bracket(x, y).flatten())
        if c is None:
            raise ZClosureError("ad image left the algebra; L not bracket-closed")
        cols.append(c)
    return MatrixF(QQ, list(zip(*cols)))


def _fitting_null(L, x):
    """Generalized 0-eigenspace of ad(x) on L, as a subalgebra of L."""
    d = L.dim
    ad = _ad_matrix(L, x)
    ker = kernel(ad**d)
    bm = L.basis_matrices()
    vecs = []
    for c in ker.basis:
        v = [QQ.zero()] * (L.n * L.n)
        for coef, y in zip(c, bm):
            yf = y.flatten()
            v = [a + coef * b for a, b in zip(v, yf)]
        vecs.append(v)
    return LieSubalgebra(L.n, Subspace.from_vectors(QQ, L.n * L.n, vecs))


def is_nilpotent_algebra(H):
    """Lower central series of H terminates at 0."""
    basis = H.basis_matrices()
    current = basis
    prev_dim = H.dim
    while True:
        ech = Echelon(QQ, H.n * H.n)
        nxt = []
        for x in basis:
            for y in current:
                c = bracket(x, y)
                if ech.add(c.flatten()):
                    nxt.append(c)
        if ech.dim == 0:
            return True
        if ech.dim >= prev_dim:
            return False
        prev_dim = ech.dim
        current = nxt


def normalizer_in(L, H):
    """{y in L : [y, H] subset of H} as a subalgebra of L."""
    bm = L.basis_matrices()
    hm = H.basis_matrices()
    if not bm or not hm:
        return L if not hm else H
    rows = []
    for y in bm:
        row = []
        for h in hm:
            row.extend(_reduce_mod(H.space, bracket(y, h).flatten()))
        rows.append(row)
    ker = kernel(MatrixF(QQ, rows).transpose())
    vecs = []
    for c in ker.basis:
        v = [QQ.zero()] * (L.n * L.n)
        for coef, y in zip(c, bm):
            yf = y.flatten()
            v = [a + coef * b for a, b in zip(v, yf)]
        vecs.append(v)
    return LieSubalgebra(L.n, Subspace.from_vectors(QQ, L.n * L.n, vecs))


def _reduce_mod(space, vec):
    vec = [QQ.coerce(v) for v in vec]
    zero = QQ.zero()
    for row, p in zip(space.basis, space.pivots):
        c = vec[p]
        if c != zero:
            vec = [a - c * b for a, b in zip(vec, row)]
    return vec


CARTAN_MAX_TRIALS = 200


def cartan_subalgebra(L, seed=0):
    """Nilpotent self-normalizing subalgebra of L.

    Fitting-null component of ad(x) for a randomized regular candidate x;
    verified before returning.
    """
    d = L.dim
    if d == 0:
        return L
    bm = L.basis_matrices()
    rng = random.Random(seed)
    bound = 1
    trials = 0
    candidates = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    while trials < CARTAN_MAX_TRIALS:
        if candidates:
            coeffs = candidates.pop(0)
        else:
            coeffs = [rng.randint(-bound, bound) for _ in range(d)]
            if trials % 20 == 19:
                bound += 1
        trials += 1
        x = MatrixF.zeros(QQ, L.n, L.n)
        for c, y in zip(coeffs, bm):
            if c:
                x = x + y.scale(mpq(c))
        if x.is_zero():
            continue
        H = _fitting_null(L, x)
        # Any nilpotent self-normalizing subalgebra is a Cartan subalgebra;
        # non-regular candidates fail one of the two checks.
        if is_nilpotent_algebra(H) and normalizer_in(L, H) == H:
            return H
    raise SearchExhaustedError("Cartan subalgebra search exhausted its trials")


def split_semisimple_nilpotent(H):
    """Split a Cartan subalgebra of an algebraic Lie algebra as t + u with t
    spanned by semisimple parts and u by nilpotent parts of a basis."""
    s_parts = []
    n_parts = []
    for x in H.basis_matrices():
        s, n = jordan_additive(x)
        if not s.is_zero():
            s_parts.append(s.flatten())
        if not n.is_zero():
            n_parts.append(n.flatten())
    amb = H.n * H.n
    t = Subspace.from_vectors(QQ, amb, s_parts)
    u = Subspace.from_vectors(QQ, amb, n_parts)
    if t.dim + u.dim != H.dim:
        raise NotSplitError(
            "semisimple and nilpotent parts do not split the subalgebra"
        )
    for v in list(t.basis) + list(u.basis):
        if not H.space.contains(v):
            raise NotSplitError("Jordan parts left the subalgebra")
    return t, u
