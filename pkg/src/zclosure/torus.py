"""Lattice/torus dictionary: character lattices of toral algebras,
simultaneous diagonalization, and exact torus membership.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from gmpy2 import mpq

from .errors import ZClosureError
from .field import QQ, FieldCache, splitting_field
from .intervals import order_elements
from .lattice import IntegerLattice, rational_kernel_integer_basis
from .linalg import MatrixF, Subspace, kernel, min_poly, solve_right


def lattice_of_toral_algebra(t_basis, n=None):
    """Lattice of characters vanishing on a toral algebra of diagonal
    matrices: {e in Z^n : sum b_i e_i = 0 for every diag(b) in the span}.

    Computed as the integer points of the rational kernel, hence pure.
    """
    if n is None:
        if not t_basis:
            raise ZClosureError("ambient size needed for the zero algebra")
        n = t_basis[0].rows
    if not t_basis:
        return IntegerLattice.full(n)
    K = t_basis[0].field
    deg = 1 if K.is_rational_field else K.degree
    rows = []
    for i in range(n):
        row = []
        for m in t_basis:
            if not m.is_diagonal():
                raise ZClosureError("toral basis matrix is not diagonal")
            b = m.entries[i][i]
            if K.is_rational_field:
                row.append(mpq(b))
            else:
                row.extend(mpq(c) for c in b.coords)
        rows.append(row)
    basis = rational_kernel_integer_basis(rows, len(t_basis) * deg)
    return IntegerLattice(n, basis)


def toral_algebra_of_lattice(L, n):
    """Diagonal coefficient vectors annihilated by every character in L, as a
    Subspace of Q^n (each vector is a diagonal)."""
    if L.rank == 0:
        return Subspace.from_vectors(
            QQ, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        )
    m = MatrixF(QQ, [[mpq(e) for e in r] for r in L.basis])
    return kernel(m)


def diag_subspace_matrices(space):
    """Diagonal matrices for a subspace of diagonal coefficient vectors."""
    out = []
    for v in space.basis:
        n = space.ambient
        out.append(
            MatrixF(
                QQ,
                [
                    [v[i] if i == j else 0 for j in range(n)]
                    for i in range(n)
                ],
            )
        )
    return out


@dataclass(frozen=True)
class DiagonalizedTorus:
    """A toral algebra brought to diagonal form.

    C over the splitting field K satisfies C x C^-1 diagonal for every basis
    matrix x; relation_lattice is the character lattice of the diagonalized
    algebra (pure for a connected torus).
    """

    n: int
    K: object
    C: "MatrixF"
    C_inv: "MatrixF"
    relation_lattice: "IntegerLattice"
    diag_basis: tuple = dc_field(default=())


def _restriction_matrix(m, block):
    """Matrix of m acting on the invariant subspace spanned by block rows."""
    K = m.field
    bmat = MatrixF(K, list(block)).transpose()
    cols = []
    for v in block:
        img = [
            sum((m.entries[i][j] * v[j] for j in range(m.cols)), K.zero())
            for i in range(m.rows)
        ]
        x = solve_right(bmat, img)
        if x is None:
            raise ZClosureError("block is not invariant under the toral basis")
        cols.append(x)
    return MatrixF(K, list(zip(*cols)))


def _eigen_split(R, block, candidates, K):
    """Split a block into eigenspaces of its restriction matrix R.

    candidates: field elements known to include every eigenvalue of R.
    """
    p = min_poly(R)
    eigs = [lam for lam in candidates if p.eval(lam) == K.zero()]
    order = order_elements(eigs)
    eigs = [eigs[i] for i in order]
    d = R.rows
    pieces = []
    total = 0
    for lam in eigs:
        shifted = R - MatrixF.identity(K, d).scale(lam)
        ker = kernel(shifted)
        for c in ker.basis:
            vec = [K.zero()] * len(block[0])
            for coef, row in zip(c, block):
                vec = [a + coef * b for a, b in zip(vec, row)]
            pieces.append((lam, vec))
        total += ker.dim
    if total != d:
        raise ZClosureError("restriction matrix failed to diagonalize")
    return pieces


def diagonalize_toral(t_basis, max_degree=64, cache=None):
    """Simultaneously diagonalize commuting semisimple rational matrices.

    Returns a DiagonalizedTorus over the splitting field of the product of
    the basis elements' minimal polynomials.
    """
    if not t_basis:
        raise ZClosureError("empty toral basis; use the lattice directly")
    n = t_basis[0].rows
    cache = cache or FieldCache()
    prod = None
    minpolys = []
    for m in t_basis:
        p = min_poly(m)
        minpolys.append(p)
        prod = p if prod is None else prod * p
    squarefree = prod.squarefree_part()
    K, root_list = splitting_field(squarefree, max_degree=max_degree, cache=cache)
    roots = [r for r, _ in root_list]
    if K.is_rational_field:
        mats = list(t_basis)
        root_elems = [mpq(r) if not hasattr(r, "coords") else r for r in roots]
    else:
        mats = [m.coerce_to(K) for m in t_basis]
        root_elems = [K.coerce(r) for r in roots]
    # Refine a common eigenbasis one toral generator at a time.
    blocks = [
        [
            tuple(
                K.one() if i == j else K.zero() for j in range(n)
            )
            for i in range(n)
        ]
    ]
    for m, p in zip(mats, minpolys):
        pk = p.coerce_to(K) if not K.is_rational_field else p
        cands = [lam for lam in root_elems if pk.eval(K.coerce(lam)) == K.zero()]
        cands = [K.coerce(lam) for lam in cands]
        new_blocks = []
        for block in blocks:
            if len(block) == 1:
                new_blocks.append(block)
                continue
            R = _restriction_matrix(m, block)
            pieces = _eigen_split(R, block, cands, K)
            groups = {}
            order = []
            for lam, vec in pieces:
                key = tuple(lam.coords) if hasattr(lam, "coords") else str(lam)
                if key not in groups:
                    groups[key] = []
                    order.append(key)
                groups[key].append(tuple(vec))
            for key in order:
                new_blocks.append(groups[key])
        blocks = new_blocks
    eigvecs = [v for block in blocks for v in block]
    P = MatrixF(K, eigvecs).transpose()  # columns are eigenvectors
    C = P.inverse()
    diag_basis = tuple(C * m * P for m in mats)
    for dmat in diag_basis:
        if not dmat.is_diagonal():
            raise ZClosureError("simultaneous diagonalization failed")
    lam_lattice = lattice_of_toral_algebra(list(diag_basis), n)
    return DiagonalizedTorus(
        n=n,
        K=K,
        C=C,
        C_inv=P,
        relation_lattice=lam_lattice,
        diag_basis=diag_basis,
    )


def torus_contains(T, s):
    """Membership of a semisimple matrix in the torus with Lie algebra the
    diagonalized toral algebra: conjugate must be diagonal and satisfy every
    character relation exactly."""
    K = T.K
    sK = s if s.field == K else s.coerce_to(K)
    sp = T.C * sK * T.C_inv
    if not sp.is_diagonal():
        return False
    diag = sp.diagonal()
    if any(d == K.zero() for d in diag):
        return False
    for e in T.relation_lattice.basis:
        prod = K.one()
        for d, exp in zip(diag, e):
            if exp:
                prod = prod * (d ** exp if exp > 0 else (K.one() / d) ** (-exp))
        if prod != K.one():
            return False
    return True
