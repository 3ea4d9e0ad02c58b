"""Zariski closure of a finitely generated subgroup of GL(n, Q).

Output is the Lie algebra of the identity component together with one
representative per component, found by a breadth-first search over products
of the semisimple/unipotent parts of the generators with coset
deduplication.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field as dc_field

from gmpy2 import mpq

from . import deadline
from .errors import (
    BudgetExhaustedError,
    InvariantViolationError,
    NotUnipotentError,
    ZClosureError,
)
from .field import QQ, FieldCache, splitting_field
from .intervals import order_elements
from .jordan import is_unipotent, jordan_multiplicative, log_unipotent
from .liealg import (
    LieSubalgebra,
    cartan_subalgebra,
    centralizer_in,
    close_under_brackets,
    conjugate_subalgebra,
    generated_subalgebra,
    split_semisimple_nilpotent,
)
from .linalg import MatrixF, Subspace, kernel, min_poly, rational_form
from .multrel import relations
from .torus import (
    DiagonalizedTorus,
    diag_subspace_matrices,
    diagonalize_toral,
    lattice_of_toral_algebra,
    torus_contains,
)


@dataclass
class ClosureConfig:
    max_field_degree: int = 64
    max_bfs_length: int = 20
    max_rounds: int = 64
    time_budget: float | None = None
    seed: int = 0
    precision_cap: int = 1 << 16


@dataclass
class ClosureTrace:
    rounds: int = 0
    dim_history: list = dc_field(default_factory=list)
    bfs_lengths: int = 0
    multrel_calls: int = 0
    multrel_time: float = 0.0
    membership_calls: int = 0
    membership_time: float = 0.0
    max_field_degree: int = 1
    total_time: float = 0.0


@dataclass(frozen=True)
class GroupDescription:
    n: int
    lie_algebra: "LieSubalgebra"
    components: tuple
    certified: bool


class ClosureContext:
    """Shared caches, trace counters and budget checks for one run."""

    def __init__(self, config=None):
        self.config = config or ClosureConfig()
        self.cache = FieldCache()
        self.trace = ClosureTrace()
        self.start = time.monotonic()
        self.jordan_cache = {}
        self.lie_semi_cache = {}
        self.torus_cache = {}
        self.member_cache = {}

    def check_budget(self):
        budget = self.config.time_budget
        if budget is not None and time.monotonic() - self.start > budget:
            raise BudgetExhaustedError("time budget exceeded", trace=self.trace)

    def jordan(self, g):
        key = g.key()
        if key not in self.jordan_cache:
            self.jordan_cache[key] = jordan_multiplicative(g)
        return self.jordan_cache[key]

    def note_field(self, K):
        if not K.is_rational_field:
            self.trace.max_field_degree = max(
                self.trace.max_field_degree, K.degree
            )


def lie_of_unipotent(u):
    """Lie algebra of the smallest algebraic group containing a unipotent
    matrix: the line through log(u)."""
    n = u.rows
    if not is_unipotent(u):
        raise NotUnipotentError("matrix is not unipotent")
    ell = log_unipotent(u)
    if ell.is_zero():
        return LieSubalgebra.zero(n)
    return LieSubalgebra.from_matrices([ell], n)


def _eigen_data(s, ctx):
    """Diagonalize one semisimple rational matrix over its splitting field.

    Returns (K, P, P_inv, eigenvalues) with P^-1 s P diagonal and the
    eigenvalues listed in the diagonal order.
    """
    K_field = s.field
    p = min_poly(s)
    K, root_list = splitting_field(
        p, max_degree=ctx.config.max_field_degree, cache=ctx.cache
    )
    ctx.note_field(K)
    sK = s if K == K_field else s.coerce_to(K)
    cols = []
    eigs = []
    for root, _ in root_list:
        lam = K.coerce(root)
        shifted = sK - MatrixF.identity(K, s.rows).scale(lam)
        ker = kernel(shifted)
        for v in ker.basis:
            cols.append(v)
            eigs.append(lam)
    if len(cols) != s.rows:
        raise InvariantViolationError("semisimple matrix failed to diagonalize")
    P = MatrixF(K, cols).transpose()
    return K, P, P.inverse(), eigs


def lie_of_semisimple(s, ctx=None):
    """Lie algebra of the smallest algebraic group containing a semisimple
    matrix, via the relation lattice of its eigenvalues.

    Returns (LieSubalgebra over Q, certified flag).
    """
    ctx = ctx or ClosureContext()
    key = s.key()
    if key in ctx.lie_semi_cache:
        return ctx.lie_semi_cache[key]
    n = s.rows
    K, P, P_inv, eigs = _eigen_data(s, ctx)
    t0 = time.monotonic()
    rel = relations(eigs, precision_cap=ctx.config.precision_cap)
    ctx.trace.multrel_calls += 1
    ctx.trace.multrel_time += time.monotonic() - t0
    toral = kernel(
        MatrixF(QQ, [[mpq(e) for e in r] for r in rel.lattice.basis])
    ) if rel.lattice.rank else Subspace.from_vectors(
        QQ, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    )
    if toral.dim == 0:
        result = (LieSubalgebra.zero(n), rel.certified)
        ctx.lie_semi_cache[key] = result
        return result
    mats = []
    for v in toral.basis:
        D = MatrixF(
            K, [[K.coerce(mpq(v[i])) if i == j else K.zero() for j in range(n)] for i in range(n)]
        )
        mats.append((P * D * P_inv).flatten())
    V = Subspace.from_vectors(K, n * n, mats)
    ratl = rational_form(V, K)
    result = (LieSubalgebra(n, ratl), rel.certified)
    ctx.lie_semi_cache[key] = result
    return result


def _torus_for(t_subspace, ctx):
    """Diagonalized torus for a toral subspace of Q^(n x n), cached."""
    key = t_subspace.key()
    if key not in ctx.torus_cache:
        n = math.isqrt(t_subspace.ambient)
        mats = [MatrixF.unflatten(QQ, v, n) for v in t_subspace.basis]
        T = diagonalize_toral(
            mats, max_degree=ctx.config.max_field_degree, cache=ctx.cache
        )
        ctx.note_field(T.K)
        ctx.torus_cache[key] = T
    return ctx.torus_cache[key]


def member_connected(g_lie, g, ctx=None):
    """Membership of an invertible rational matrix in the connected algebraic
    group with the given Lie algebra."""
    ctx = ctx or ClosureContext()
    key = (g_lie.key(), g.key())
    if key in ctx.member_cache:
        return ctx.member_cache[key]
    t0 = time.monotonic()
    verdict = _member_connected(g_lie, g, ctx)
    ctx.trace.membership_calls += 1
    ctx.trace.membership_time += time.monotonic() - t0
    ctx.member_cache[key] = verdict
    return verdict


def _member_connected(g_lie, g, ctx):
    n = g.rows
    ident = MatrixF.identity(QQ, n)
    jp = ctx.jordan(g)
    s, u = jp.s, jp.u
    if u != ident and not g_lie.contains(log_unipotent(u)):
        return False
    if s == ident:
        return True
    if conjugate_subalgebra(s, g_lie) != g_lie:
        return False
    z = centralizer_in(g_lie, s)
    h = cartan_subalgebra(z, seed=ctx.config.seed)
    t, _ = split_semisimple_nilpotent(h)
    if t.dim == 0:
        return s == ident
    T = _torus_for(t, ctx)
    return torus_contains(T, s)


def _preprocess(gens, ctx):
    """Jordan parts of the generators and their inverses, deduplicated."""
    n = gens[0].rows
    ident = MatrixF.identity(QQ, n)
    A = []
    seen = set()

    def push(m):
        k = m.key()
        if m != ident and k not in seen:
            seen.add(k)
            A.append(m)

    for g in gens:
        jp = ctx.jordan(g)
        for part in (jp.s, jp.u):
            push(part)
            push(part.inverse())
    return A


def _initial_algebra(A, n, ctx):
    """Steps 1 and 2: generate from the one-generator algebras, then
    stabilize under conjugation by A."""
    ctx.check_budget()
    pieces = []
    certified = True
    for a in A:
        if is_unipotent(a):
            L = lie_of_unipotent(a)
        else:
            L, cert = lie_of_semisimple(a, ctx)
            certified = certified and cert
        pieces.extend(L.basis_matrices())
    ghat = generated_subalgebra(pieces, n)
    changed = True
    while changed:
        ctx.check_budget()
        changed = False
        for a in A:
            conj = conjugate_subalgebra(a, ghat)
            if conj != ghat:
                ghat = close_under_brackets(ghat, conj.basis_matrices())
                changed = True
    return ghat, certified


def zariski_closure(gens, config=None):
    """Closure algorithm: returns (GroupDescription, ClosureTrace)."""
    if not gens:
        raise ZClosureError("need at least one generator")
    ctx = ClosureContext(config)
    n = gens[0].rows
    gens = [g.coerce_to(QQ) if g.field != QQ else g for g in gens]
    for g in gens:
        if g.rows != g.cols or g.rows != n:
            raise ZClosureError("generators must be square of equal size")
        if not g.is_invertible():
            raise ZClosureError("generators must be invertible")
    ident = MatrixF.identity(QQ, n)
    certified = True
    deadline.arm(ctx.config.time_budget)
    try:
        A = _preprocess(gens, ctx)
        while True:
            ctx.trace.rounds += 1
            if ctx.trace.rounds > ctx.config.max_rounds:
                raise BudgetExhaustedError(
                    "restart budget exceeded", trace=ctx.trace
                )
            ghat, cert = _initial_algebra(A, n, ctx)
            certified = certified and cert
            if ctx.trace.dim_history and ghat.dim <= ctx.trace.dim_history[-1]:
                raise InvariantViolationError(
                    "restart did not increase the Lie algebra dimension"
                )
            ctx.trace.dim_history.append(ghat.dim)
            result = _component_search(A, ghat, n, ctx)
            if result is None:
                continue  # restarted with a larger A
            C = result
            break
    except BudgetExhaustedError as e:
        ctx.trace.total_time = time.monotonic() - ctx.start
        e.trace = ctx.trace
        raise
    finally:
        deadline.disarm()
    ctx.trace.total_time = time.monotonic() - ctx.start
    group = GroupDescription(
        n=n,
        lie_algebra=ghat,
        components=tuple([ident] + [c for c in C if c != ident]),
        certified=certified,
    )
    _output_invariants(group, gens, ctx)
    return group, ctx.trace


def _component_search(A, ghat, n, ctx):
    """Step 3 BFS. Returns the coset representatives, or None to restart
    after enlarging A."""
    ident = MatrixF.identity(QQ, n)
    C = [ident]
    frontier = [ident]
    for level in range(1, ctx.config.max_bfs_length + 1):
        ctx.trace.bfs_lengths = max(ctx.trace.bfs_lengths, level)
        added = []
        for c in frontier:
            for a in A:
                ctx.check_budget()
                cand = c * a
                if any(
                    member_connected(ghat, cand * b.inverse(), ctx) for b in C
                ):
                    continue
                jp = ctx.jordan(cand)
                ok = True
                if jp.u != ident:
                    if not ghat.contains_algebra(lie_of_unipotent(jp.u)):
                        ok = False
                if ok and jp.s != ident:
                    Ls, cert = lie_of_semisimple(jp.s, ctx)
                    if not ghat.contains_algebra(Ls):
                        ok = False
                if not ok:
                    for part in (jp.s, jp.u):
                        if part != ident and part.key() not in {
                            m.key() for m in A
                        }:
                            A.append(part)
                            A.append(part.inverse())
                    return None
                C.append(cand)
                added.append(cand)
        if not added:
            return C
        frontier = added
    raise BudgetExhaustedError("BFS length budget exceeded", trace=ctx.trace)


def _output_invariants(group, gens, ctx):
    """Assertable sanity conditions on the final description."""
    ghat = group.lie_algebra
    if not ghat.is_bracket_closed():
        raise InvariantViolationError("output Lie algebra not bracket-closed")
    for g in gens:
        if conjugate_subalgebra(g, ghat) != ghat:
            raise InvariantViolationError(
                "generator does not normalize the output Lie algebra"
            )
    for i, b in enumerate(group.components):
        for b2 in group.components[i + 1 :]:
            if member_connected(ghat, b * b2.inverse(), ctx):
                raise InvariantViolationError(
                    "component representatives are not pairwise distinct"
                )
