"""Height-preserving partial isomorphisms grown one vector at a time.

A partial isomorphism between two reduced locally nilpotent cycles u and v
is stored as its graph: per vertex a subspace Gamma_k of U_k x V_k that is
stable under (M_k, M'_k) and pairs only vectors of equal height.  The
operations below enlarge such a graph until it catches a requested vector;
:func:`build_isomorphism` alternates them over bases of both sides until
the graph is the graph of an isomorphism.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import zip_longest
from typing import Sequence

from .cyclerep import CycleRep, MorphismFamily, RepError, is_locally_nilpotent
from .exactalg import Matrix, Subspace, coset_solve, solve
from .filtration import NotNilpotentError, chain, kaplansky_invariants

# Set by the test suite to re-validate every graph produced along the way.
CHECK_STEPS = False

# Number of times the limit-ordinal branch was entered; finite data never gets there.
LIMIT_BRANCH_HITS = 0


class ExtensionError(RuntimeError):
    pass


class AlreadyPresent(ExtensionError):
    pass


class HeightMismatch(ExtensionError):
    pass


class NotAdapted(ExtensionError):
    pass


class NotClosed(ExtensionError):
    """The images of the new pair are not already paired at the next vertex."""


class NotCaught(ExtensionError):
    """simple_extend was called before M_k x was caught."""


class NotInKernel(ExtensionError):
    pass


class NoWitness(ExtensionError):
    """No partner vector exists; the two cycles have different invariants."""


class LimitOrdinalUnreachable(ExtensionError):
    pass


class InvalidGraph(ExtensionError):
    pass


def _vec(u: CycleRep, x: Sequence) -> tuple:
    return tuple(u.field(a) for a in x)


def _h(u: CycleRep, k: int, x: Sequence):
    return chain(u).height_index(k, x)


def _sub(F, a, b):
    return tuple(F.reduce(p - q) for p, q in zip(a, b))


def _add(F, a, b):
    return tuple(F.reduce(p + q) for p, q in zip(a, b))


@dataclass(frozen=True)
class CoherentGraph:
    u: CycleRep
    v: CycleRep
    spaces: tuple

    @classmethod
    def empty(cls, u: CycleRep, v: CycleRep) -> "CoherentGraph":
        if u.field != v.field or u.n != v.n:
            raise RepError("graphs need two cycles over the same field and length")
        return cls(u, v, tuple(Subspace.zero(u.field, a + b) for a, b in zip(u.dims, v.dims)))

    @property
    def n(self) -> int:
        return self.u.n

    def space(self, k: int) -> Subspace:
        return self.spaces[k % self.n]

    def first_projection(self, k: int) -> Subspace:
        d = self.u.dim(k)
        return Subspace.span(self.u.field, d, [r[:d] for r in self.space(k).basis])

    def second_projection(self, k: int) -> Subspace:
        d = self.u.dim(k)
        return Subspace.span(self.u.field, self.v.dim(k), [r[d:] for r in self.space(k).basis])

    def contains(self, k: int, x: Sequence, y: Sequence) -> bool:
        return tuple(x) + tuple(y) in self.space(k)

    def partner(self, k: int, x: Sequence):
        """The y with (x, y) in Gamma_k, or None if x is not caught."""
        d = self.u.dim(k)
        G = self.space(k).basis
        if not G:
            return tuple(self.u.field.zero() for _ in range(self.v.dim(k))) if not any(x) else None
        c = solve(Matrix.from_columns(self.u.field, [g[:d] for g in G], d), x)
        if c is None:
            return None
        F = self.u.field
        y = [F.zero()] * self.v.dim(k)
        for coef, g in zip(c, G):
            if coef:
                y = [F.reduce(a + coef * b) for a, b in zip(y, g[d:])]
        return tuple(y)

    def transpose(self) -> "CoherentGraph":
        spaces = []
        for k in range(self.n):
            d = self.u.dims[k]
            spaces.append(Subspace.span(self.u.field, self.space(k).dim, [r[d:] + r[:d] for r in self.space(k).basis]))
        return CoherentGraph(self.v, self.u, tuple(spaces))

    def with_space(self, k: int, S: Subspace) -> "CoherentGraph":
        spaces = list(self.spaces)
        spaces[k % self.n] = S
        return CoherentGraph(self.u, self.v, tuple(spaces))

    def dimension(self) -> int:
        return sum(S.dimension for S in self.spaces)


def _product(F, U: Subspace, V: Subspace) -> Subspace:
    zu, zv = (F.zero(),) * U.dim, (F.zero(),) * V.dim
    return Subspace.span(F, U.dim + V.dim, [b + zv for b in U.basis] + [zu + b for b in V.basis])


def validate_graph(G: CoherentGraph) -> None:
    """Raise InvalidGraph unless G is a subrepresentation pairing equal heights.

    Coherence is checked exactly: for every chain index a (up to the common
    stable stage) Gamma_k ∩ (U_{k,a} x V_k) must equal Gamma_k ∩ (U_k x V_{k,a}).
    """
    u, v, F = G.u, G.v, G.u.field
    for k in range(G.n):
        S = G.space(k)
        d = u.dims[k]
        for r in S.basis:
            x, y = r[:d], r[d:]
            if not G.contains(k + 1, u.M(k).apply(x), v.M(k).apply(y)):
                raise InvalidGraph(f"vertex {k}: graph is not closed under the maps")
    cu, cv = chain(u), chain(v)
    top = max(cu.length, cv.length) + 1
    for k in range(G.n):
        S = G.space(k)
        fu, fv = Subspace.full(F, u.dims[k]), Subspace.full(F, v.dims[k])
        for a in range(top + 1):
            left = S & _product(F, cu.at(k, a), fv)
            right = S & _product(F, fu, cv.at(k, a))
            if left != right:
                raise InvalidGraph(f"vertex {k}: pairs of unequal height at level {a}")


def _checked(G: CoherentGraph) -> CoherentGraph:
    if CHECK_STEPS:
        validate_graph(G)
    return G


def adapted_representative(u: CycleRep, k: int, x: Sequence, A: Subspace) -> tuple:
    """A vector of x + A of maximal height.

    Candidate heights are tried from the top (the stable core, then L-1 down
    to 0); the first level W with (x + A) ∩ W nonempty wins, and the particular
    solution with zero free variables is returned.
    """
    x = _vec(u, x)
    ch = chain(u)
    levels = [ch.stable[k % u.n]] + [ch.at(k, a) for a in range(ch.length - 1, -1, -1)]
    for W in levels:
        r = coset_solve(u.field, x, A, W)
        if r is not None:
            return r
    raise AssertionError("U_{k,0} is the whole space; unreachable")


def is_adapted(u: CycleRep, k: int, x: Sequence, A: Subspace) -> bool:
    return _h(u, k, x) == _h(u, k, adapted_representative(u, k, x, A))


def super_elementary_extend(G: CoherentGraph, k: int, x: Sequence, y: Sequence) -> CoherentGraph:
    """Gamma +_k (x, y), after checking every hypothesis by name."""
    u, v = G.u, G.v
    k %= G.n
    x, y = _vec(u, x), _vec(v, y)
    if G.contains(k, x, y):
        raise AlreadyPresent(f"pair already in Gamma_{k}")
    if not is_adapted(u, k, x, G.first_projection(k)):
        raise NotAdapted(f"x is not {k}-adapted to the first projection")
    if not is_adapted(v, k, y, G.second_projection(k)):
        raise NotAdapted(f"y is not {k}-adapted to the second projection")
    hx, hy = _h(u, k, x), _h(v, k, y)
    if hx != hy:
        raise HeightMismatch(f"heights differ at vertex {k}: {hx} vs {hy}")
    if not G.contains(k + 1, u.M(k).apply(x), v.M(k).apply(y)):
        raise NotClosed(f"images of the pair are not paired at vertex {(k + 1) % G.n}")
    S = G.space(k)
    return _checked(G.with_space(k, Subspace.span(u.field, S.dim, S.basis + (x + y,))))


def extend_kernel_vector(G: CoherentGraph, k: int, x: Sequence) -> CoherentGraph:
    """Catch a kernel vector x (adapted to the first projection) by pairing it
    with a kernel vector of v of the same height lying outside the obstruction
    V_{k,a+1} + (B_{k,a} ∩ M'^{-1}_k(B_{k+1,a+2}))."""
    u, v, F = G.u, G.v, G.u.field
    k %= G.n
    x = _vec(u, x)
    if any(u.M(k).apply(x)):
        raise NotInKernel(f"x is not killed by map {k}")
    A = G.first_projection(k)
    if x in A:
        return G
    if not is_adapted(u, k, x, A):
        raise NotAdapted(f"x is not {k}-adapted to the first projection")
    alpha = _h(u, k, x)
    cv = chain(v)
    Bk = G.second_projection(k) & cv.at(k, alpha)
    Bk1 = G.second_projection(k + 1) & cv.at(k + 1, alpha + 2)
    obstruction = cv.at(k, alpha + 1) + (Bk & Bk1.preimage(v.M(k)))
    kernel = Subspace.zero(F, v.M(k).rows).preimage(v.M(k))
    candidates = kernel & cv.at(k, alpha)
    for w in candidates.basis:
        if w not in obstruction:
            return super_elementary_extend(G, k, x, w)
    raise NoWitness(f"no kernel vector of height {alpha} left at vertex {k} of the target")


def _lift(w: CycleRep, k: int, z: Sequence, level: int) -> tuple:
    """Some y in W_{k,level} with M_k y = z."""
    W = chain(w).at(k, level)
    if not W.basis:
        if not any(z):
            return tuple(w.field.zero() for _ in range(w.dim(k)))
        raise NoWitness(f"cannot lift through map {k} at height {level}")
    M = w.M(k)
    imgs = [M.apply(b) for b in W.basis]
    c = solve(Matrix.from_columns(w.field, imgs, M.rows), z)
    if c is None:
        raise NoWitness(f"cannot lift through map {k} at height {level}")
    y = tuple(w.field.zero() for _ in range(w.dim(k)))
    for coef, b in zip(c, W.basis):
        if coef:
            y = tuple(w.field.reduce(p + coef * q) for p, q in zip(y, b))
    return y


def simple_extend(G: CoherentGraph, k: int, x: Sequence) -> CoherentGraph:
    """Catch x at vertex k, given that M_k x is already caught at k+1."""
    u, v, F = G.u, G.v, G.u.field
    k %= G.n
    x = _vec(u, x)
    Mk = u.M(k)
    if Mk.apply(x) not in G.first_projection(k + 1):
        raise NotCaught(f"M_{k} x is not caught at vertex {(k + 1) % G.n}")
    A = G.first_projection(k)
    if x in A:
        return G

    # first normalization: x of maximal height in x + A
    x = adapted_representative(u, k, x, A)
    beta = _h(u, k, x)
    # second normalization: M_k x of maximal height in M_k x + M_k(A ∩ U_{k,beta})
    A_beta = A & chain(u).at(k, beta)
    C = A_beta.image(Mk)
    Mx = Mk.apply(x)
    w = adapted_representative(u, k + 1, Mx, C)
    if w != Mx:
        imgs = [Mk.apply(b) for b in A_beta.basis]
        c = solve(Matrix.from_columns(F, imgs, Mk.rows), _sub(F, w, Mx))
        for coef, b in zip(c, A_beta.basis):
            if coef:
                x = tuple(F.reduce(p + coef * q) for p, q in zip(x, b))
        Mx = w

    if not any(Mx):
        return extend_kernel_vector(G, k, x)

    alpha = _h(u, k + 1, Mx)
    if alpha == math.inf or alpha < 1:
        global LIMIT_BRANCH_HITS
        LIMIT_BRANCH_HITS += 1
        raise LimitOrdinalUnreachable(f"height {alpha} of M_{k} x is not a successor ordinal")

    z = G.partner(k + 1, Mx)
    if _h(u, k, x) == alpha - 1:
        y = _lift(v, k, z, alpha - 1)
        return super_elementary_extend(G, k, x, y)
    # h(x) < alpha - 1: first pair a lift of M_k x at height alpha - 1, then add the kernel remainder
    x2 = _lift(u, k, Mx, alpha - 1)
    y2 = _lift(v, k, z, alpha - 1)
    G2 = super_elementary_extend(G, k, x2, y2)
    return extend_kernel_vector(G2, k, _sub(F, x, x2))


def finite_extend(G: CoherentGraph, k: int, x: Sequence) -> CoherentGraph:
    """Catch x at vertex k, recursing on M_k x first (its nilindex is smaller)."""
    u = G.u
    k %= G.n
    x = _vec(u, x)
    if not any(x) or x in G.first_projection(k):
        return G
    G = finite_extend(G, k + 1, u.M(k).apply(x))
    return simple_extend(G, k, x)


def graph_to_morphism(G: CoherentGraph, source: CycleRep, target: CycleRep) -> MorphismFamily:
    F = G.u.field
    phis = []
    for k in range(G.n):
        d = G.u.dims[k]
        cols = []
        for i in range(d):
            e = tuple(F.one() if j == i else F.zero() for j in range(d))
            y = G.partner(k, e)
            if y is None:
                raise InvalidGraph(f"basis vector {i} at vertex {k} is not caught")
            cols.append(y)
        phis.append(Matrix.from_columns(F, cols, G.v.dims[k]))
    return MorphismFamily(source, target, tuple(phis), source.saturated)


def build_isomorphism(u: CycleRep, v: CycleRep) -> MorphismFamily | None:
    """An isomorphism u -> v, or None when their invariant tables differ.

    The graph is grown by the zigzag: vertices in order, basis vectors in
    index order, one vector of u then one vector of v (on the transposed
    graph), until both projections are everything.
    """
    if u.field != v.field or u.n != v.n:
        return None
    for w in (u, v):
        if not is_locally_nilpotent(w.matrix_part()):
            raise NotNilpotentError("build_isomorphism needs locally nilpotent cycles")
    if kaplansky_invariants(u) != kaplansky_invariants(v):
        return None
    um, vm = u.matrix_part(), v.matrix_part()
    F = u.field

    def basis(w):
        return [(k, tuple(F.one() if j == i else F.zero() for j in range(w.dims[k])))
                for k in range(w.n) for i in range(w.dims[k])]

    G = CoherentGraph.empty(um, vm)
    try:
        for e, f in zip_longest(basis(um), basis(vm)):
            if e is not None:
                G = finite_extend(G, *e)
            if f is not None:
                G = finite_extend(G.transpose(), *f).transpose()
    except NoWitness as exc:
        raise AssertionError(f"equal invariants but no witness: {exc}") from exc
    fam = graph_to_morphism(G, u, v)
    if not fam.is_isomorphism():
        raise AssertionError("zigzag produced a non-isomorphism")
    return fam
