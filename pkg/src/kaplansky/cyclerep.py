"""n-cycles of linear maps over Q or F_p.

A :class:`CycleRep` carries finite matrices ``maps[k]: F^{dims[k]} -> F^{dims[k+1]}``
(indices mod n) together with a symbolic multiset of infinite Jordan
cycle-cells, recorded as ``saturated[base] = multiplicity``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from functools import total_ordering
from typing import Mapping, Sequence

from .exactalg import (
    FieldSpec,
    LinAlgError,
    Matrix,
    Subspace,
    invariant_factors,
    kernel_basis,
    similarity_transform,
)


class RepError(ValueError):
    pass


class SaturatedPartError(RepError):
    """Raised by matrix-only operations handed a rep with symbolic cells."""


@total_ordering
class _Aleph0:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("aleph0")

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __bool__(self):
        return True

    def __repr__(self):
        return "ALEPH0"

    def __str__(self):
        return "aleph0"


ALEPH0 = _Aleph0()


def card_add(a, b):
    if a is ALEPH0 or b is ALEPH0:
        return ALEPH0
    return a + b


def parse_card(text: str, inf_words=("aleph0", "inf")):
    text = text.strip()
    if text in inf_words:
        return ALEPH0
    value = int(text)
    if value < 0:
        raise ValueError(f"negative cardinal {value}")
    return value


def _normalize_saturated(saturated, n) -> tuple:
    items = saturated.items() if isinstance(saturated, Mapping) else saturated
    acc: dict[int, object] = {}
    for base, mult in items:
        if mult is not ALEPH0 and (not isinstance(mult, int) or mult < 0):
            raise RepError(f"bad saturated multiplicity {mult!r}")
        b = base % n
        acc[b] = card_add(acc.get(b, 0), mult)
    return tuple(sorted((b, m) for b, m in acc.items() if m))


@dataclass(frozen=True)
class CycleRep:
    field: FieldSpec
    n: int
    dims: tuple
    maps: tuple
    saturated: tuple = ()

    def __post_init__(self):
        if self.n < 1:
            raise RepError("a cycle needs n >= 1")
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "maps", tuple(self.maps))
        if len(self.dims) != self.n or len(self.maps) != self.n:
            raise RepError(f"expected {self.n} dimensions and maps")
        for k, M in enumerate(self.maps):
            want = (self.dims[(k + 1) % self.n], self.dims[k])
            if M.shape != want:
                raise RepError(f"map {k} has shape {M.shape}, expected {want}")
            if M.field != self.field:
                raise RepError(f"map {k} lives over {M.field}, not {self.field}")
        object.__setattr__(self, "saturated", _normalize_saturated(self.saturated, self.n))

    @classmethod
    def from_lists(cls, F: FieldSpec, maps: Sequence[Sequence[Sequence]], dims: Sequence[int] | None = None,
                   saturated=()) -> "CycleRep":
        """Build from nested lists; ``dims`` is needed only when some space is 0-dimensional."""
        n = len(maps)
        if dims is None:
            dims = [len(maps[k][0]) if maps[k] else len(maps[(k - 1) % n]) for k in range(n)]
        mats = [Matrix.from_rows(F, maps[k], dims[k]) if maps[k] else Matrix.zeros(F, dims[(k + 1) % n], dims[k])
                for k in range(n)]
        return cls(F, n, tuple(dims), tuple(mats), saturated)

    @classmethod
    def zero(cls, F: FieldSpec, n: int) -> "CycleRep":
        return cls(F, n, (0,) * n, tuple(Matrix.zeros(F, 0, 0) for _ in range(n)))

    @classmethod
    def cells_only(cls, F: FieldSpec, n: int, saturated) -> "CycleRep":
        return cls(F, n, (0,) * n, tuple(Matrix.zeros(F, 0, 0) for _ in range(n)), saturated)

    @property
    def saturated_dict(self) -> dict:
        return dict(self.saturated)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def M(self, k: int) -> Matrix:
        return self.maps[k % self.n]

    def dim(self, k: int) -> int:
        return self.dims[k % self.n]

    def matrix_part(self) -> "CycleRep":
        if not self.saturated:
            return self
        return CycleRep(self.field, self.n, self.dims, self.maps)

    def require_matrix_only(self, what: str):
        if self.saturated:
            raise SaturatedPartError(f"{what} works on the matrix part only; drop the symbolic cells first")

    def __str__(self):
        from .formats import write_cyclerep
        return write_cyclerep(self)


def compose_cycle(u: CycleRep, k: int) -> Matrix:
    """(pi u)_k = M_{k+n-1} ... M_{k+1} M_k, an endomorphism of U_k."""
    P = Matrix.identity(u.field, u.dim(k))
    for i in range(u.n):
        P = u.M(k + i) @ P
    return P


def is_locally_nilpotent(u: CycleRep) -> bool:
    d = u.dims[0]
    return (compose_cycle(u, 0) ** d).is_zero()


def local_nilindex(u: CycleRep, k: int, x: Sequence) -> int:
    if not is_locally_nilpotent(u):
        raise RepError("local nilindex is only defined for locally nilpotent cycles")
    x = tuple(u.field(a) for a in x)
    if len(x) != u.dim(k):
        raise RepError("vector does not live at this vertex")
    i = 0
    while any(x):
        x = u.M(k + i).apply(x)
        i += 1
    return i


def direct_sum(u: CycleRep, v: CycleRep) -> CycleRep:
    if u.field != v.field or u.n != v.n:
        raise RepError("direct sum needs the same field and cycle length")
    maps = tuple(Matrix.block_diag(u.field, [a, b]) for a, b in zip(u.maps, v.maps))
    dims = tuple(a + b for a, b in zip(u.dims, v.dims))
    return CycleRep(u.field, u.n, dims, maps, u.saturated + v.saturated)


def direct_sum_all(F: FieldSpec, n: int, reps: Sequence[CycleRep]) -> CycleRep:
    out = CycleRep.zero(F, n)
    for r in reps:
        out = direct_sum(out, r)
    return out


def shift(u: CycleRep, l: int) -> CycleRep:
    """Re-index so that vertex k of the result is vertex k-l of u."""
    n = u.n
    dims = tuple(u.dims[(k - l) % n] for k in range(n))
    maps = tuple(u.maps[(k - l) % n] for k in range(n))
    return CycleRep(u.field, n, dims, maps, tuple(((b + l) % n, m) for b, m in u.saturated))


# ---------------------------------------------------------------------------
# Morphisms


@dataclass(frozen=True)
class MorphismFamily:
    """Per-vertex matrices phi_k: U_k -> V_k plus the saturated-cell matching."""

    source: CycleRep
    target: CycleRep
    phis: tuple
    saturated_match: tuple = dc_field(default=())

    def phi(self, k: int) -> Matrix:
        return self.phis[k % self.source.n]

    def commutes(self) -> bool:
        u, v = self.source, self.target
        if u.n != v.n or len(self.phis) != u.n:
            return False
        for k in range(u.n):
            P = self.phis[k]
            if P.shape != (v.dims[k], u.dims[k]):
                return False
            if self.phi(k + 1) @ u.M(k) != v.M(k) @ P:
                return False
        return True

    def is_isomorphism(self) -> bool:
        return (self.commutes()
                and all(P.is_invertible() for P in self.phis)
                and self.source.saturated == self.target.saturated)

    def inverse(self) -> "MorphismFamily":
        return MorphismFamily(self.target, self.source, tuple(P.inverse() for P in self.phis),
                              self.saturated_match)

    def then(self, other: "MorphismFamily") -> "MorphismFamily":
        """Composite: apply self, then other."""
        return MorphismFamily(self.source, other.target,
                              tuple(b @ a for a, b in zip(self.phis, other.phis)), self.saturated_match)


def identity_morphism(u: CycleRep) -> MorphismFamily:
    return MorphismFamily(u, u, tuple(Matrix.identity(u.field, d) for d in u.dims), u.saturated)


def morphism_sum(f: MorphismFamily, g: MorphismFamily) -> MorphismFamily:
    F = f.source.field
    phis = tuple(Matrix.block_diag(F, [a, b]) for a, b in zip(f.phis, g.phis))
    return MorphismFamily(direct_sum(f.source, g.source), direct_sum(f.target, g.target), phis,
                          f.saturated_match + g.saturated_match)


def random_basis_change(u: CycleRep, seed: int) -> tuple[CycleRep, MorphismFamily]:
    """v_k = P_{k+1} M_k P_k^{-1} for seeded random invertible P_k."""
    rng = random.Random(seed)
    Ps = [Matrix.random_invertible(u.field, d, rng) for d in u.dims]
    n = u.n
    maps = tuple(Ps[(k + 1) % n] @ u.maps[k] @ Ps[k].inverse() for k in range(n))
    v = CycleRep(u.field, n, u.dims, maps, u.saturated)
    return v, MorphismFamily(u, v, tuple(Ps), u.saturated)


# ---------------------------------------------------------------------------
# Nilpotent / regular split


def _basis_columns(S: Subspace) -> Matrix:
    return S.matrix().transpose()


def _restrict(F: FieldSpec, M: Matrix, src: Matrix, dst: Matrix) -> Matrix:
    """Matrix X with M @ src = dst @ X, where dst has independent columns."""
    if src.cols == 0 or dst.cols == 0:
        return Matrix.zeros(F, dst.cols, src.cols)
    img = M @ src
    cols = []
    for j in range(img.cols):
        x = dst.solve(img.column(j))
        if x is None:
            raise LinAlgError("image escapes the target subspace")
        cols.append(x)
    return Matrix.from_columns(F, cols, dst.cols)


def fitting_split(u: CycleRep) -> tuple[CycleRep, CycleRep, MorphismFamily]:
    """Split into locally nilpotent and regular parts.

    U_{k,nil} = Ker (pi u)_k^{d_k} and U_{k,reg} = Im (pi u)_k^{d_k}.  The
    witness is an isomorphism from u onto ``direct_sum(u_nil, u_reg)``.
    """
    u.require_matrix_only("fitting_split")
    F, n = u.field, u.n
    nil_cols, reg_cols = [], []
    for k in range(n):
        P = compose_cycle(u, k) ** u.dims[k]
        nil_cols.append(_basis_columns(kernel_basis(P)))
        reg_cols.append(_basis_columns(Subspace.span(F, u.dims[k], P.columns())))
    nil_maps = tuple(_restrict(F, u.maps[k], nil_cols[k], nil_cols[(k + 1) % n]) for k in range(n))
    reg_maps = tuple(_restrict(F, u.maps[k], reg_cols[k], reg_cols[(k + 1) % n]) for k in range(n))
    u_nil = CycleRep(F, n, tuple(c.cols for c in nil_cols), nil_maps)
    u_reg = CycleRep(F, n, tuple(c.cols for c in reg_cols), reg_maps)
    phis = tuple(nil_cols[k].hstack(reg_cols[k]).inverse() for k in range(n))
    witness = MorphismFamily(u, direct_sum(u_nil, u_reg), phis)
    return u_nil, u_reg, witness


def is_regular(u: CycleRep) -> bool:
    return all(M.is_invertible() for M in u.maps)


def regular_iso(u: CycleRep, v: CycleRep) -> MorphismFamily | None:
    """Isomorphism of regular cycles from a similarity of (pi u)_0 and (pi v)_0, or None."""
    for w in (u, v):
        w.require_matrix_only("regular_iso")
        if not is_regular(w):
            raise RepError("regular_iso needs every map to be invertible")
    if u.field != v.field or u.n != v.n or u.dims != v.dims:
        return None
    A, B = compose_cycle(u, 0), compose_cycle(v, 0)
    if invariant_factors(A) != invariant_factors(B):
        return None
    H = similarity_transform(A, B)
    F, n = u.field, u.n
    phis = []
    fwd = Matrix.identity(F, u.dims[0])   # v_{k-1} ... v_0
    back = Matrix.identity(F, u.dims[0])  # u_0^{-1} ... u_{k-1}^{-1}
    for k in range(n):
        phis.append(fwd @ H @ back)
        fwd = v.maps[k] @ fwd
        back = back @ u.maps[k].inverse()
    return MorphismFamily(u, v, tuple(phis))
