"""Realization of finite invariant tables, cell decompositions, isomorphism
verdicts and adapted bases."""

from __future__ import annotations

from dataclasses import dataclass

from .cyclerep import (
    ALEPH0,
    CycleRep,
    MorphismFamily,
    RepError,
    compose_cycle,
    fitting_split,
    morphism_sum,
    regular_iso,
)
from .exactalg import FieldSpec, Matrix, invariant_factors
from .extension import build_isomorphism
from .filtration import (
    InvariantTable, NotNilpotentError, has_nilpotent_matrix_part, kaplansky_invariants, kappa_label,
)
from .ordinal import Ordinal, format_ordinal
from .terminal import canonical_cell, linear_realization, pointed_sum


class UnsupportedTransfinite(ValueError):
    pass


class Unrepresentable(ValueError):
    pass


@dataclass(frozen=True)
class CellMultiset:
    """``finite``: sorted ((base, size), count); ``infinite``: sorted (base, card)."""

    n: int
    finite: tuple = ()
    infinite: tuple = ()

    def __post_init__(self):
        fin: dict = {}
        for (b, i), c in (self.finite.items() if isinstance(self.finite, dict) else self.finite):
            if i < 1:
                raise RepError("cells have size at least 1")
            key = (b % self.n, i)
            fin[key] = fin.get(key, 0) + c
        inf = dict((b % self.n, c) for b, c in (self.infinite.items() if isinstance(self.infinite, dict)
                                                 else self.infinite))
        object.__setattr__(self, "finite", tuple(sorted((k, c) for k, c in fin.items() if c)))
        object.__setattr__(self, "infinite", tuple(sorted((k, c) for k, c in inf.items() if c)))

    def table(self) -> InvariantTable:
        """Cell (b, i) contributes kappa_{b+i-1, i-1} = 1."""
        fin = {}
        for (b, i), c in self.finite:
            key = ((b + i - 1) % self.n, Ordinal.of(i - 1))
            fin[key] = fin.get(key, 0) + c
        return InvariantTable(self.n, fin, self.infinite)


def cells_of_table(table: InvariantTable) -> CellMultiset:
    """Entry (k, a) with count c becomes c cells of base k - a and size a + 1."""
    fin = {}
    for (k, a), c in table.finite:
        if not a.is_finite():
            raise UnsupportedTransfinite(f"invariant at ordinal {format_ordinal(a)} is not finite")
        if c is ALEPH0:
            raise Unrepresentable(f"{kappa_label(k, a)} = aleph0 needs infinitely many cells")
        fin[((k - int(a)) % table.n, int(a) + 1)] = c
    return CellMultiset(table.n, fin, table.infinite)


def realize_cells(cells: CellMultiset, field: FieldSpec) -> CycleRep:
    fs = [canonical_cell(b, i, cells.n) for (b, i), c in cells.finite for _ in range(c)]
    if fs:
        u = linear_realization(pointed_sum(fs), field)
    else:
        u = CycleRep.zero(field, cells.n)
    return CycleRep(field, cells.n, u.dims, u.maps, cells.infinite)


def realize_finite(table: InvariantTable, field: FieldSpec) -> CycleRep:
    """A cycle whose invariant table is exactly ``table``, built from canonical cells."""
    return realize_cells(cells_of_table(table), field)


def decompose(u: CycleRep) -> tuple[CellMultiset, MorphismFamily]:
    """Cells of u and a verified isomorphism from u onto their realization."""
    if not has_nilpotent_matrix_part(u):
        raise NotNilpotentError("decompose needs a locally nilpotent cycle")
    cells = cells_of_table(kaplansky_invariants(u))
    iso = build_isomorphism(u, realize_cells(cells, u.field))
    assert iso is not None and iso.is_isomorphism()
    return cells, iso


# ---------------------------------------------------------------------------
# Isomorphism verdicts


@dataclass(frozen=True)
class Verdict:
    isomorphic: bool
    certificate: MorphismFamily | None = None
    reason: str = ""

    def __bool__(self):
        return self.isomorphic


def _describe_difference(tu: InvariantTable, tv: InvariantTable) -> str:
    k, a, x, y = tu.first_difference(tv)
    return f"{kappa_label(k, a)} differs: {x} vs {y}"


def _with_cells(u: CycleRep, saturated) -> CycleRep:
    return CycleRep(u.field, u.n, u.dims, u.maps, saturated)


def decide_isomorphic(u: CycleRep, v: CycleRep) -> Verdict:
    """Isomorphism test with a certificate on success and a reason on failure.

    Nilpotent inputs are compared by their invariant tables.  Otherwise both
    matrix parts are split into nilpotent and regular summands; the nilpotent
    summands go through the table test and the regular ones through
    similarity of the cycle composites.
    """
    if u.field != v.field:
        return Verdict(False, None, f"different fields: {u.field} vs {v.field}")
    if u.n != v.n:
        return Verdict(False, None, f"different cycle lengths: {u.n} vs {v.n}")
    if u.dims != v.dims:
        return Verdict(False, None, f"dimensions differ: {list(u.dims)} vs {list(v.dims)}")
    um, vm = u.matrix_part(), v.matrix_part()
    if has_nilpotent_matrix_part(um) and has_nilpotent_matrix_part(vm):
        tu, tv = kaplansky_invariants(u), kaplansky_invariants(v)
        if tu != tv:
            return Verdict(False, None, _describe_difference(tu, tv))
        return Verdict(True, build_isomorphism(u, v), "invariant tables agree")

    un, ur, wu = fitting_split(um)
    vn, vr, wv = fitting_split(vm)
    tu = kaplansky_invariants(_with_cells(un, u.saturated))
    tv = kaplansky_invariants(_with_cells(vn, v.saturated))
    if tu != tv:
        return Verdict(False, None, "nilpotent parts: " + _describe_difference(tu, tv))
    if ur.dims != vr.dims:
        return Verdict(False, None, f"regular parts have dimensions {list(ur.dims)} vs {list(vr.dims)}")
    phi_reg = regular_iso(ur, vr)
    if phi_reg is None:
        fu = ", ".join(map(str, invariant_factors(compose_cycle(ur, 0))))
        fv = ", ".join(map(str, invariant_factors(compose_cycle(vr, 0))))
        return Verdict(False, None, f"regular parts are not similar: [{fu}] vs [{fv}]")
    phi_nil = build_isomorphism(un, vn)
    inner = morphism_sum(phi_nil, phi_reg)
    phis = wu.then(inner).then(wv.inverse()).phis
    cert = MorphismFamily(u, v, phis, u.saturated)
    assert cert.is_isomorphism()
    return Verdict(True, cert, "nilpotent invariants and regular similarity classes agree")


# ---------------------------------------------------------------------------
# Adapted bases


@dataclass(frozen=True)
class AdaptedBasis:
    """``vectors[k]``: (name, coordinates) pairs; ``successor``: name -> name or None;
    ``symbolic``: (base, card) for the infinite cells, left unmaterialized."""

    n: int
    vectors: tuple
    successor: dict
    symbolic: tuple = ()

    def names(self, k: int) -> list:
        return [name for name, _ in self.vectors[k % self.n]]

    def vector(self, name: str) -> tuple:
        for per in self.vectors:
            for nm, x in per:
                if nm == name:
                    return x
        raise KeyError(name)


class InvalidAdaptedBasis(AssertionError):
    pass


def check_adapted_basis(u: CycleRep, B: AdaptedBasis) -> None:
    """Independence, spanning and successor equations, by matrix arithmetic alone."""
    F = u.field
    if B.symbolic != u.saturated:
        raise InvalidAdaptedBasis("symbolic cells do not match the saturated part")
    for k in range(u.n):
        vecs = [x for _, x in B.vectors[k]]
        if len(vecs) != u.dims[k]:
            raise InvalidAdaptedBasis(f"vertex {k}: {len(vecs)} vectors for dimension {u.dims[k]}")
        if vecs and Matrix.from_columns(F, vecs, u.dims[k]).rank() != u.dims[k]:
            raise InvalidAdaptedBasis(f"vertex {k}: vectors are dependent")
        next_names = set(B.names(k + 1))
        for name, x in B.vectors[k]:
            y = u.M(k).apply(x)
            s = B.successor[name]
            if s is None:
                if any(y):
                    raise InvalidAdaptedBasis(f"{name} should map to zero")
            elif s not in next_names or y != B.vector(s):
                raise InvalidAdaptedBasis(f"{name} does not map onto {s}")


def adapted_basis(u: CycleRep) -> AdaptedBasis:
    """Pull the standard basis of the cell realization back to u."""
    cells, iso = decompose(u)
    r = iso.target
    F = u.field
    vectors = []
    for k in range(u.n):
        inv = iso.phi(k).inverse() if u.dims[k] else Matrix.zeros(F, 0, 0)
        vectors.append(tuple((f"b{k}_{j}", inv.column(j)) for j in range(u.dims[k])))
    successor = {}
    for k in range(u.n):
        k1 = (k + 1) % u.n
        M = r.M(k)
        for j in range(u.dims[k]):
            col = M.column(j)
            hits = [i for i, a in enumerate(col) if a]
            successor[f"b{k}_{j}"] = f"b{k1}_{hits[0]}" if hits else None
    B = AdaptedBasis(u.n, tuple(vectors), successor, u.saturated)
    check_adapted_basis(u, B)
    return B


def symbolic_chain(base: int, n: int, shown: int = 3) -> str:
    """Label chain of an infinite cell of the given base: e0 <- e1 <- e2 ..."""
    return " <- ".join(f"e{i}@{(base - i) % n}" for i in range(shown)) + " <- ..."

