"""Chains U_{k,a}, heights and the cyclic Kaplansky invariants."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Sequence

from .cyclerep import ALEPH0, CycleRep, RepError, card_add, is_locally_nilpotent
from .exactalg import Matrix, Subspace, kernel_basis, quotient_dim
from .ordinal import INF, Ordinal, coerce, format_ordinal


class NotNilpotentError(RepError):
    pass


@dataclass(frozen=True)
class ChainResult:
    """``spaces[k][a]`` is U_{k,a} for a = 0 .. length; ``stable[k]`` is U_{k,inf}."""

    spaces: tuple
    length: int

    @property
    def stable(self) -> tuple:
        return tuple(s[-1] for s in self.spaces)

    def at(self, k: int, a: int) -> Subspace:
        """U_{k,a} for any finite a (constant beyond the length)."""
        s = self.spaces[k % len(self.spaces)]
        return s[min(a, len(s) - 1)]

    def height_index(self, k: int, x: Sequence) -> float | int:
        """Height of x as an int, or ``math.inf`` for vectors of the stable core."""
        s = self.spaces[k % len(self.spaces)]
        if x in s[-1]:
            return math.inf
        lo, hi = 0, len(s) - 1  # x in s[lo], x not in s[hi]
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if x in s[mid]:
                lo = mid
            else:
                hi = mid
        return lo


@lru_cache(maxsize=4096)
def chain(u: CycleRep) -> ChainResult:
    """Iterate U_{k,a+1} = M_{k-1} U_{k-1,a} until a full pass changes nothing."""
    u.require_matrix_only("chain")
    F, n = u.field, u.n
    spaces = [[Subspace.full(F, d)] for d in u.dims]
    a = 0
    while True:
        nxt = [spaces[(k - 1) % n][a].image(u.maps[(k - 1) % n]) for k in range(n)]
        if all(nxt[k] == spaces[k][a] for k in range(n)):
            break
        for k in range(n):
            spaces[k].append(nxt[k])
        a += 1
    return ChainResult(tuple(tuple(s) for s in spaces), a)


def to_height(h) -> Ordinal | object:
    return INF if h == math.inf else Ordinal.of(int(h))


def height(u: CycleRep, k: int, x: Sequence):
    """Height of x at vertex k as an Ordinal, or INF when x is in U_{k,inf}."""
    x = tuple(u.field(a) for a in x)
    return to_height(chain(u.matrix_part()).height_index(k, x))


@dataclass(frozen=True)
class InvariantTable:
    """kappa_{k,a} for finite-support (k, a) plus kappa_{k,inf}; zero entries omitted."""

    n: int
    finite: tuple = ()
    infinite: tuple = ()

    def __post_init__(self):
        fin: dict = {}
        for (k, a), c in (self.finite.items() if isinstance(self.finite, dict) else self.finite):
            key = (k % self.n, coerce(a))
            fin[key] = card_add(fin.get(key, 0), c)
        inf: dict = {}
        for k, c in (self.infinite.items() if isinstance(self.infinite, dict) else self.infinite):
            inf[k % self.n] = card_add(inf.get(k % self.n, 0), c)
        object.__setattr__(self, "finite", tuple(sorted(((k, a), c) for (k, a), c in fin.items() if c)))
        object.__setattr__(self, "infinite", tuple(sorted((k, c) for k, c in inf.items() if c)))

    def kappa(self, k: int, a) -> object:
        if a is INF:
            return dict(self.infinite).get(k % self.n, 0)
        return dict(self.finite).get((k % self.n, coerce(a)), 0)

    def entries(self) -> list:
        """(k, ordinal-or-INF, card) sorted by (k, ordinal) with INF last."""
        rows = [(k, a, c) for (k, a), c in self.finite] + [(k, INF, c) for k, c in self.infinite]
        return sorted(rows, key=lambda r: (r[0], 1 if r[1] is INF else 0, r[1] if r[1] is not INF else 0))

    def __add__(self, other: "InvariantTable") -> "InvariantTable":
        if self.n != other.n:
            raise RepError("tables for different cycle lengths")
        return InvariantTable(self.n, self.finite + other.finite, self.infinite + other.infinite)

    def first_difference(self, other: "InvariantTable"):
        """(k, a, mine, theirs) for the first differing entry, or None.

        Entries of this table are scanned first, then those only the other has.
        """
        for k, a, _ in self.entries() + other.entries():
            x, y = self.kappa(k, a), other.kappa(k, a)
            if x != y:
                return k, a, x, y
        return None

    def __str__(self):
        from .formats import write_invariants
        return write_invariants(self)


def kappa_label(k, a) -> str:
    return f"κ_{{{k},{format_ordinal(a)}}}"


def has_nilpotent_matrix_part(u: CycleRep) -> bool:
    """Same answer as is_locally_nilpotent, read off the cached chain: a finite
    cycle is nilpotent exactly when its stable core is zero."""
    return all(S.is_zero() for S in chain(u.matrix_part()).stable)


def kaplansky_invariants(u: CycleRep) -> InvariantTable:
    """All cyclic Kaplansky invariants of a locally nilpotent cycle.

    kappa_{k,a} = dim (Ker M_k ∩ U_{k,a}) / (Ker M_k ∩ U_{k,a+1}); the
    kappa_{k,inf} entries count the symbolic infinite cells of base k.
    """
    m = u.matrix_part()
    if not has_nilpotent_matrix_part(m):
        raise NotNilpotentError("Kaplansky invariants need a locally nilpotent cycle")
    ch = chain(m)
    fin = {}
    for k in range(u.n):
        K = kernel_basis(m.maps[k])
        prev = K & ch.at(k, 0)
        for a in range(ch.length):
            cur = K & ch.at(k, a + 1)
            q = quotient_dim(prev, cur)
            if q:
                fin[(k, Ordinal.of(a))] = q
            prev = cur
    # finite nilpotent data is reduced, so the matrix part adds nothing at infinity
    return InvariantTable(u.n, fin, u.saturated)


def is_reduced(u: CycleRep) -> bool:
    return not u.saturated and all(s.is_zero() for s in chain(u.matrix_part()).stable)


def is_saturated(u: CycleRep) -> bool:
    m = u.matrix_part()
    return all(s == Subspace.full(u.field, d) for s, d in zip(chain(m).stable, u.dims))


def saturated_reduced_split(u: CycleRep) -> tuple[CycleRep, CycleRep]:
    m = u.matrix_part()
    if not is_locally_nilpotent(m):
        raise NotNilpotentError("saturated/reduced split needs a locally nilpotent cycle")
    assert all(s.is_zero() for s in chain(m).stable), "nilpotent matrix part must be reduced"
    return CycleRep.cells_only(u.field, u.n, u.saturated), m
