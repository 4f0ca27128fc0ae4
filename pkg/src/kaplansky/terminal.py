"""Pointed-set cycles: chains, discrete numbers, augmentation, pointed sums, cells."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .cyclerep import CycleRep
from .exactalg import FieldSpec, Matrix
from .filtration import InvariantTable
from .ordinal import Ordinal

BASE = "o"


class TerminalError(ValueError):
    pass


class NotTerminal(TerminalError):
    pass


class PropertyAViolated(TerminalError):
    def __init__(self, l: int, alpha: int):
        super().__init__(f"property (A_{l}) fails at height {alpha}")
        self.l = l
        self.alpha = alpha


@dataclass(frozen=True)
class TerminalRep:
    """Finite pointed sets X_k with maps f_k: X_k -> X_{k+1}.

    ``elems[k]`` lists X_k (basepoint included, order fixes the realization
    basis), ``bases[k]`` is o_k and ``images[k][i]`` is f_k(elems[k][i]).
    """

    n: int
    elems: tuple
    bases: tuple
    images: tuple

    def __post_init__(self):
        if self.n < 1:
            raise TerminalError("n must be at least 1")
        elems = tuple(tuple(X) for X in self.elems)
        images = tuple(tuple(I) for I in self.images)
        object.__setattr__(self, "elems", elems)
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "bases", tuple(self.bases))
        if not len(elems) == len(self.bases) == len(images) == self.n:
            raise TerminalError(f"expected {self.n} vertices")
        for k in range(self.n):
            X, Y = elems[k], set(elems[(k + 1) % self.n])
            if len(set(X)) != len(X):
                raise TerminalError(f"vertex {k}: repeated element")
            if self.bases[k] not in X:
                raise TerminalError(f"vertex {k}: basepoint {self.bases[k]!r} missing")
            if len(images[k]) != len(X):
                raise TerminalError(f"vertex {k}: map is not total")
            for x, y in zip(X, images[k]):
                if y not in Y:
                    raise TerminalError(f"vertex {k}: {x}->{y} leaves X_{(k + 1) % self.n}")
            if self.f(k, self.bases[k]) != self.bases[(k + 1) % self.n]:
                raise TerminalError(f"vertex {k}: basepoint is not preserved")

    @classmethod
    def from_maps(cls, n: int, elems: Sequence[Sequence[str]], bases: Sequence[str],
                  maps: Sequence[Mapping[str, str]]) -> "TerminalRep":
        """Build from per-vertex dicts; unmapped basepoints go to the next basepoint."""
        images = []
        for k in range(n):
            m = dict(maps[k])
            m.setdefault(bases[k], bases[(k + 1) % n])
            missing = [x for x in elems[k] if x not in m]
            if missing:
                raise TerminalError(f"vertex {k}: no image for {missing[0]!r}")
            unknown = [x for x in m if x not in elems[k]]
            if unknown:
                raise TerminalError(f"vertex {k}: {unknown[0]!r} is not an element of X_{k}")
            images.append(tuple(m[x] for x in elems[k]))
        return cls(n, elems, bases, images)

    @classmethod
    def trivial(cls, n: int) -> "TerminalRep":
        return cls(n, ((BASE,),) * n, (BASE,) * n, ((BASE,),) * n)

    def f(self, k: int, x: str) -> str:
        k %= self.n
        return self.images[k][self.elems[k].index(x)]

    def map_dict(self, k: int) -> dict:
        k %= self.n
        return dict(zip(self.elems[k], self.images[k]))

    def nonbase(self, k: int) -> list:
        k %= self.n
        return [x for x in self.elems[k] if x != self.bases[k]]

    @property
    def size(self) -> int:
        return sum(len(X) - 1 for X in self.elems)

    def __str__(self):
        from .formats import write_terminal
        return write_terminal(self)


# ---------------------------------------------------------------------------
# Chains and heights


def set_chain(f: TerminalRep) -> tuple[list, int]:
    """(levels, length): levels[k][a] = X_{k,a}, iterated until a pass changes nothing."""
    n = f.n
    levels = [[frozenset(X)] for X in f.elems]
    a = 0
    while True:
        nxt = [frozenset(f.f(k - 1, x) for x in levels[(k - 1) % n][a]) for k in range(n)]
        if all(nxt[k] == levels[k][a] for k in range(n)):
            return levels, a
        for k in range(n):
            levels[k].append(nxt[k])
        a += 1


def length(f: TerminalRep) -> int:
    return set_chain(f)[1]


def heights(f: TerminalRep) -> list[dict]:
    """Per vertex, element -> height (an int, or math.inf on the stable core)."""
    levels, L = set_chain(f)
    out = []
    for k in range(f.n):
        h = {}
        for x in f.elems[k]:
            if x in levels[k][L]:
                h[x] = math.inf
            else:
                h[x] = max(a for a in range(L + 1) if x in levels[k][a])
        out.append(h)
    return out


def validate_terminal(f: TerminalRep) -> list[str]:
    """All violations of the two terminality conditions; empty when f is terminal."""
    problems = []
    levels, L = set_chain(f)
    for k in range(f.n):
        if levels[k][L] != {f.bases[k]}:
            extra = sorted(levels[k][L] - {f.bases[k]})
            problems.append(f"(i) vertex {k}: stable core contains {', '.join(extra)}")
    bases = set(zip(range(f.n), f.bases))
    bound = f.size + 1
    for k in range(f.n):
        for x in f.nonbase(k):
            j, y = k, x
            for _ in range(bound):
                if (j, y) in bases:
                    break
                y, j = f.f(j, y), (j + 1) % f.n
            else:
                problems.append(f"(iii) vertex {k}: orbit of {x} never reaches the basepoint")
    return problems


def require_terminal(f: TerminalRep) -> None:
    problems = validate_terminal(f)
    if problems:
        raise NotTerminal("; ".join(problems))


def discrete_numbers(f: TerminalRep) -> InvariantTable:
    """n_{k,a}(f): elements of height a whose image jumps past a+1, plus the
    surplus preimages of each element of height a+1."""
    require_terminal(f)
    h = heights(f)
    out: dict = {}
    for k in range(f.n):
        k1 = (k + 1) % f.n
        preimages: dict = {}
        for x in f.nonbase(k):
            a = h[k][x]
            y = f.f(k, x)
            if h[k1][y] > a + 1:
                out[(k, a)] = out.get((k, a), 0) + 1
            elif h[k1][y] == a + 1:
                preimages[y] = preimages.get(y, 0) + 1
        for y, c in preimages.items():
            a = h[k1][y] - 1
            out[(k, a)] = out.get((k, a), 0) + c - 1
    return InvariantTable(f.n, {(k, Ordinal.of(a)): c for (k, a), c in out.items()})


def discrete_numbers_by_section(f: TerminalRep) -> InvariantTable:
    """Same numbers counted as card(h^{-1}{a} minus Z), Z a chosen section over height a+1."""
    require_terminal(f)
    h = heights(f)
    out: dict = {}
    for k in range(f.n):
        k1 = (k + 1) % f.n
        section: dict = {}
        for x in f.nonbase(k):
            y = f.f(k, x)
            if h[k1][y] == h[k][x] + 1:
                section.setdefault(y, x)
        Z = set(section.values())
        for x in f.nonbase(k):
            if x not in Z:
                key = (k, Ordinal.of(h[k][x]))
                out[key] = out.get(key, 0) + 1
    return InvariantTable(f.n, out)


# ---------------------------------------------------------------------------
# Constructions


def property_a_failure(f: TerminalRep, l: int) -> int | None:
    """Least a < length(f) for which (A_l) fails, or None when it holds."""
    levels, L = set_chain(f)
    km = (l - 1) % f.n
    for a in range(L):
        if not any(x != f.bases[km] and f.f(km, x) == f.bases[l % f.n] for x in levels[km][a]):
            return a
    return None


def _fresh(X: Sequence[str], stem: str) -> str:
    if stem not in X:
        return stem
    i = 1
    while f"{stem}_{i}" in X:
        i += 1
    return f"{stem}_{i}"


def augment(f: TerminalRep, l: int) -> TerminalRep:
    """The augmentation at stage l: a fresh basepoint at vertex l, one level higher."""
    n = f.n
    l %= n
    bad = property_a_failure(f, l)
    if bad is not None:
        raise PropertyAViolated(l, bad)
    L = length(f)
    gamma = _fresh(f.elems[l], f"g{L}")
    elems = [list(X) for X in f.elems]
    elems[l].append(gamma)
    bases = list(f.bases)
    bases[l] = gamma
    maps = [f.map_dict(k) for k in range(n)]
    maps[(l - 1) % n][f.bases[(l - 1) % n]] = gamma
    maps[l][gamma] = bases[(l + 1) % n]
    return TerminalRep.from_maps(n, elems, bases, maps)


def pointed_sum(fs: Sequence[TerminalRep]) -> TerminalRep:
    """Disjoint union with basepoints glued; summand i's elements become '<i>.<id>'."""
    if not fs:
        raise TerminalError("pointed sum of an empty list")
    n = fs[0].n
    if any(g.n != n for g in fs):
        raise TerminalError("pointed sum of cycles of different lengths")
    elems = [[BASE] for _ in range(n)]
    maps: list[dict] = [{} for _ in range(n)]
    for i, g in enumerate(fs):
        def name(k, x, i=i, g=g):
            return BASE if x == g.bases[k % n] else f"{i}.{x}"
        for k in range(n):
            for x in g.nonbase(k):
                elems[k].append(name(k, x))
                maps[k][name(k, x)] = name(k + 1, g.f(k, x))
    return TerminalRep.from_maps(n, elems, [BASE] * n, maps)


def canonical_cell(k: int, i: int, n: int) -> TerminalRep:
    """f^{(k,i)}: i successive augmentations of the trivial rep at stages k, k+1, ..."""
    if i < 0:
        raise TerminalError("cell size must be non-negative")
    f = TerminalRep.trivial(n)
    for j in range(i):
        f = augment(f, k + j)
    return f


def linear_realization(f: TerminalRep, field: FieldSpec) -> CycleRep:
    """Free spaces on X_k minus the basepoint; e_x maps to e_{f(x)}, basepoints to 0."""
    require_terminal(f)
    n = f.n
    index = [{x: j for j, x in enumerate(f.nonbase(k))} for k in range(n)]
    dims = tuple(len(ix) for ix in index)
    maps = []
    for k in range(n):
        k1 = (k + 1) % n
        rows = [[field.zero()] * dims[k] for _ in range(dims[k1])]
        for x, j in index[k].items():
            y = f.f(k, x)
            if y != f.bases[k1]:
                rows[index[k1][y]][j] = field.one()
        maps.append(Matrix(field, dims[k1], dims[k], tuple(tuple(r) for r in rows)))
    return CycleRep(field, n, dims, tuple(maps))
