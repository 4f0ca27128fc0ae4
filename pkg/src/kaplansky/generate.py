"""Seeded generators of cell multisets, nilpotent cycles and near-miss pairs."""

from __future__ import annotations

import random

from .classify import CellMultiset, realize_cells
from .cyclerep import CycleRep, fitting_split, random_basis_change
from .exactalg import FieldSpec, Matrix
from .terminal import TerminalRep, canonical_cell, pointed_sum


def parse_cells(text: str, n: int) -> CellMultiset:
    """``base:size[xcount],...``, e.g. ``0:2x3,1:1``."""
    fin: dict = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        head, _, count = item.partition("x")
        base, sep, size = head.partition(":")
        if not sep:
            raise ValueError(f"cell {item!r} should look like base:size[xcount]")
        key = (int(base) % n, int(size))
        if key[1] < 1:
            raise ValueError(f"cell {item!r} has size below 1")
        fin[key] = fin.get(key, 0) + (int(count) if count else 1)
    return CellMultiset(n, fin)


def format_cells(cells: CellMultiset) -> str:
    return ",".join(f"{b}:{i}" + (f"x{c}" if c != 1 else "") for (b, i), c in cells.finite)


def random_cells(rng: random.Random, n: int, max_total: int, max_size: int | None = None) -> CellMultiset:
    """Random finite cells whose realization has total dimension <= max_total."""
    budget = rng.randint(0, max_total)
    fin: dict = {}
    while budget > 0:
        i = rng.randint(1, min(budget, max_size or budget))
        key = (rng.randrange(n), i)
        fin[key] = fin.get(key, 0) + 1
        budget -= i
    return CellMultiset(n, fin)


def random_pointed_sum(rng: random.Random, n: int, max_cells: int = 4, max_size: int = 5) -> TerminalRep:
    cells = [canonical_cell(rng.randrange(n), rng.randint(0, max_size), n)
             for _ in range(rng.randint(1, max_cells))]
    return pointed_sum(cells)


def random_nilpotent(rng: random.Random, F: FieldSpec, n: int, max_total: int) -> CycleRep:
    """A random basis change of a random cell realization."""
    u = realize_cells(random_cells(rng, n, max_total), F)
    return random_basis_change(u, rng.randrange(2**32))[0]


def random_cycle(rng: random.Random, F: FieldSpec, n: int, max_dim: int, density: float = 0.5) -> CycleRep:
    dims = [rng.randint(0, max_dim) for _ in range(n)]
    maps = []
    for k in range(n):
        rows, cols = dims[(k + 1) % n], dims[k]
        data = tuple(tuple(F.random_element(rng) if rng.random() < density else F.zero() for _ in range(cols))
                     for _ in range(rows))
        maps.append(Matrix(F, rows, cols, data))
    return CycleRep(F, n, tuple(dims), tuple(maps))


def random_nil_part(rng: random.Random, F: FieldSpec, n: int, max_dim: int) -> CycleRep:
    """Nilpotent summand of a random cycle; exercises the Fitting split as a generator."""
    return fitting_split(random_cycle(rng, F, n, max_dim, density=rng.choice([0.3, 0.5, 0.8])))[0]


def perturb_cells(rng: random.Random, cells: CellMultiset) -> CellMultiset | None:
    """Split one cell in two, or merge two adjacent cells, keeping every dimension.

    A cell (b, i) covers vertices b .. b+i-1 once each, so (b, i) and
    (b, j) + (b+j, i-j) realize to spaces of the same dimensions while their
    tables differ.  Returns None when no move exists.
    """
    n = cells.n
    fin = dict(cells.finite)
    moves = []
    for (b, i) in fin:
        for j in range(1, i):
            moves.append(("split", (b, i), j))
    for (b, i) in fin:
        for (c, m) in fin:
            if c == (b + i) % n and ((b, i) != (c, m) or fin[(b, i)] >= 2):
                moves.append(("merge", (b, i), (c, m)))
    if not moves:
        return None
    kind, a, x = rng.choice(moves)

    def take(key):
        fin[key] -= 1

    def put(key):
        fin[key] = fin.get(key, 0) + 1

    if kind == "split":
        b, i = a
        take(a)
        put((b, x))
        put(((b + x) % n, i - x))
    else:
        take(a)
        take(x)
        put((a[0], a[1] + x[1]))
    return CellMultiset(n, fin)


def random_mismatched_pair(rng: random.Random, F: FieldSpec, n: int, max_total: int):
    """(u, v) with equal dimensions but different invariant tables, or None."""
    for _ in range(50):
        cells = random_cells(rng, n, max_total)
        other = perturb_cells(rng, cells)
        if other is not None:
            u = random_basis_change(realize_cells(cells, F), rng.randrange(2**32))[0]
            v = random_basis_change(realize_cells(other, F), rng.randrange(2**32))[0]
            return u, v
    return None
