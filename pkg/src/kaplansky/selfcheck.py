"""Randomized property suites behind ``kaplansky selfcheck``."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Callable

from .classify import adapted_basis, decide_isomorphic, realize_cells
from .cyclerep import random_basis_change
from .exactalg import GF, QQ
from .extension import build_isomorphism
from .filtration import height, kaplansky_invariants
from .generate import random_cells, random_mismatched_pair, random_nilpotent, random_pointed_sum
from .terminal import discrete_numbers, linear_realization


def _roundtrip(rng):
    F = rng.choice([QQ, GF(2), GF(3)])
    cells = random_cells(rng, rng.randint(1, 4), 10)
    return kaplansky_invariants(realize_cells(cells, F)) == cells.table()


def _iso_found(rng):
    F = rng.choice([QQ, GF(2), GF(5)])
    u = random_nilpotent(rng, F, rng.randint(1, 3), 8)
    v, _ = random_basis_change(u, rng.randrange(2**32))
    phi = build_isomorphism(u, v)
    return phi is not None and phi.is_isomorphism()


def _mismatch_rejected(rng):
    pair = random_mismatched_pair(rng, rng.choice([QQ, GF(2)]), rng.randint(1, 3), 8)
    return pair is None or not decide_isomorphic(*pair).isomorphic


def _realization_lemma(rng):
    f = random_pointed_sum(rng, rng.randint(1, 4))
    return kaplansky_invariants(linear_realization(f, rng.choice([QQ, GF(2)]))) == discrete_numbers(f)


def _adapted(rng):
    adapted_basis(random_nilpotent(rng, rng.choice([QQ, GF(3)]), rng.randint(1, 3), 8))
    return True


def _subadditive(rng):
    F = GF(3)
    u = random_nilpotent(rng, F, rng.randint(1, 3), 8)
    k = rng.randrange(u.n)
    d = u.dims[k]
    x = [F.random_element(rng) for _ in range(d)]
    y = [F.random_element(rng) for _ in range(d)]
    hx, hy = height(u, k, x), height(u, k, y)
    hs = height(u, k, [F.reduce(a + b) for a, b in zip(x, y)])
    return hs >= min(hx, hy) and (hx == hy or hs == min(hx, hy))


SUITES: dict[str, Callable] = {
    "realize round trip": _roundtrip,
    "isomorphism of basis changes": _iso_found,
    "perturbed cells rejected": _mismatch_rejected,
    "realization lemma": _realization_lemma,
    "adapted basis": _adapted,
    "height subadditivity": _subadditive,
}


@dataclass
class SuiteResult:
    passed: int = 0
    failed: int = 0
    errors: list = dc_field(default_factory=list)


def run_selfcheck(seed: int, iters: int) -> dict[str, SuiteResult]:
    out = {}
    for i, (name, check) in enumerate(SUITES.items()):
        res = SuiteResult()
        for it in range(iters):
            rng = random.Random(f"{seed}:{i}:{it}")
            try:
                ok = check(rng)
            except Exception as exc:  # report, keep going
                ok = False
                res.errors.append(f"iteration {it}: {type(exc).__name__}: {exc}")
            if ok:
                res.passed += 1
            else:
                res.failed += 1
        out[name] = res
    return out
