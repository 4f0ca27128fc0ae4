import math
import random

import pytest

from kaplansky.cyclerep import ALEPH0, CycleRep, SaturatedPartError, direct_sum, random_basis_change
from kaplansky.exactalg import GF, QQ, Matrix, Subspace, kernel_basis, solve
from kaplansky.filtration import (
    InvariantTable, NotNilpotentError, chain, height, is_reduced, is_saturated, kaplansky_invariants,
    saturated_reduced_split,
)
from kaplansky.generate import random_nil_part, random_nilpotent
from kaplansky.ordinal import INF, Ordinal

from conftest import rep_a


def line(F=QQ):
    return Subspace.full(F, 1)


def test_chain_examples(REP_A):
    ch = chain(REP_A)
    zero = Subspace.zero(QQ, 1)
    assert [ch.at(0, a) for a in range(3)] == [line(), zero, zero]
    assert [ch.at(1, a) for a in range(3)] == [line(), line(), zero]
    assert ch.length == 2 and ch.stable == (zero, zero)
    z = chain(CycleRep.zero(QQ, 2))
    assert z.length == 0
    ones = chain(CycleRep.from_lists(QQ, [[[1]], [[1]]]))
    assert ones.length == 0 and ones.stable == (line(), line())


def test_chain_rejects_cells():
    with pytest.raises(SaturatedPartError):
        chain(CycleRep.cells_only(QQ, 1, {0: 1}))


def test_height_examples(REP_A):
    assert height(REP_A, 0, (0,)) is INF
    assert height(REP_A, 1, (1,)) == Ordinal.of(1)
    assert height(REP_A, 0, (1,)) == Ordinal.of(0)


def test_invariant_examples(REP_A, REP_B):
    assert kaplansky_invariants(REP_A) == InvariantTable(2, {(1, 1): 1})
    assert kaplansky_invariants(REP_B) == InvariantTable(2, {(0, 1): 1})
    cells = CycleRep.cells_only(QQ, 2, {0: 2})
    assert kaplansky_invariants(cells) == InvariantTable(2, {}, {0: 2})
    assert kaplansky_invariants(cells).kappa(0, INF) == 2
    with pytest.raises(NotNilpotentError):
        kaplansky_invariants(CycleRep.from_lists(QQ, [[[1]]]))


def test_reduced_saturated_examples(REP_A):
    assert is_reduced(REP_A) and not is_saturated(REP_A)
    cells = CycleRep.cells_only(QQ, 2, {0: 1})
    assert not is_reduced(cells) and is_saturated(cells)
    zero = CycleRep.zero(QQ, 2)
    assert is_reduced(zero) and is_saturated(zero)


def test_saturated_reduced_split_examples(REP_A):
    mixed = CycleRep(QQ, 2, REP_A.dims, REP_A.maps, {1: 1})
    sat, red = saturated_reduced_split(mixed)
    assert sat.saturated == ((1, 1),) and red == REP_A
    assert saturated_reduced_split(REP_A)[0].saturated == ()
    cells = CycleRep.cells_only(QQ, 2, {0: ALEPH0})
    sat, red = saturated_reduced_split(cells)
    assert sat == cells and red == CycleRep.zero(QQ, 2)
    assert kaplansky_invariants(direct_sum(sat, red)) == kaplansky_invariants(cells)


def _reps(seed):
    rng = random.Random(seed)
    F = [QQ, GF(2), GF(3)][seed % 3]
    if seed % 2:
        return F, rng, random_nil_part(rng, F, rng.randint(1, 4), 3)
    return F, rng, random_nilpotent(rng, F, rng.randint(1, 4), 9)


@pytest.mark.parametrize("seed", range(60))
def test_chain_structure(seed):
    F, rng, u = _reps(seed)
    ch = chain(u)
    assert ch.length <= sum(u.dims) + 1
    assert all(S.is_zero() for S in ch.stable)
    for k in range(u.n):
        for a in range(ch.length):
            assert ch.at(k, a + 1) <= ch.at(k, a)
            assert ch.at(k, a + 1) == ch.at(k - 1, a).image(u.M(k - 1))


@pytest.mark.parametrize("seed", range(60))
def test_eq_two_subspace_identity(seed):
    F, rng, u = _reps(seed)
    ch = chain(u)
    for k in range(u.n):
        K = kernel_basis(u.M(k))
        for a in range(ch.length + 1):
            left = ch.at(k, a) & ch.at(k + 1, a + 2).preimage(u.M(k))
            assert left == ch.at(k, a + 1) + (ch.at(k, a) & K)


@pytest.mark.parametrize("seed", range(40))
def test_additivity_and_invariance(seed):
    F, rng, u = _reps(seed)
    v = random_nilpotent(rng, F, u.n, 6)
    assert kaplansky_invariants(direct_sum(u, v)) == kaplansky_invariants(u) + kaplansky_invariants(v)
    w, _ = random_basis_change(u, seed)
    assert kaplansky_invariants(w) == kaplansky_invariants(u)


@pytest.mark.parametrize("seed", range(40))
def test_lifting(seed):
    F, rng, u = _reps(seed)
    ch = chain(u)
    for k in range(u.n):
        d = u.dims[k]
        y = tuple(F.random_element(rng) for _ in range(d))
        h = ch.height_index(k, y)
        if h == math.inf or h < 1:
            continue
        W = ch.at(k - 1, h - 1)
        imgs = [u.M(k - 1).apply(b) for b in W.basis]
        c = solve(Matrix.from_columns(F, imgs, d), y)
        assert c is not None
        x = [F.zero()] * u.dims[(k - 1) % u.n]
        for coef, b in zip(c, W.basis):
            x = [F.reduce(p + coef * q) for p, q in zip(x, b)]
        assert u.M(k - 1).apply(x) == y and ch.height_index(k - 1, x) == h - 1


def test_table_text_and_difference():
    t = InvariantTable(2, {(1, 1): 1, (0, 3): 2}, {1: ALEPH0})
    assert str(t) == "kappa 0 3 2\nkappa 1 1 1\nkappa 1 inf aleph0\n"
    assert t.first_difference(t) is None
    assert InvariantTable(2, {(1, 1): 1}).first_difference(InvariantTable(2, {(0, 1): 1})) == (1, 1, 1, 0)
    assert InvariantTable(2, {(0, 0): 0}) == InvariantTable(2)


def test_nilpotent_field_independence():
    assert kaplansky_invariants(rep_a(GF(2))).finite == kaplansky_invariants(rep_a(QQ)).finite
