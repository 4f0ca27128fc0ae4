import random

import pytest

from kaplansky.cyclerep import (
    ALEPH0, CycleRep, MorphismFamily, RepError, SaturatedPartError, compose_cycle, direct_sum, fitting_split,
    identity_morphism, is_locally_nilpotent, is_regular, local_nilindex, parse_card, random_basis_change,
    regular_iso, shift,
)
from kaplansky.exactalg import GF, QQ, Matrix
from kaplansky.generate import random_cycle

from conftest import rep_a, rep_b


def test_compose_cycle_examples(REP_A):
    assert compose_cycle(REP_A, 0) == Matrix.from_rows(QQ, [[0]])
    assert compose_cycle(CycleRep.from_lists(QQ, [[[5]]]), 0) == Matrix.from_rows(QQ, [[5]])
    I = [[1, 0], [0, 1]]
    assert compose_cycle(CycleRep.from_lists(QQ, [I, I, I]), 0) == Matrix.identity(QQ, 2)


def test_nilpotency_and_nilindex(REP_A):
    assert is_locally_nilpotent(REP_A)
    assert local_nilindex(REP_A, 0, (1,)) == 2
    assert local_nilindex(REP_A, 0, (0,)) == 0
    one = CycleRep.from_lists(QQ, [[[1]]])
    assert not is_locally_nilpotent(one)
    with pytest.raises(RepError):
        local_nilindex(one, 0, (1,))


def test_sum_and_shift(REP_A, REP_B):
    zero = CycleRep.zero(QQ, 2)
    assert direct_sum(REP_A, zero) == REP_A
    assert shift(REP_A, 0) == REP_A
    assert shift(REP_A, 1) == REP_B
    assert shift(CycleRep.cells_only(QQ, 3, {0: 2}), 1).saturated == ((1, 2),)
    with pytest.raises(RepError):
        direct_sum(REP_A, CycleRep.zero(QQ, 3))
    with pytest.raises(RepError):
        direct_sum(REP_A, rep_a(GF(2)))


def test_shape_validation():
    with pytest.raises(RepError):
        CycleRep(QQ, 2, (1, 2), (Matrix.zeros(QQ, 1, 1), Matrix.zeros(QQ, 1, 2)))


def test_cards():
    assert ALEPH0 > 10**9 and ALEPH0 + 3 is ALEPH0
    assert parse_card("inf") is ALEPH0 and parse_card("aleph0") is ALEPH0 and parse_card("4") == 4


def test_fitting_split_examples(REP_A):
    nil, reg, w = fitting_split(REP_A)
    assert nil == REP_A and reg.dims == (0, 0) and w.is_isomorphism()
    u = CycleRep.from_lists(QQ, [[[0, 0], [0, 2]]])
    nil, reg, w = fitting_split(u)
    assert nil.dims == (1,) and nil.maps[0] == Matrix.from_rows(QQ, [[0]])
    assert reg.dims == (1,) and reg.maps[0] == Matrix.from_rows(QQ, [[2]])
    ones = CycleRep.from_lists(QQ, [[[1]], [[1]]])
    nil, reg, _ = fitting_split(ones)
    assert nil.dims == (0, 0) and reg == ones


def test_fitting_split_rejects_cells():
    with pytest.raises(SaturatedPartError):
        fitting_split(CycleRep.cells_only(QQ, 1, {0: 1}))


def test_regular_iso_examples():
    u = CycleRep.from_lists(QQ, [[[2]], [[1]]])
    v = CycleRep.from_lists(QQ, [[[1]], [[2]]])
    phi = regular_iso(u, v)
    assert phi is not None and phi.is_isomorphism()
    assert regular_iso(u, u).phis == identity_morphism(u).phis
    assert regular_iso(CycleRep.from_lists(QQ, [[[2]]]), CycleRep.from_lists(QQ, [[[3]]])) is None
    with pytest.raises(RepError):
        regular_iso(rep_a(), rep_a())


def test_random_basis_change_contract(REP_A):
    zero = CycleRep.zero(QQ, 2)
    v, fam = random_basis_change(zero, 7)
    assert v == zero and all(P.rows == 0 for P in fam.phis)
    assert random_basis_change(REP_A, 3) == random_basis_change(REP_A, 3)
    v, fam = random_basis_change(REP_A, 3)
    assert fam.is_isomorphism()


@pytest.mark.parametrize("seed", range(40))
def test_cycle_identities_on_random_reps(seed):
    rng = random.Random(seed)
    F = [QQ, GF(2), GF(3)][seed % 3]
    u = random_cycle(rng, F, rng.randint(1, 4), 3)
    for k in range(u.n):
        assert compose_cycle(u, k + 1) @ u.M(k) == u.M(k) @ compose_cycle(u, k)
    for l in range(u.n):
        assert is_locally_nilpotent(shift(u, l)) == is_locally_nilpotent(u)
    nil, reg, w = fitting_split(u)
    assert w.is_isomorphism() and w.target == direct_sum(nil, reg)
    assert all(a + b == d for a, b, d in zip(nil.dims, reg.dims, u.dims))
    assert is_locally_nilpotent(nil) and is_regular(reg)
    v, fam = random_basis_change(u, seed)
    assert fam.is_isomorphism()
    assert regular_iso(reg, fitting_split(v)[1]) is not None


def test_morphism_check_is_exact(REP_A, REP_B):
    bad = MorphismFamily(REP_A, REP_B, (Matrix.identity(QQ, 1), Matrix.identity(QQ, 1)))
    assert not bad.commutes()
