import random

import pytest

from kaplansky.cyclerep import CycleRep, direct_sum_all, is_locally_nilpotent
from kaplansky.exactalg import GF, QQ
from kaplansky.extension import build_isomorphism
from kaplansky.filtration import InvariantTable, is_reduced, kaplansky_invariants
from kaplansky.generate import random_pointed_sum
from kaplansky.terminal import (
    NotTerminal, PropertyAViolated, TerminalError, TerminalRep, augment, canonical_cell, discrete_numbers,
    discrete_numbers_by_section, length, linear_realization, pointed_sum, validate_terminal,
)

from conftest import rep_a


def T(n, entries):
    return InvariantTable(n, entries)


def test_validate_examples():
    assert validate_terminal(TerminalRep.trivial(3)) == []
    loop = TerminalRep.from_maps(1, [["o", "a"]], ["o"], [{"a": "a"}])
    problems = validate_terminal(loop)
    assert any(p.startswith("(iii)") for p in problems)
    assert validate_terminal(canonical_cell(0, 2, 2)) == []


def test_structure_errors():
    with pytest.raises(TerminalError):
        TerminalRep.from_maps(1, [["o", "a"]], ["o"], [{"a": "zz"}])
    with pytest.raises(TerminalError):
        TerminalRep(1, [["o"]], ["o"], [["x"]])


def test_discrete_number_examples():
    for n in range(1, 4):
        for k in range(n):
            for i in range(1, 5):
                assert discrete_numbers(canonical_cell(k, i, n)) == T(n, {((k + i - 1) % n, i - 1): 1})
    assert discrete_numbers(TerminalRep.trivial(2)) == T(2, {})
    f = pointed_sum([canonical_cell(0, 1, 1), canonical_cell(0, 1, 1)])
    assert discrete_numbers(f) == T(1, {(0, 0): 2})
    with pytest.raises(NotTerminal):
        discrete_numbers(TerminalRep.from_maps(1, [["o", "a"]], ["o"], [{"a": "a"}]))


def test_augmentation_examples():
    assert augment(TerminalRep.trivial(2), 0) == canonical_cell(0, 1, 2)
    f = canonical_cell(0, 2, 3)
    g = augment(f, 2)
    assert length(g) == 3
    assert discrete_numbers(g) == T(3, {(2, 2): 1})
    # the only non-base element of X_0 maps to a non-base element of X_1
    with pytest.raises(PropertyAViolated) as err:
        augment(canonical_cell(0, 2, 2), 1)
    assert err.value.alpha == 0


def test_property_a_failure_example():
    f = canonical_cell(1, 1, 2)          # X_1 = {o, a}, X_0 = {o}
    with pytest.raises(PropertyAViolated) as err:
        augment(f, 1)                    # needs a non-base element of X_0 dying into o_1
    assert err.value.l == 1 and err.value.alpha == 0


def test_pointed_sum_examples():
    f = canonical_cell(1, 3, 2)
    s = pointed_sum([f])
    assert discrete_numbers(s) == discrete_numbers(f) and length(s) == length(f)
    assert discrete_numbers(pointed_sum([canonical_cell(0, 1, 2), canonical_cell(1, 1, 2)])) == \
        T(2, {(0, 0): 1, (1, 0): 1})
    assert length(pointed_sum([canonical_cell(0, 1, 2), canonical_cell(1, 3, 2)])) == 3
    with pytest.raises(TerminalError):
        pointed_sum([])
    with pytest.raises(TerminalError):
        pointed_sum([canonical_cell(0, 1, 2), canonical_cell(0, 1, 3)])


def test_canonical_cells():
    assert canonical_cell(0, 0, 2) == TerminalRep.trivial(2)
    u = linear_realization(canonical_cell(0, 2, 2), GF(2))
    assert u == rep_a(GF(2))
    v = linear_realization(canonical_cell(1, 1, 2), QQ)
    assert v.dims == (0, 1) and v.maps[1].is_zero()
    assert discrete_numbers(canonical_cell(1, 1, 2)) == T(2, {(1, 0): 1})


def test_realization_examples():
    assert linear_realization(TerminalRep.trivial(2), QQ) == CycleRep.zero(QQ, 2)
    f = canonical_cell(0, 3, 2)
    assert kaplansky_invariants(linear_realization(f, QQ)) == discrete_numbers(f)


@pytest.mark.parametrize("seed", range(50))
def test_random_pointed_sums(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    parts = [random_pointed_sum(rng, n, 2, 4) for _ in range(rng.randint(1, 3))]
    f = pointed_sum(parts)
    F = QQ if seed % 2 else GF(2)
    u = linear_realization(f, F)
    assert is_locally_nilpotent(u) and is_reduced(u)
    nums = discrete_numbers(f)
    assert nums == discrete_numbers_by_section(f)
    assert kaplansky_invariants(u) == nums
    total = discrete_numbers(parts[0])
    for g in parts[1:]:
        total = total + discrete_numbers(g)
    assert nums == total
    assert length(f) == max(length(g) for g in parts)
    for k in range(n):
        for j in range(u.dims[k]):
            col = u.maps[k].column(j)
            assert sum(1 for a in col if a) <= 1
    direct = direct_sum_all(F, n, [linear_realization(g, F) for g in parts])
    phi = build_isomorphism(u, direct)
    assert phi is not None and phi.is_isomorphism()
