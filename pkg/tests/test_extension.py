import itertools
import random

import pytest

from kaplansky.cyclerep import CycleRep, direct_sum, random_basis_change
from kaplansky.exactalg import GF, QQ, Subspace
from kaplansky.extension import (
    AlreadyPresent, CoherentGraph, HeightMismatch, InvalidGraph, NoWitness, NotAdapted, NotCaught, adapted_representative,
    build_isomorphism, extend_kernel_vector, finite_extend, is_adapted, simple_extend, super_elementary_extend,
    validate_graph,
)
from kaplansky.filtration import InvariantTable, NotNilpotentError, chain, kaplansky_invariants
from kaplansky.classify import realize_finite
from kaplansky.generate import random_mismatched_pair, random_nilpotent

from conftest import rep_a

F2 = GF(2)


def span(F, d, *vecs):
    return Subspace.span(F, d, vecs)


def test_adapted_representative_examples(REP_A):
    assert adapted_representative(REP_A, 0, (1,), Subspace.zero(QQ, 1)) == (1,)
    assert adapted_representative(REP_A, 0, (1,), Subspace.full(QQ, 1)) == (0,)
    u = direct_sum(rep_a(F2), rep_a(F2))
    r = adapted_representative(u, 1, (1, 0), span(F2, 2, (1, 1)))
    assert r in [(1, 0), (0, 1)]
    assert chain(u).height_index(1, r) == 1
    assert r == (1, 0)


def test_super_elementary_examples(REP_A, REP_B):
    G = CoherentGraph.empty(REP_A, REP_A)
    G1 = super_elementary_extend(G, 1, (1,), (1,))
    assert G1.space(1) == span(QQ, 2, (1, 1)) and G1.space(0).is_zero()
    with pytest.raises(AlreadyPresent):
        super_elementary_extend(G1, 1, (1,), (1,))
    with pytest.raises(HeightMismatch):
        super_elementary_extend(CoherentGraph.empty(REP_A, REP_B), 1, (1,), (1,))
    with pytest.raises(NotAdapted):
        super_elementary_extend(G1, 1, (2,), (0,))


def test_kernel_extension_examples(REP_A, REP_B):
    G = extend_kernel_vector(CoherentGraph.empty(REP_A, REP_A), 1, (1,))
    assert G.space(1) == span(QQ, 2, (1, 1))
    assert extend_kernel_vector(G, 1, (0,)) == G
    with pytest.raises(NoWitness):
        extend_kernel_vector(CoherentGraph.empty(REP_A, REP_B), 1, (1,))


def test_simple_extend_examples(REP_A):
    G = CoherentGraph.empty(REP_A, REP_A)
    with pytest.raises(NotCaught):
        simple_extend(G, 0, (1,))
    G1 = super_elementary_extend(G, 1, (1,), (1,))
    G2 = simple_extend(G1, 0, (1,))
    assert G2.space(0) == span(QQ, 2, (1, 1))
    assert simple_extend(G2, 0, (1,)) == G2


def test_finite_extend_examples(REP_A, REP_B):
    G = CoherentGraph.empty(REP_A, REP_A)
    assert finite_extend(G, 0, (0,)) == G
    G2 = finite_extend(G, 0, (1,))
    assert G2.space(1) == span(QQ, 2, (1, 1)) and G2.space(0) == span(QQ, 2, (1, 1))
    with pytest.raises(NoWitness):
        finite_extend(CoherentGraph.empty(REP_A, REP_B), 0, (1,))


def test_build_isomorphism_examples(REP_A, REP_B):
    phi = build_isomorphism(REP_A, REP_A)
    assert phi.is_isomorphism()
    assert build_isomorphism(REP_A, REP_B) is None
    u = realize_finite(InvariantTable(2, {(0, 1): 1, (1, 2): 2}), QQ)
    v, _ = random_basis_change(u, 11)
    assert build_isomorphism(v, u).is_isomorphism()
    with pytest.raises(NotNilpotentError):
        build_isomorphism(CycleRep.from_lists(QQ, [[[1]]]), CycleRep.from_lists(QQ, [[[1]]]))


def test_build_isomorphism_matches_cells():
    u = CycleRep.cells_only(QQ, 2, {0: 1})
    phi = build_isomorphism(u, u)
    assert phi.is_isomorphism()
    assert build_isomorphism(u, CycleRep.cells_only(QQ, 2, {1: 1})) is None


def _enumerate(F, d, A):
    vecs = list(itertools.product(range(F.p), repeat=d))
    in_a = [v for v in vecs if v in A]
    return vecs, in_a


@pytest.mark.parametrize("seed", range(40))
def test_adaptedness_characterization(seed):
    rng = random.Random(seed)
    F = GF(2) if seed % 2 else GF(3)
    u = random_nilpotent(rng, F, rng.randint(1, 3), 6)
    ch = chain(u)
    k = rng.randrange(u.n)
    d = u.dims[k]
    if d == 0:
        return
    A = Subspace.span(F, d, [tuple(F.random_element(rng) for _ in range(d)) for _ in range(rng.randint(0, 2))])
    vecs, in_a = _enumerate(F, d, A)
    heights_a = {ch.height_index(k, y) for y in in_a}
    for x in vecs:
        hx = ch.height_index(k, x)
        adapted = is_adapted(u, k, x, A)
        by_min = all(ch.height_index(k, tuple(F.reduce(a + b) for a, b in zip(x, y)))
                     == min(hx, ch.height_index(k, y)) for y in in_a)
        assert adapted == by_min
        if hx not in heights_a:
            assert adapted


@pytest.mark.parametrize("seed", range(40))
def test_iso_iff_equal_tables(seed):
    rng = random.Random(seed)
    F = [QQ, GF(2), GF(3)][seed % 3]
    n = rng.randint(1, 3)
    u = random_nilpotent(rng, F, n, 8)
    v, _ = random_basis_change(u, seed)
    phi = build_isomorphism(u, v)
    assert phi is not None and phi.is_isomorphism()
    pair = random_mismatched_pair(rng, F, n, 8)
    if pair:
        a, b = pair
        assert kaplansky_invariants(a) != kaplansky_invariants(b)
        assert build_isomorphism(a, b) is None


def test_graph_validation_catches_unequal_heights(REP_A):
    G = CoherentGraph(REP_A, REP_A, (Subspace.zero(QQ, 2), span(QQ, 2, (1, 0))))
    with pytest.raises(InvalidGraph):
        validate_graph(G)
