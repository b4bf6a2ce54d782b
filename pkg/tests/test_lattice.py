"""Coinvariants, invariants, averaging: examples and well-definedness."""

from fractions import Fraction

import pytest

from rootfold.lattice import (
    MalformedAction,
    average,
    coinvariants,
    group_closure,
    invariants,
)
from rootfold.linalg import identity_matrix, mat_vec
from rootfold.rootdata import build_datum, diagram_automorphism, unitary_dual_action

SWAP = ((0, 1), (1, 0))


def test_trivial_action():
    L = coinvariants(2, [])
    assert L.free_rank == 2 and L.torsion == ()
    assert invariants(3, []) == identity_matrix(3)


def test_swap_on_z2():
    # brute-force oracle: Z^2 / <(x,y)-(y,x)> = Z via x+y
    L = coinvariants(2, [SWAP])
    assert L.free_rank == 1 and L.torsion == ()
    seen = {}
    for x in range(-3, 4):
        for y in range(-3, 4):
            cls = L.project((x, y))
            key = x + y
            if key in seen:
                assert seen[key] == cls
            else:
                seen[key] = cls
    assert len(set(seen.values())) == len(seen)


def test_sl2_style_torsion():
    # x -> -x on Z: quotient Z/2Z; oracle: cosets of 2Z
    L = coinvariants(1, [((-1,),)])
    assert L.free_rank == 0 and L.torsion == (2,)
    assert L.project((5,)) == L.project((3,))
    assert L.project((4,)) != L.project((3,))
    assert L.project((4,)) == L.project((0,))


def test_unitary_u3_torsion():
    L = coinvariants(3, [unitary_dual_action(3)])
    assert L.free_rank == 1 and L.torsion == (2,)
    # torsion class: the central cocharacter (1,1,1) minus averaging-visible part
    e = L.project((0, 1, 0))
    assert e.tors != (0,) or e.free != (0,)


def test_projection_invariance():
    for gens in ([SWAP], [unitary_dual_action(3)]):
        rank = len(gens[0])
        L = coinvariants(rank, gens)
        for g in L.group:
            for k in range(rank):
                x = tuple(1 if i == k else 0 for i in range(rank))
                assert L.project(mat_vec(g, x)) == L.project(x)


def test_average_well_defined_on_flat():
    L = coinvariants(3, [unitary_dual_action(3)])
    for x in [(1, 0, 0), (0, 1, 0), (2, -1, 3)]:
        e = L.project(x)
        # averaging the canonical lift equals averaging the original vector
        assert L.section_vector(e) == average(x, L.group) or e.tors != (0,) * 1
    # on torsion-free classes they agree exactly
    e = L.project((1, 0, 1))
    assert L.section_vector(e) == average((1, 0, 1), L.group)


def test_flat_map():
    L = coinvariants(3, [unitary_dual_action(3)])
    e = L.project((1, 2, 3))
    assert e.flat() == e.free
    # pure torsion flattens to zero
    t = L.element((0,), (1,))
    assert t.flat() == (0,)
    assert L.section_vector(t) == (Fraction(0),) * 3


def test_invariants_vs_coinvariants_rank():
    for gens in ([SWAP], [unitary_dual_action(3)], [((-1,),)]):
        rank = len(gens[0])
        L = coinvariants(rank, gens)
        inv = invariants(rank, gens)
        assert len(inv) == L.free_rank
        # averaging is a bijection between the two rational spaces:
        # sections of the free basis must span the invariant subspace
        from rootfold.linalg import gauss_solve, mat_transpose
        secs = [L.section_vector(L.element(tuple(1 if j == i else 0
                                                 for j in range(L.free_rank))))
                for i in range(L.free_rank)]
        for v in inv:
            assert gauss_solve(mat_transpose(secs), v) is not None


def test_average_examples():
    d = build_datum("A2", "adjoint")
    m = diagram_automorphism(d, (1, 0))
    grp = group_closure([m])
    # fixed vector is fixed
    assert average((1, 1), grp) == (1, 1)
    # alpha1 averages to (alpha1+alpha2)/2
    assert average((1, 0), grp) == (Fraction(1, 2), Fraction(1, 2))
    # D4 triality: orbit of an outer simple root has size 3
    d4 = build_datum("D4", "simply_connected")
    rho = diagram_automorphism(d4, (2, 1, 3, 0))
    grp3 = group_closure([rho])
    orbit = {mat_vec(g, d4.simple_roots[0]) for g in grp3}
    assert len(orbit) == 3
    avg = average(d4.simple_roots[0], grp3)
    total = tuple(sum(v[i] for v in orbit) for i in range(4))
    assert avg == tuple(Fraction(t, 3) for t in total)


def test_malformed_action():
    with pytest.raises(MalformedAction):
        group_closure([((2, 0), (0, 1))])


def test_endo_validation():
    L = coinvariants(1, [((-1,),)])
    endo = L.endo_from_matrix(((3,),))  # commutes with -1, descends mod 2
    t = L.element((), (1,))
    assert endo(t) == t
    with pytest.raises(MalformedAction):
        # does not descend: y -> 2y kills the torsion inconsistently?
        # actually 2y descends (2 mod 2 = 0); use a genuinely bad case on rank 2
        L2 = coinvariants(2, [SWAP])
        L2.endo_from_matrix(((1, 0), (0, 2)))


def test_subgroups():
    L = coinvariants(3, [unitary_dual_action(3)])
    a = L.project((1, 0, 0))
    b = L.project((0, 1, 0))
    s1 = L.subgroup([a, b])
    s2 = L.subgroup([b, a, a + b])
    assert s1 == s2
    assert a + a in s1
    zero_only = L.subgroup([])
    assert L.zero() in zero_only
    assert (a in zero_only) == a.is_zero()


def test_action_json_round_trip():
    from rootfold.lattice import action_from_json, action_to_json
    g = unitary_dual_action(3)
    data = action_to_json(3, [g])
    rank, gens = action_from_json(data)
    assert rank == 3 and gens == (g,)
    import pytest as _pytest
    with _pytest.raises(MalformedAction):
        action_from_json({"rank": 2, "generators": [[[1, 0, 0], [0, 1, 0]]]})
