"""Root data: construction, classification, orders, weight sets."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rootfold.lattice import MalformedAction
from rootfold.linalg import frac_vec, mat_mul, mat_transpose, mat_vec, vec_add, vec_dot
from rootfold.rootdata import (
    AutomorphismAction,
    build_datum,
    diagram_automorphism,
    gl_datum,
    parse_cartan_type,
    unitary_dual_action,
)

ROOT_COUNTS = {
    "A1": 2, "A2": 6, "A3": 12, "A4": 20, "A5": 30, "A6": 42,
    "B2": 8, "B3": 18, "B4": 32, "B5": 50, "B6": 72,
    "C3": 18, "C4": 32, "C5": 50, "C6": 60 + 12,
    "D4": 24, "D5": 40, "D6": 60,
    "E6": 72, "F4": 48, "G2": 12,
}


def test_root_counts():
    for t, n in ROOT_COUNTS.items():
        for iso in ("adjoint", "simply_connected"):
            d = build_datum(t, iso)
            assert len(d.roots) == n, (t, iso)


def test_pairing_and_closure():
    for t in ("A2", "B2", "G2", "D4"):
        d = build_datum(t, "simply_connected")
        roots = set(d.roots)
        for r, c in zip(d.roots, d.coroots):
            assert vec_dot(r, c) == 2
            for i in range(len(d.simple_roots)):
                assert d.reflect_char(i, r) in roots
        for r in d.roots:
            for c in d.coroots:
                val = vec_dot(r, c)
                assert isinstance(val, int)


def test_classification():
    for t in ("A1", "A2", "B2", "C2", "B3", "C3", "D4", "D5", "E6", "F4", "G2"):
        assert build_datum(t).classify() == t
    assert build_datum("A2xA2").classify() == "A2xA2"
    assert build_datum("A1xB2").classify() == "A1xB2"
    # deterministic factor order
    assert build_datum("B2xA1").classify() == "A1xB2"
    assert gl_datum(3).classify() == "A2"


def test_duals():
    assert build_datum("B3").dual().classify() == "C3"
    assert build_datum("C3").dual().classify() == "B3"
    assert build_datum("F4").dual().classify() == "F4"
    assert build_datum("A4").dual().classify() == "A4"
    # B2 dual is C2 with matched base order (first root short after dualizing)
    assert build_datum("B2").dual().classify() == "C2"


def test_bad_types():
    with pytest.raises(ValueError):
        build_datum("E9")
    with pytest.raises(ValueError):
        build_datum("H4")
    with pytest.raises(ValueError):
        build_datum("A0")
    with pytest.raises(ValueError):
        parse_cartan_type("")


def test_invariant_form():
    d = build_datum("B2")
    G = d.gram()

    def q(v):
        return vec_dot(frac_vec(v), mat_vec(G, frac_vec(v)))

    assert q(d.simple_roots[1]) == 2  # short
    assert q(d.simple_roots[0]) == 4  # long
    # W-invariance
    for i in range(2):
        ref = []
        n = d.rank
        for k in range(n):
            e = tuple(1 if j == k else 0 for j in range(n))
            ref.append(d.reflect_char(i, e))
        S = mat_transpose(ref)
        assert mat_mul(mat_transpose(S), mat_mul(G, S)) == G
    # A2xA2 with the factor swap: block-equal form, swap-invariant
    d2 = build_datum("A2xA2")
    swap = diagram_automorphism(d2, (2, 3, 0, 1))
    G2 = d2.gram()
    assert mat_mul(mat_transpose(swap), mat_mul(G2, swap)) == G2


def test_dominance_basics():
    d = build_datum("A2", "adjoint")
    a1, a2 = d.simple_coroots
    zero = (0, 0)
    assert d.dominance_leq(zero, vec_add(a1, a2))
    assert d.dominance_leq(a1, a1)
    assert not d.dominance_leq(a1, a2)
    assert not d.dominance_leq(vec_add(a1, a1), vec_add(a1, a2))
    # exhaustive nonnegative-combination oracle on a box
    import itertools
    for target in itertools.product(range(-2, 3), repeat=2):
        expect = False
        for c1 in range(0, 5):
            for c2 in range(0, 5):
                comb = vec_add(tuple(c1 * x for x in a1), tuple(c2 * x for x in a2))
                if comb == tuple(target):
                    expect = True
        assert d.dominance_leq(zero, target) == expect, target


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2)), min_size=3,
                max_size=3))
def test_dominance_partial_order(vs):
    d = build_datum("A2", "simply_connected")
    x, y, z = [tuple(v) for v in vs]
    leq = d.dominance_leq
    assert leq(x, x)
    if leq(x, y) and leq(y, x):
        assert x == y
    if leq(x, y) and leq(y, z):
        assert leq(x, z)


def test_weight_sets():
    d1 = build_datum("A1", "adjoint")
    assert d1.weight_set((0,)) == ((0,),)
    ws = d1.weight_set(d1.simple_coroots[0])
    assert set(ws) == {(-2,), (0,), (2,)}
    # A2: fundamental coweight is minuscule: 3-element orbit
    d2 = build_datum("A2", "adjoint")
    ws2 = d2.weight_set((1, 0))
    assert len(ws2) == 3
    assert set(ws2) == set(d2.weyl_orbit_cochar((1, 0)))
    # saturation: every dominant nu <= mu_dom lies in the set
    mu = (1, 1)
    ws3 = d2.weight_set(mu)
    for nu in ws3:
        assert d2.dominance_leq(d2.dominant_cochar(nu), mu)
        for w in ws3:
            pass
    for nu in d2.weyl_orbit_cochar((1, 1)):
        assert nu in ws3
    assert (0, 0) in ws3


def test_weyl_orbits():
    d = build_datum("B2", "simply_connected")
    reg = (3, 2)  # strictly dominant, hence regular
    assert all(vec_dot(a, reg) > 0 for a in d.simple_roots)
    assert len(d.weyl_orbit_cochar(reg)) == 8
    dom = d.dominant_cochar((-1, -1))
    assert d.is_dominant_cochar(dom)
    assert d.dominant_cochar(dom) == dom


def test_automorphism_validation():
    d = build_datum("A2", "adjoint")
    with pytest.raises(MalformedAction):
        diagram_automorphism(d, (0, 0))
    with pytest.raises(MalformedAction):
        # not a diagram automorphism of B2
        diagram_automorphism(build_datum("B2"), (1, 0))
    m = diagram_automorphism(d, (1, 0))
    act = AutomorphismAction(d, [m])
    assert act.simple_permutation(m) == (1, 0)
    assert act.order() == 2
    u = unitary_dual_action(3)
    act3 = AutomorphismAction(gl_datum(3), [u])
    assert act3.order() == 2


def test_dominant_enumeration():
    d = build_datum("A2", "adjoint")
    mus = d.dominant_cochars_up_to(4)
    assert all(d.is_dominant_cochar(m) for m in mus)
    assert all(d.two_rho_pairing(m) <= 4 for m in mus)
    assert (0, 0) in mus and (1, 0) in mus
    g = gl_datum(2)
    mus2 = g.dominant_cochars_up_to(2, central_box=1)
    assert (1, 0) in mus2 and (1, 1) in mus2 and (0, 0) in mus2


def test_json_round_trip():
    from rootfold.rootdata import BasedRootDatum
    d = gl_datum(3)
    d2 = BasedRootDatum.from_json(d.to_json())
    assert d2.simple_roots == d.simple_roots
    assert d2.roots == d.roots
