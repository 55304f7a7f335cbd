import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from maxcurves.autgroup import GammaElement, GammaGroup, SubgroupId, UnitaryTranslation
from maxcurves.curves import INFINITY, CurveId, CurvePoint, enumerate_points, is_on_curve
from maxcurves.errors import BudgetExceeded, InfinityInput, PointNotOnCurve
from maxcurves import grouptheory as gt


def conj_via_maps(G, k, u):
    """g_zeta^k Q_{a,b} g_zeta^-k by composing explicit coordinate maps."""
    tor = G.coordinate_map(G.element(k=k))
    tor_inv = G.coordinate_map(G.element(k=-k))
    return G.map_compose(tor, G.map_compose(G.coordinate_map(GammaElement(u, 0)), tor_inv))


def expected_map(G, k, u):
    t = G.tower
    z = t.pow(G.zeta, k)
    a2 = t.mul(t.pow(z, G.qn1), u.a)
    b2 = t.mul(t.pow(z, G.m), u.b)
    return G.coordinate_map(GammaElement(UnitaryTranslation(a2, b2), 0))


def test_subgroup_orders(params):
    G = GammaGroup(params)
    for sid in SubgroupId:
        els = G.enumerate_subgroup(sid)
        assert len(els) == len(set(els)) == G.subgroup_order(sid)


def test_q_elements_by_brute_force(g213, g313):
    for G in (g213, g313):
        t, q = G.tower, G.q
        sub = t.subfield(q * q)
        brute = {(a, b) for a in sub for b in sub if t.add(t.pow(a, q), a) == t.pow(b, q + 1)}
        assert {tuple(u) for u in G.unitary_elements()} == brute
        assert all(G.is_unitary(u) for u in G.unitary_elements())


def test_center_elements_q2(g213):
    zs = g213.enumerate_subgroup(SubgroupId.Z)
    assert sorted(g.u for g in zs) == [UnitaryTranslation(0, 0), UnitaryTranslation(1, 0)]


@pytest.mark.parametrize("G", ["g213", "g313"])
def test_group_laws_exhaustive_on_q(G, request):
    G = request.getfixturevalue(G)
    qs = G.unitary_elements()
    e = UnitaryTranslation(0, 0)
    for a in qs:
        assert G.q_compose(e, a) == a == G.q_compose(a, e)
        assert G.q_compose(a, G.q_inverse(a)) == e
        for b in qs:
            assert G.is_unitary(G.q_compose(a, b))
            for c in qs:
                assert G.q_compose(G.q_compose(a, b), c) == G.q_compose(a, G.q_compose(b, c))


def test_q_is_not_abelian_iff_criterion(g213, g313):
    for G in (g213, g313):
        t, q = G.tower, G.q
        qs = G.unitary_elements()
        for x in qs:
            for y in qs:
                crit = t.mul(t.pow(x.b, q), y.b) == t.mul(t.pow(y.b, q), x.b)
                assert (G.q_compose(x, y) == G.q_compose(y, x)) == crit


def test_gamma_laws_exhaustive_213(g213):
    G = g213
    els = G.enumerate_subgroup(SubgroupId.Gamma)
    eset = set(els)
    for x in els:
        assert G.gamma_compose(x, G.gamma_inverse(x)) == G.identity
        assert G.gamma_compose(G.identity, x) == x
    rng = random.Random(1)
    for _ in range(3000):
        x, y, z = (rng.choice(els) for _ in range(3))
        xy = G.gamma_compose(x, y)
        assert xy in eset
        assert G.gamma_compose(xy, z) == G.gamma_compose(x, G.gamma_compose(y, z))


def test_closure_of_generators(g213):
    els = g213.enumerate_subgroup(SubgroupId.Gamma)
    gens = g213.generators(els)
    assert set(g213.closure(gens)) == set(els)


@pytest.mark.parametrize("G", ["g213", "g313"])
def test_twist_is_automorphism(G, request):
    G = request.getfixturevalue(G)
    qs = G.unitary_elements()
    rng = random.Random(2)
    for _ in range(2000):
        k = rng.randrange(G.torus_order)
        a, b = rng.choice(qs), rng.choice(qs)
        lhs = G.torus_twist(k, G.q_compose(a, b))
        assert lhs == G.q_compose(G.torus_twist(k, a), G.torus_twist(k, b))
        assert G.is_unitary(G.torus_twist(k, a))


def test_commutation_characterizes_m_and_n(params):
    G = GammaGroup(params)
    assert G.centralizing_exponents() == G.torus_exponents(SubgroupId.M)
    assert G.centralizing_exponents(G.center_elements()) == G.torus_exponents(SubgroupId.N)


def test_commutators_land_in_center(g213, g313):
    for G in (g213, g313):
        qs = G.enumerate_subgroup(SubgroupId.Q)
        for x, y in itertools.product(qs, qs):
            assert G.commutator(x, y).u.b == 0


def test_conjugation_law_all_triples_213(g213):
    G = g213
    for k in range(G.torus_order):
        for u in G.unitary_elements():
            assert conj_via_maps(G, k, u) == expected_map(G, k, u)


def test_conjugation_law_sampled_313(g313):
    G = g313
    qs = G.unitary_elements()
    rng = random.Random(3)
    for _ in range(2000):
        k, u = rng.randrange(G.torus_order), rng.choice(qs)
        assert conj_via_maps(G, k, u) == expected_map(G, k, u)


def test_map_composition_matches_group_law(g313):
    G = g313
    els = G.enumerate_subgroup(SubgroupId.Gamma)
    rng = random.Random(4)
    for _ in range(500):
        x, y = rng.choice(els), rng.choice(els)
        assert G.map_compose(G.coordinate_map(x), G.coordinate_map(y)) == G.coordinate_map(G.gamma_compose(x, y))


def test_action_is_group_action(g213):
    G = g213
    pts = enumerate_points(CurveId.Cn, G.params)
    els = G.enumerate_subgroup(SubgroupId.Gamma)
    for P in pts:
        assert G.act(G.identity, P) == P
    rng = random.Random(5)
    for _ in range(2000):
        x, y, P = rng.choice(els), rng.choice(els), rng.choice(pts)
        img = G.act(G.gamma_compose(x, y), P)
        assert img == G.act(x, G.act(y, P))
        assert is_on_curve(CurveId.Cn, img, G.params)
        assert G.map_apply(G.coordinate_map(x), P) == G.act(x, P)


def test_action_preserves_curve_exhaustive_213(g213):
    G = g213
    pts = enumerate_points(CurveId.Cn, G.params)
    pset = set(pts)
    for g in G.generators(G.enumerate_subgroup(SubgroupId.Gamma)):
        assert {G.act(g, P) for P in pts} == pset


def test_act_examples(g213):
    G = g213
    for u in G.unitary_elements():
        assert G.act(GammaElement(u, 0), CurvePoint(0, 0, 0)) == CurvePoint(u.a, u.b, 0)
    assert G.act(G.element(k=3), INFINITY) == INFINITY
    with pytest.raises(PointNotOnCurve):
        G.act(G.identity, CurvePoint(G.tower.primitive, 0, 0))


def test_structure_reports(g213, g313):
    q2 = g213.structure_report("Q")
    assert (q2["order"], q2["exponent"], q2["center_order"], q2["is_abelian"]) == (8, 4, 2, False)
    q3 = g313.structure_report("Q")
    assert (q3["order"], q3["exponent"], q3["center_order"], q3["is_abelian"]) == (27, 3, 3, False)
    assert 3 % q3["derived_subgroup_order"] == 0
    for G in (g213, g313):
        z = G.structure_report("Z")
        assert z["is_elementary_abelian"] and z["order"] == G.q
        quot = G.quotient_report()
        assert quot["order"] == G.q**2 and quot["is_elementary_abelian"]


def test_gamma_center(g213, g313, p215):
    # q = 3: the center is exactly M
    rep = g313.structure_report("Gamma")
    assert rep["center_order"] == 7
    center = set(g313.center(g313.enumerate_subgroup(SubgroupId.Gamma)))
    assert center == set(g313.enumerate_subgroup(SubgroupId.M))
    # q = 2: zeta^{q^n+1} = 1, so Sigma centralizes Z and the center is M x Z
    for G in (g213, GammaGroup(p215)):
        center = set(G.center(G.enumerate_subgroup(SubgroupId.Gamma)))
        mz = {G.gamma_compose(z, m) for z in G.enumerate_subgroup(SubgroupId.Z) for m in G.enumerate_subgroup(SubgroupId.M)}
        assert center == mz and len(center) == 2 * G.m


def test_gamma_center_via_permutations(g213):
    G = g213
    pts = enumerate_points(CurveId.Cn, G.params)
    perms = [G.permutation(g, pts) for g in G.generators(G.enumerate_subgroup(SubgroupId.Gamma))]
    image = gt.closure(perms)
    assert image.order == 72
    assert gt.center(image).order == 6


def test_orbit_profiles(params):
    G = GammaGroup(params)
    sizes = [o.size for o in G.orbits(SubgroupId.Gamma)]
    assert sizes == G.predicted_gamma_profile()
    assert sum(sizes) == len(enumerate_points(CurveId.Cn, params))


def test_known_orbit_profiles(g213, g313, p215):
    assert [o.size for o in g213.orbits("Gamma")] == [1, 8, 72, 72, 72]
    assert [o.size for o in g313.orbits("Gamma")] == [1, 27] + [1512] * 4
    assert [o.size for o in GammaGroup(p215).orbits("Gamma")] == [1, 8] + [264] * 15
    q_orbits = g213.orbits("Q")
    assert sorted(o.size for o in q_orbits) == [1] + [8] * 28


def test_same_gamma_orbit_matches_bfs_all_pairs(g213):
    G = g213
    pts = [P for P in enumerate_points(CurveId.Cn, G.params) if not P.infinite]
    labels = G.orbit_labels("Gamma", pts)
    for i, P in enumerate(pts):
        for j, R in enumerate(pts):
            assert G.same_gamma_orbit(P, R) == (labels[i] == labels[j])
    with pytest.raises(InfinityInput):
        G.same_gamma_orbit(INFINITY, pts[0])


def test_semiregular(params):
    G = GammaGroup(params)
    assert G.semiregular_check()
    pts = enumerate_points(CurveId.Cn, params)
    for g in G.enumerate_subgroup(SubgroupId.Q)[1:4]:
        if g != G.identity:
            assert G.fixed_points(g, pts) == 1


def test_element_orders(g213, g313):
    assert g213.exponent(g213.enumerate_subgroup("Q")) == 4
    assert g313.exponent(g313.enumerate_subgroup("Q")) == 3
    for G in (g213, g313):
        for x in G.enumerate_subgroup("Sigma"):
            d = G.element_order(x)
            assert G.gamma_pow(x, d) == G.identity


def test_budget(g313):
    with pytest.raises(BudgetExceeded):
        g313.enumerate_subgroup("Gamma", budget=100)


@given(k=st.integers(0, 10**6), i=st.integers(0, 26), j=st.integers(0, 26))
@settings(max_examples=200, deadline=None)
def test_inverse_and_twist_property_313(g313, k, i, j):
    G = g313
    qs = G.unitary_elements()
    x = GammaElement(qs[i], k % G.torus_order)
    y = GammaElement(qs[j], (k * 7 + 3) % G.torus_order)
    xy = G.gamma_compose(x, y)
    assert G.gamma_inverse(xy) == G.gamma_compose(G.gamma_inverse(y), G.gamma_inverse(x))
