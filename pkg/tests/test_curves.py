import pytest

from maxcurves.curves import (
    INFINITY,
    CurveId,
    CurvePoint,
    check_maximal,
    count_points,
    curve_params,
    curve_stats,
    enumerate_points,
    expected_count,
    genus,
    hasse_weil_bound,
    is_on_curve,
    project,
)
from maxcurves.errors import BudgetExceeded, InvalidEdge


def brute_count(params, c):
    """Direct scan of all coordinate tuples, without the fibre solvers."""
    t = params.tower
    q, m = params.q, params.m
    xq = {x: t.add(t.pow(x, q), x) for x in t.elements()}
    zm = {z: t.pow(z, m) for z in t.elements()}
    total = 1
    for y in t.elements():
        hy = t.pow(y, q + 1)
        xy = t.sub(t.pow(y, q * q), y)
        nx = sum(1 for x in t.elements() if xq[x] == hy) if c is not CurveId.Xn else 1
        nz = sum(1 for z in t.elements() if zm[z] == xy) if c is not CurveId.Hermitian else 1
        total += nx * nz
    return total


def test_params_invariants(params):
    q, m, n = params.q, params.m, params.n
    assert m * (q + 1) == q**n + 1
    assert m % params.p != 0


@pytest.mark.parametrize("c,args,g", [(CurveId.Cn, (2, 1, 3), 10), (CurveId.Hermitian, (2, 1, 3), 1), (CurveId.Xn, (2, 1, 5), 15), (CurveId.Cn, (2, 1, 5), 46), (CurveId.Cn, (3, 1, 3), 99)])
def test_genus(c, args, g):
    assert genus(c, curve_params(*args)) == g


def test_hasse_weil_examples():
    assert hasse_weil_bound(0, 8) == 65
    assert hasse_weil_bound(10, 8) == 225
    assert hasse_weil_bound(46, 32) == 3969


@pytest.mark.parametrize("c", [CurveId.Cn, CurveId.Xn, CurveId.Hermitian])
def test_count_matches_brute_force_213(p213, c):
    assert count_points(c, p213) == brute_count(p213, c)


def test_count_matches_brute_force_313(p313):
    assert count_points(CurveId.Cn, p313) == brute_count(p313, CurveId.Cn) == 6076


@pytest.mark.parametrize("args,cn,xn", [((2, 1, 3), 225, 113), ((3, 1, 3), 6076, 2026), ((2, 1, 5), 3969, 1985), ((2, 2, 3), 62465, 15617)])
def test_known_counts(args, cn, xn):
    params = curve_params(*args)
    assert count_points(CurveId.Cn, params) == cn == expected_count(CurveId.Cn, params)
    assert count_points(CurveId.Xn, params) == xn == expected_count(CurveId.Xn, params)


def test_maximality(params):
    for c in (CurveId.Cn, CurveId.Xn, CurveId.Hermitian):
        s = curve_stats(c, params)
        assert s.maximal and s.count == s.bound
        assert check_maximal(c, params)


def test_hermitian_over_quadratic_subfield(params):
    q = params.q
    pts = enumerate_points(CurveId.Hermitian, params, field_order=q * q)
    assert len(pts) == q**3 + 1 == count_points(CurveId.Hermitian, params, field_order=q * q)


def test_enumeration_is_valid(p213):
    pts = enumerate_points(CurveId.Cn, p213)
    assert len(pts) == 225 and len(set(pts)) == 225
    assert pts[-1] == INFINITY
    assert all(is_on_curve(CurveId.Cn, P, p213) for P in pts)


def test_z_zero_points_are_the_quadratic_subfield_points(p213):
    t = p213.tower
    pts = [P for P in enumerate_points(CurveId.Cn, p213) if P.infinite or P.z == 0]
    assert len(pts) == 9
    assert all(P.infinite or (t.is_in_subfield(P.x, 4) and t.is_in_subfield(P.y, 4)) for P in pts)


def test_is_on_curve_witnesses(p213):
    t = p213.tower
    assert is_on_curve(CurveId.Cn, CurvePoint(0, 0, 0), p213)
    assert is_on_curve(CurveId.Cn, CurvePoint(1, 0, 0), p213)
    g = next(v for v in t.elements() if t.add(t.pow(v, 2), v) != 0)
    assert not is_on_curve(CurveId.Cn, CurvePoint(g, 0, 0), p213)


def test_budget(p213):
    with pytest.raises(BudgetExceeded):
        enumerate_points(CurveId.Cn, p213, budget=100)


def test_fibres_of_projections(p213):
    q, m = p213.q, p213.m
    t = p213.tower
    pts = [P for P in enumerate_points(CurveId.Cn, p213) if not P.infinite]
    to_x: dict = {}
    to_h: dict = {}
    for P in pts:
        X = project(CurveId.Cn, CurveId.Xn, P, p213)
        assert is_on_curve(CurveId.Xn, X, p213)
        to_x.setdefault(X, []).append(P)
        H = project(CurveId.Cn, CurveId.Hermitian, P, p213)
        assert is_on_curve(CurveId.Hermitian, H, p213)
        to_h.setdefault(H, []).append(P)
    assert {len(v) for v in to_x.values()} == {q}
    for H, fib in to_h.items():
        if t.sub(t.pow(H.y, q * q), H.y) != 0:
            assert len(fib) == m
        else:
            assert len(fib) == 1


def test_projection_to_lines(p213):
    t = p213.tower
    q, m = p213.q, p213.m
    P = next(P for P in enumerate_points(CurveId.Cn, p213) if P.z)
    assert project(CurveId.Cn, CurveId.P1z, P, p213) == CurvePoint(P.z)
    # both routes to P1t agree
    via_z = project(CurveId.P1z, CurveId.P1t, CurvePoint(P.z), p213)
    via_y = project(CurveId.P1y, CurveId.P1t, CurvePoint(P.y), p213)
    assert via_z == via_y == CurvePoint(t.pow(P.z, m))
    via_x = project(CurveId.Hermitian, CurveId.P1w, CurvePoint(P.x, P.y), p213)
    assert via_x == CurvePoint(t.pow(P.y, q + 1))
    assert project(CurveId.Cn, CurveId.P1z, INFINITY, p213) == INFINITY


def test_invalid_edge(p213):
    with pytest.raises(InvalidEdge):
        project(CurveId.Xn, CurveId.Hermitian, CurvePoint(0, 0, 0), p213)
    with pytest.raises(InvalidEdge):
        project(CurveId.P1t, CurveId.P1z, CurvePoint(0), p213)
