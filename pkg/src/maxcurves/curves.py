"""The curves H_q, X_n, C_n and the projective lines of their cover diagram.

    H_q : x^q + x = y^{q+1}
    X_n : y^{q^2} - y = z^m,        m = (q^n + 1)/(q + 1)
    C_n : both equations at once (normalised fibre product over P^1_y)

Each of the three curves has exactly one point over y = infinity, modelled
by :data:`INFINITY`; no projective coordinates are used.  Coordinates are
integer-encoded elements of the parameter tower (see :mod:`maxcurves.field`).
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from typing import NamedTuple

from .errors import BudgetExceeded, InvalidEdge
from .field import Additive, FieldTower, build_tower

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class CurveParams:
    tower: FieldTower
    q: int
    n: int
    m: int
    full_order: int

    @property
    def p(self) -> int:
        return self.tower.p

    @property
    def h(self) -> int:
        return self.tower.h

    @property
    def qn(self) -> int:
        return self.q**self.n


@functools.lru_cache(maxsize=None)
def curve_params(p: int, h: int, n: int) -> CurveParams:
    tower = build_tower(p, h, n)
    q = tower.q
    m, rem = divmod(q**n + 1, q + 1)
    assert rem == 0 and m * (q + 1) == q**n + 1
    assert m % p != 0
    return CurveParams(tower=tower, q=q, n=n, m=m, full_order=q ** (2 * n))


class CurveId(str, enum.Enum):
    Hermitian = "Hermitian"
    Xn = "Xn"
    Cn = "Cn"
    P1y = "P1y"
    P1z = "P1z"
    P1x = "P1x"
    P1w = "P1w"
    P1t = "P1t"
    P1u = "P1u"

    @property
    def is_line(self) -> bool:
        return self.value.startswith("P1")


class CurvePoint(NamedTuple):
    """An affine point (x, y, z) or the point at infinity.

    Coordinates a curve does not use are kept at 0.  A point of one of the
    projective lines stores its single coordinate in ``x``.
    """

    x: int = 0
    y: int = 0
    z: int = 0
    infinite: bool = False

    def to_json(self, tower: FieldTower) -> list | str:
        if self.infinite:
            return "inf"
        return [tower.coeffs(self.x), tower.coeffs(self.y), tower.coeffs(self.z)]


INFINITY = CurvePoint(infinite=True)


@dataclass(frozen=True)
class CurveStats:
    curve: str
    genus: int
    count: int
    bound: int
    maximal: bool

    def to_json(self, params: CurveParams) -> dict:
        return {
            "curve": self.curve,
            "p": params.p,
            "h": params.h,
            "n": params.n,
            "genus": self.genus,
            "count": self.count,
            "bound": self.bound,
            "maximal": self.maximal,
        }


# ---------------------------------------------------------------------------
# Closed formulas
# ---------------------------------------------------------------------------


def genus(c: CurveId | str, params: CurveParams) -> int:
    c = CurveId(c)
    q, n = params.q, params.n
    if c is CurveId.Hermitian:
        return q * (q - 1) // 2
    if c is CurveId.Xn:
        return (q - 1) * (q**n - q) // 2
    if c is CurveId.Cn:
        return (q - 1) * (q ** (n + 1) + q**n - q**2) // 2
    return 0


def hasse_weil_bound(g: int, qprime: int) -> int:
    """Upper bound qprime^2 + 1 + 2*g*qprime on points over F_{qprime^2}."""
    if g < 0:
        raise ValueError("genus must be non-negative")
    return qprime * qprime + 1 + 2 * g * qprime


def expected_count(c: CurveId | str, params: CurveParams, field_order: int | None = None) -> int:
    """Closed-form point count, used as an oracle for :func:`count_points`."""
    c = CurveId(c)
    q, n = params.q, params.n
    field_order = field_order or params.full_order
    if c is CurveId.Cn and field_order == params.full_order:
        return q ** (2 * n + 2) - q ** (n + 3) + q ** (n + 2) + 1
    if c is CurveId.Xn and field_order == params.full_order:
        return q ** (2 * n + 1) - q ** (n + 2) + q ** (n + 1) + 1
    if c is CurveId.Hermitian:
        # maximal over F_{q^2}, hence over F_{q^{2n}} for odd n
        root = q if field_order == q * q else q**n
        return hasse_weil_bound(genus(c, params), root)
    if c.is_line:
        return field_order + 1
    raise ValueError(f"no closed formula for {c.value} over F_{field_order}")


# ---------------------------------------------------------------------------
# Counting and enumeration, fibrewise over y
# ---------------------------------------------------------------------------


def _y_values(c: CurveId, params: CurveParams, field_order: int | None) -> list[int] | range:
    t = params.tower
    if field_order is None or field_order == t.order:
        return t.elements()
    if c is not CurveId.Hermitian:
        raise ValueError("subfield counting is only supported for the Hermitian curve")
    if field_order != params.q**2:
        raise ValueError("Hermitian counts are supported over F_{q^2} and F_{q^{2n}} only")
    return t.subfield(field_order)


def count_points(c: CurveId | str, params: CurveParams, field_order: int | None = None) -> int:
    """Number of points (including the one at infinity) over F_{field_order}."""
    c = CurveId(c)
    t = params.tower
    q, m = params.q, params.m
    if c.is_line:
        return (field_order or t.order) + 1
    if field_order not in (None, t.order):
        return len(enumerate_points(c, params, field_order=field_order))
    total = 1
    for y in _y_values(c, params, field_order):
        nx = t.count_additive(Additive.AS_q, t.pow(y, q + 1)) if c is not CurveId.Xn else 1
        if nx == 0:
            continue
        nz = t.count_kummer(m, t.sub(t.pow(y, q * q), y)) if c is not CurveId.Hermitian else 1
        total += nx * nz
    return total


def enumerate_points(
    c: CurveId | str,
    params: CurveParams,
    field_order: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> list[CurvePoint]:
    """All rational points, affine ones ordered by (y, x, z) solution order, then INFINITY."""
    c = CurveId(c)
    if c.is_line:
        raise ValueError("enumerate_points is defined for Hermitian, Xn and Cn")
    t = params.tower
    q, m = params.q, params.m
    subfield = field_order not in (None, t.order)
    if not subfield:
        expected = count_points(c, params)
        if expected > budget:
            raise BudgetExceeded(f"{expected} points exceed budget {budget}")
    out: list[CurvePoint] = []
    for y in _y_values(c, params, field_order):
        if c is CurveId.Xn:
            xs = [0]
        else:
            xs = t.solve_additive(Additive.AS_q, t.pow(y, q + 1))
            if subfield:
                xs = [x for x in xs if t.is_in_subfield(x, field_order)]
        if not xs:
            continue
        if c is CurveId.Hermitian:
            zs = [0]
        else:
            zs = t.solve_kummer(m, t.sub(t.pow(y, q * q), y))
            if subfield:
                zs = [z for z in zs if t.is_in_subfield(z, field_order)]
        for x in xs:
            for z in zs:
                out.append(CurvePoint(x, y, z))
        if len(out) >= budget:
            raise BudgetExceeded(f"more than {budget} points")
    out.append(INFINITY)
    return out


def is_on_curve(c: CurveId | str, P: CurvePoint, params: CurveParams) -> bool:
    c = CurveId(c)
    if P.infinite or c.is_line:
        return True
    t = params.tower
    q, m = params.q, params.m
    ok = True
    if c in (CurveId.Hermitian, CurveId.Cn):
        ok = t.add(t.pow(P.x, q), P.x) == t.pow(P.y, q + 1)
    if ok and c in (CurveId.Xn, CurveId.Cn):
        ok = t.sub(t.pow(P.y, q * q), P.y) == t.pow(P.z, m)
    return ok


def curve_stats(c: CurveId | str, params: CurveParams) -> CurveStats:
    c = CurveId(c)
    g = genus(c, params)
    count = count_points(c, params)
    bound = hasse_weil_bound(g, params.qn)
    return CurveStats(curve=c.value, genus=g, count=count, bound=bound, maximal=count == bound)


def check_maximal(c: CurveId | str, params: CurveParams) -> bool:
    return curve_stats(c, params).maximal


# ---------------------------------------------------------------------------
# Projections of the cover diagram
# ---------------------------------------------------------------------------

# coordinates each source exposes
_AVAILABLE = {
    CurveId.Cn: {"x", "y", "z"},
    CurveId.Hermitian: {"x", "y"},
    CurveId.Xn: {"y", "z"},
    CurveId.P1x: {"x"},
    CurveId.P1y: {"y"},
    CurveId.P1z: {"z"},
    CurveId.P1w: set(),
    CurveId.P1t: set(),
    CurveId.P1u: set(),
}

# degree of each edge in the cover diagram; composites are allowed
DIAGRAM_EDGES = {
    (CurveId.Cn, CurveId.Xn): "q",
    (CurveId.Cn, CurveId.Hermitian): "m",
    (CurveId.Xn, CurveId.P1z): "q^2",
    (CurveId.Xn, CurveId.P1y): "m",
    (CurveId.Hermitian, CurveId.P1y): "q",
    (CurveId.Hermitian, CurveId.P1x): "q+1",
    (CurveId.P1y, CurveId.P1t): "q^2",
    (CurveId.P1y, CurveId.P1w): "q+1",
    (CurveId.P1z, CurveId.P1t): "m",
    (CurveId.P1x, CurveId.P1w): "q",
    (CurveId.P1x, CurveId.P1u): "q-1",
}


@functools.lru_cache(maxsize=None)
def _reachable(src: CurveId) -> frozenset[CurveId]:
    out: set[CurveId] = set()
    for (a, b) in DIAGRAM_EDGES:
        if a is src:
            out.add(b)
            out |= _reachable(b)
    return frozenset(out)


def project(c_from: CurveId | str, c_to: CurveId | str, P: CurvePoint, params: CurveParams) -> CurvePoint:
    """Image of P under the (possibly composite) diagram map c_from -> c_to."""
    c_from, c_to = CurveId(c_from), CurveId(c_to)
    if c_to not in _reachable(c_from):
        raise InvalidEdge(f"{c_from.value} -> {c_to.value}")
    if P.infinite:
        return INFINITY
    t = params.tower
    q, m = params.q, params.m
    if c_from.is_line:
        coords = {next(iter(_AVAILABLE[c_from])): P.x}
    else:
        coords = {k: getattr(P, k) for k in _AVAILABLE[c_from]}
    x, y, z = coords.get("x"), coords.get("y"), coords.get("z")
    if c_to is CurveId.Xn:
        return CurvePoint(0, y, z)
    if c_to is CurveId.Hermitian:
        return CurvePoint(x, y, 0)
    if c_to is CurveId.P1x:
        return CurvePoint(x)
    if c_to is CurveId.P1y:
        return CurvePoint(y)
    if c_to is CurveId.P1z:
        return CurvePoint(z)
    if c_to is CurveId.P1u:
        return CurvePoint(t.pow(x, q - 1))
    if c_to is CurveId.P1w:
        if y is not None:
            return CurvePoint(t.pow(y, q + 1))
        return CurvePoint(t.add(t.pow(x, q), x))
    if c_to is CurveId.P1t:
        if z is not None:
            return CurvePoint(t.pow(z, m))
        return CurvePoint(t.sub(t.pow(y, q * q), y))
    raise InvalidEdge(f"{c_from.value} -> {c_to.value}")  # pragma: no cover
