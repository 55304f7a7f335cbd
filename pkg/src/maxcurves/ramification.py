"""Ramification at the point at infinity of C_n and of its quotients.

Filtrations are stored as runs of constant group order in the lower
numbering.  Herbrand's functions are evaluated with exact rationals.
Valuations at P_0 = (0, 0, 0) and at P_infinity are derived as integer
identities from the ramification indices and the two curve equations, and
the filtration of Q at P_infinity is recomputed element by element from
those valuations using the uniformizer t = z^{q^{n-3}} / x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

from .autgroup import GammaElement, GammaGroup
from .curves import CurveId, CurveParams, genus
from .errors import GenusTooSmall, IncompatibleSubgroup, PrecisionTooLow, UnknownCover
from .field import FieldTower

KNOWN_COVERS = ("Cn/Xn", "Xn/P1z", "Cn/P1z", "Hq/P1y")
EXTRA_COVERS = ("Cn/Hq", "Cn/P1s")

INF = math.inf


# ---------------------------------------------------------------------------
# Filtrations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RamificationFiltration:
    """|G_i| = order for prev_end < i <= end_index, segment by segment.

    The first segment starts at i = 0; beyond the last segment G_i is trivial.
    """

    segments: tuple[tuple[int, int], ...]
    e0: int = field(default=0)

    def __post_init__(self) -> None:
        segs = tuple((int(e), int(o)) for e, o in self.segments)
        object.__setattr__(self, "segments", segs)
        if not self.e0:
            object.__setattr__(self, "e0", segs[0][1] if segs else 1)
        prev_end, prev_order = -1, None
        for end, order in segs:
            if end <= prev_end:
                raise ValueError("segment ends must be strictly increasing")
            if order < 1 or self.e0 % order:
                raise ValueError(f"order {order} does not divide e0 = {self.e0}")
            if prev_order is not None and order >= prev_order:
                raise ValueError("segment orders must be strictly decreasing")
            prev_end, prev_order = end, order
        if segs and segs[0][1] != self.e0:
            raise ValueError("first segment must have order e0 = |G_0|")

    def order_at(self, i: int) -> int:
        if i < 0:
            return self.e0
        for end, order in self.segments:
            if i <= end:
                return order
        return 1

    @property
    def lower_jumps(self) -> list[int]:
        return [end for end, _ in self.segments if self.order_at(end) != self.order_at(end + 1)]

    def intervals(self) -> list[tuple[int, int, int]]:
        """(start, end, order): G_t has this order for real t in (start, end]."""
        out, start = [], 0
        for end, order in self.segments:
            if end > start:
                out.append((start, end, order))
            start = end
        return out

    def to_json(self) -> dict:
        return {"segments": [list(s) for s in self.segments], "e0": self.e0}


TRIVIAL = RamificationFiltration(())


def known_lower_jumps(cover: str, params: CurveParams) -> list[int]:
    q, m, qn1 = params.q, params.m, params.qn + 1
    table = {
        "Cn/Xn": [qn1],
        "Xn/P1z": [m],
        "Cn/P1z": [m, qn1],
        "Hq/P1y": [q + 1],
    }
    if cover not in table:
        raise UnknownCover(cover)
    return table[cover]


def build_filtration(cover: str, params: CurveParams) -> RamificationFiltration:
    q, m, qn1 = params.q, params.m, params.qn + 1
    if cover == "Cn/P1z":
        return RamificationFiltration(((m, q**3), (qn1, q)))
    if cover == "Cn/Xn":
        return RamificationFiltration(((qn1, q),))
    if cover == "Xn/P1z":
        return RamificationFiltration(((m, q * q),))
    if cover == "Hq/P1y":
        return RamificationFiltration(((q + 1, q),))
    if cover == "Cn/P1s":
        gamma = q**3 * qn1 * (q - 1)
        return RamificationFiltration(((0, gamma), (m, q**3), (qn1, q)))
    raise UnknownCover(cover)


def different_exponent(f: RamificationFiltration) -> int:
    """sum_{i >= 0} (|G_i| - 1)."""
    total, prev_end = 0, -1
    for end, order in f.segments:
        total += (end - prev_end) * (order - 1)
        prev_end = end
    return total


# ---------------------------------------------------------------------------
# Riemann-Hurwitz
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WildBranch:
    filtration: RamificationFiltration
    count: int = 1  # ramified points on the top curve with this filtration


@dataclass(frozen=True)
class TameBranch:
    e: int
    count: int  # ramified points on the top curve


Branch = Union[WildBranch, TameBranch]


@dataclass(frozen=True)
class CoverDescription:
    name: str
    degree: int
    genus_top: int
    genus_bottom: int
    branch_points: tuple[Branch, ...]

    def different_degree(self) -> int:
        total = 0
        for b in self.branch_points:
            if isinstance(b, WildBranch):
                total += b.count * different_exponent(b.filtration)
            else:
                total += b.count * (b.e - 1)
        return total


def riemann_hurwitz_check(cover: CoverDescription) -> bool:
    lhs = 2 * cover.genus_top - 2
    rhs = cover.degree * (2 * cover.genus_bottom - 2) + cover.different_degree()
    return lhs == rhs


def cover_description(cover: str, params: CurveParams, filtration: RamificationFiltration | None = None) -> CoverDescription:
    """Degree, genera and branch data; ``filtration`` overrides the wild part."""
    q, m, qn1 = params.q, params.m, params.qn + 1
    g_c = genus(CurveId.Cn, params)
    g_x = genus(CurveId.Xn, params)
    g_h = genus(CurveId.Hermitian, params)
    if cover == "Cn/Hq":
        # tame of order m over the q^3 affine points with y in F_{q^2}, and over infinity
        return CoverDescription(cover, m, g_c, g_h, (TameBranch(m, q**3 + 1),))
    shape = {
        "Cn/Xn": (q, g_c, g_x),
        "Xn/P1z": (q * q, g_x, 0),
        "Cn/P1z": (q**3, g_c, 0),
        "Hq/P1y": (q, g_h, 0),
        "Cn/P1s": (q**3 * qn1 * (q - 1), g_c, 0),
    }
    if cover not in shape:
        raise UnknownCover(cover)
    degree, g_top, g_bottom = shape[cover]
    f = filtration if filtration is not None else build_filtration(cover, params)
    branches: list[Branch] = [WildBranch(f)]
    if cover == "Cn/P1s":
        # above s = 0: the q^3 points with z = 0, tame of order (q^n+1)(q-1)
        branches.append(TameBranch(qn1 * (q - 1), q**3))
    return CoverDescription(cover, degree, g_top, g_bottom, tuple(branches))


# ---------------------------------------------------------------------------
# Herbrand functions and quotients
# ---------------------------------------------------------------------------


def phi(u: Fraction | int, f: RamificationFiltration) -> Fraction:
    """Integral from 0 to u of |G_t| / |G_0| dt."""
    u = Fraction(u)
    if u <= 0:
        return u
    total = Fraction(0)
    start = 0
    for s, end, order in f.intervals():
        if u <= end:
            return total + (u - s) * Fraction(order, f.e0)
        total += (end - s) * Fraction(order, f.e0)
        start = end
    start = max(start, f.segments[-1][0] if f.segments else 0)
    return total + (u - start) * Fraction(1, f.e0)


def psi(v: Fraction | int, f: RamificationFiltration) -> Fraction:
    """Inverse of :func:`phi`."""
    v = Fraction(v)
    if v <= 0:
        return v
    acc = Fraction(0)
    start = 0
    for s, end, order in f.intervals():
        step = (end - s) * Fraction(order, f.e0)
        if v <= acc + step:
            return s + (v - acc) * Fraction(f.e0, order)
        acc += step
        start = end
    start = max(start, f.segments[-1][0] if f.segments else 0)
    return start + (v - acc) * f.e0


def upper_jumps(f: RamificationFiltration) -> list[Fraction]:
    return [phi(j, f) for j in f.lower_jumps]


def quotient_filtration(f: RamificationFiltration, h: RamificationFiltration) -> RamificationFiltration:
    """Lower filtration of G/H from those of G and of H (H_i = G_i meet H).

    Uses (G/H)^v = G^v H / H, so |(G/H)^v| = |G_psi(v)| / |H_psi(v)|, then
    converts the quotient's upper numbering back to its lower numbering.
    """
    ends = sorted({e for e, _ in f.segments} | {e for e, _ in h.segments})
    prev_h = None
    for i in [0] + [e + d for e in ends for d in (0, 1)]:
        g_i, h_i = f.order_at(i), h.order_at(i)
        if g_i % h_i:
            raise IncompatibleSubgroup(f"|H_{i}| = {h_i} does not divide |G_{i}| = {g_i}")
        if prev_h is not None and h_i > prev_h:
            raise IncompatibleSubgroup("H filtration is not decreasing")
        prev_h = h_i
    if h.e0 != h.order_at(0) or f.e0 % h.e0:
        raise IncompatibleSubgroup("|H_0| must divide |G_0|")

    e0 = f.e0 // h.e0
    segments: list[tuple[int, int]] = [(0, e0)]
    lower = Fraction(0)
    v_prev = Fraction(0)
    for end in ends:
        if end == 0:
            continue
        v = phi(end, f)
        order = f.order_at(end) // h.order_at(end)
        lower += (v - v_prev) * Fraction(e0, order)
        v_prev = v
        if lower.denominator != 1:
            raise IncompatibleSubgroup(f"non-integral lower break {lower}")
        if order == segments[-1][1]:
            segments[-1] = (int(lower), order)
        else:
            segments.append((int(lower), order))
    # index 0 belongs to the first run when G_0/H_0 = G_1 H/H
    if len(segments) > 1 and segments[0] == (0, e0) and segments[1][1] == e0:
        segments.pop(0)
    segments = [s for s in segments if s[1] > 1]
    if not segments:
        return TRIVIAL
    return RamificationFiltration(tuple(segments), e0)


# ---------------------------------------------------------------------------
# Valuations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ValuationTable:
    at_P0: dict[str, int]
    at_Pinf: dict[str, int]

    def to_json(self) -> dict:
        return {"P0": dict(self.at_P0), "Pinf": dict(self.at_Pinf)}


def _exact_div(a: int, b: int, what: str) -> int:
    qt, r = divmod(a, b)
    if r:
        raise ArithmeticError(f"{what}: {a} is not divisible by {b}")
    return qt


def valuation_table(params: CurveParams) -> ValuationTable:
    """Valuations of x, y, z (and t at infinity) at P_0 and P_infinity."""
    q, m, n = params.q, params.m, params.n
    if math.gcd(q, m) != 1:
        raise ArithmeticError("q and m must be coprime")
    # P_inf: total ramification over infinity_y, index lcm(q, m) = qm = degree
    e_inf = q * m // math.gcd(q, m)
    vy = -e_inf
    # x^q + x = y^{q+1} with v(x) < 0:  q v(x) = (q+1) v(y)
    vx = _exact_div((q + 1) * vy, q, "v_inf(x)")
    # z^m = y^{q^2} - y with v(y) < 0:  m v(z) = q^2 v(y)
    vz = _exact_div(q * q * vy, m, "v_inf(z)")
    vt = q ** (n - 3) * vz - vx
    # P_0: ramification index m over y = 0 (simple zero of y^{q^2} - y)
    vy0 = m
    # v(x) > 0 so v(x^q + x) = v(x)
    vx0 = (q + 1) * vy0
    vz0 = _exact_div(vy0, m, "v_0(z)")
    return ValuationTable(
        at_P0={"y": vy0, "x": vx0, "z": vz0},
        at_Pinf={"y": vy, "x": vx, "z": vz, "t": vt},
    )


def lower_index(group: GammaGroup, g: GammaElement) -> float:
    """i(g) = v_inf(g(t) - t) - 1 for g in Gamma (infinity for the identity).

    With g = (Q_{a,b}, k):  g(t)/t = c_k / (1 + (b^q e_k y + a)/(c'_k x)),
    where c_k = zeta^{k(q^{n-3} - q^n - 1)}.  If c_k != 1 the index is 0;
    otherwise g lies in Q and v(g(t) - t) = v(t) + v(b^q y + a) - v(x).
    """
    params = group.params
    tower = group.tower
    vals = valuation_table(params).at_Pinf
    if g == group.identity:
        return INF
    A = params.q ** (params.n - 3)
    lead = tower.pow(group.zeta, g.k * (A - group.qn1))
    if lead != 1:
        return 0
    if g.k % group.torus_order:
        raise ArithmeticError("non-trivial torus element with trivial tame character")
    a, b = g.u
    v_shift = vals["y"] if b != 0 else 0  # v(b^q y + a): min of v(y) < 0 and v(a) = 0
    v_diff = vals["t"] + v_shift - vals["x"]
    return v_diff - 1


def filtration_from_elements(
    elements: Sequence[GammaElement], index: Callable[[GammaElement], float]
) -> RamificationFiltration:
    """Build |G_i| = #{g : i(g) >= i} from per-element lower indices."""
    idx = sorted((index(g) for g in elements), reverse=True)
    finite = sorted({int(i) for i in idx if i != INF})
    segments = []
    for end in finite:
        order = sum(1 for i in idx if i >= end)
        segments.append((end, order))
    # merge: the run ending at `end` has order #{i(g) >= end}
    merged: list[tuple[int, int]] = []
    for end, order in segments:
        if merged and merged[-1][1] == order:
            merged[-1] = (end, order)
        else:
            merged.append((end, order))
    e0 = len(elements)
    if merged and merged[0][1] != e0:
        raise ArithmeticError("elements outside G_0")
    return RamificationFiltration(tuple(merged), e0) if merged else TRIVIAL


def intersect_filtration(
    elements: Sequence[GammaElement], subgroup: Iterable[GammaElement], index: Callable[[GammaElement], float]
) -> RamificationFiltration:
    """Filtration of H from H_i = G_i meet H."""
    sub = set(subgroup)
    return filtration_from_elements([g for g in elements if g in sub], index)


# ---------------------------------------------------------------------------
# Local expansions at P_0 in the uniformizer z
# ---------------------------------------------------------------------------


class LocalSeries:
    """Sparse truncated power series sum c_e z^e, exponents below ``precision``."""

    __slots__ = ("tower", "coeffs", "precision")

    def __init__(self, tower: FieldTower, coeffs: dict[int, int], precision: int):
        self.tower = tower
        self.precision = precision
        self.coeffs = {e: c for e, c in coeffs.items() if c and e < precision}

    @classmethod
    def monomial(cls, tower: FieldTower, exponent: int, precision: int, coeff: int = 1) -> "LocalSeries":
        return cls(tower, {exponent: coeff}, precision)

    def __add__(self, other: "LocalSeries") -> "LocalSeries":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = self.tower.add(out.get(e, 0), c)
        return LocalSeries(self.tower, out, min(self.precision, other.precision))

    def __neg__(self) -> "LocalSeries":
        return LocalSeries(self.tower, {e: self.tower.neg(c) for e, c in self.coeffs.items()}, self.precision)

    def __sub__(self, other: "LocalSeries") -> "LocalSeries":
        return self + (-other)

    def __mul__(self, other: "LocalSeries") -> "LocalSeries":
        t = self.tower
        prec = min(self.precision, other.precision)
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e < prec:
                    out[e] = t.add(out.get(e, 0), t.mul(c1, c2))
        return LocalSeries(t, out, prec)

    def frobenius_power(self, s: int) -> "LocalSeries":
        """The s-th power for s a power of p: exponents scale, coefficients go to c^s."""
        t = self.tower
        return LocalSeries(t, {e * s: t.pow(c, s) for e, c in self.coeffs.items()}, self.precision)

    def __eq__(self, other) -> bool:
        return isinstance(other, LocalSeries) and self.coeffs == other.coeffs

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def valuation(self) -> float:
        return min(self.coeffs) if self.coeffs else INF

    def terms(self) -> list[tuple[int, list[int]]]:
        return [(e, self.tower.coeffs(c)) for e, c in sorted(self.coeffs.items())]

    def __repr__(self) -> str:
        body = " + ".join(f"[{self.tower.coeffs(c)}]z^{e}" for e, c in sorted(self.coeffs.items()))
        return f"LocalSeries({body or '0'} + O(z^{self.precision}))"


@dataclass(frozen=True)
class P0Expansion:
    y_series: LocalSeries
    x_series: LocalSeries
    precision: int
    iterations: tuple[int, int]


def local_expand_P0(params: CurveParams, precision: int) -> P0Expansion:
    """y and x as power series in z at P_0, by fixed-point iteration.

    y = y^{q^2} - z^m and x = y^{q+1} - x^q; each pass multiplies the
    valuation of the correction by q^2 (resp. q), so the loop terminates.
    """
    q, m = params.q, params.m
    if precision <= params.qn + 1:
        raise PrecisionTooLow(f"precision must exceed q^n + 1 = {params.qn + 1}")
    t = params.tower
    zm = LocalSeries.monomial(t, m, precision)
    y = LocalSeries(t, {}, precision)
    y_iter = 0
    while True:
        y_next = y.frobenius_power(q * q) - zm
        y_iter += 1
        if y_next == y:
            break
        y = y_next
    y_q1 = y.frobenius_power(q) * y
    x = LocalSeries(t, {}, precision)
    x_iter = 0
    while True:
        x_next = y_q1 - x.frobenius_power(q)
        x_iter += 1
        if x_next == x:
            break
        x = x_next
    return P0Expansion(y, x, precision, (y_iter, x_iter))


def expansion_residuals(params: CurveParams, exp: P0Expansion) -> tuple[LocalSeries, LocalSeries]:
    """(y^{q^2} - y - z^m, x^q + x - y^{q+1}) truncated at the expansion precision."""
    q, m = params.q, params.m
    t = params.tower
    y, x = exp.y_series, exp.x_series
    zm = LocalSeries.monomial(t, m, exp.precision)
    r1 = y.frobenius_power(q * q) - y - zm
    r2 = x.frobenius_power(q) + x - y.frobenius_power(q) * y
    return r1, r2


# ---------------------------------------------------------------------------
# Lifting obstruction and Hurwitz comparison
# ---------------------------------------------------------------------------


def lifting_obstruction(params: CurveParams | tuple[int, int, int]) -> dict:
    """Integer bookkeeping behind the non-lifting of the involution (x, y) -> (1/x, y/x).

    ``claimed_zero_order`` is (q^{n-3} - 1)(q^3 + 1), the zero order of the
    auxiliary function at P_0 used by the argument; ``residual`` is what is
    left of the P_0 valuation identity after substituting it, and lifting is
    possible only if it vanishes.

    The pole-side identity -q^3 = -q^n + q^{n-3} - 1 + v is also solved
    directly; its solution (q^{n-3} - 1)(q^3 - 1) is reported as
    ``pole_identity_solution``.  It agrees with the claimed order only when
    n = 3, and with it the P_0 identity balances for every n
    (``residual_with_pole_solution`` is always 0).
    """
    if isinstance(params, CurveParams):
        q, n = params.q, params.n
    else:
        p, h, n = params
        q = p**h
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and at least 3")
    A = q ** (n - 3)
    qn = q**n
    claimed = (A - 1) * (q**3 + 1)
    pole_solution = -(q**3) + qn - A + 1

    def p0_residual(v0_f: int) -> int:
        # 1 = q^{2n-6} - (q^n+1)(q^{n-3}-1) + q^{n-3} v_0(f(P)) + v_0(f(w(P))),  last term 0
        return q ** (2 * n - 6) - (qn + 1) * (A - 1) + A * v0_f + 0 - 1

    residual = p0_residual(claimed)
    return {
        "q": q,
        "n": n,
        "claimed_zero_order": claimed,
        "residual": residual,
        "lifts_possible": residual == 0,
        "pole_identity_solution": pole_solution,
        "claim_matches_pole_identity": pole_solution == claimed,
        "residual_with_pole_solution": p0_residual(pole_solution),
    }


def hurwitz_ratio(params: CurveParams) -> dict:
    g = genus(CurveId.Cn, params)
    if g < 2:
        raise GenusTooSmall(g)
    q = params.q
    order = q**3 * (params.qn + 1) * (q - 1)
    bound = 84 * (g - 1)
    return {"gamma_order": order, "hurwitz_bound": bound, "ratio": Fraction(order, bound)}


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def filtration_report(cover: str, params: CurveParams) -> dict:
    f = build_filtration(cover, params)
    desc = cover_description(cover, params, f)
    return {
        "cover": cover,
        "segments": [list(s) for s in f.segments],
        "lower_jumps": f.lower_jumps,
        "upper_jumps": [frac_str(v) for v in upper_jumps(f)],
        "different": different_exponent(f),
        "rh_ok": riemann_hurwitz_check(desc),
    }
