"""The group Gamma = Q x| Sigma acting on C_n, and its distinguished subgroups.

Elements of Q are pairs (a, b) in F_{q^2} with a^q + a = b^{q+1}; they act by

    x -> x + b^q y + a,   y -> y + b,   z -> z.

Sigma is cyclic of order (q^n+1)(q-1), generated by g_zeta for the fixed
primitive root zeta of that order:

    x -> zeta^{q^n+1} x,   y -> zeta^m y,   z -> zeta z.

A Gamma element is stored as (u, k) meaning "apply g_zeta^k, then u"; with
that convention g_zeta^k u g_zeta^-k = twist(k, u) and

    (u1, k1)(u2, k2) = (u1 . twist(k1, u2), k1 + k2).
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence, TypeVar

from sympy import isprime

from .curves import INFINITY, CurveId, CurveParams, CurvePoint, enumerate_points, is_on_curve
from .errors import BudgetExceeded, InfinityInput, PointNotOnCurve
from .field import Additive

T = TypeVar("T")

DEFAULT_BUDGET = 10**6


class UnitaryTranslation(NamedTuple):
    a: int
    b: int


class GammaElement(NamedTuple):
    u: UnitaryTranslation
    k: int  # exponent of zeta, taken mod (q^n+1)(q-1)


class SubgroupId(str, enum.Enum):
    Q = "Q"
    Z = "Z"
    Sigma = "Sigma"
    M = "M"
    N = "N"
    Gamma = "Gamma"
    QxM = "QxM"
    ZxN = "ZxN"


class TriangularMap(NamedTuple):
    """x -> alpha x + beta y + gamma,  y -> delta y + eps,  z -> lam z."""

    alpha: int
    beta: int
    gamma: int
    delta: int
    eps: int
    lam: int


@dataclass(frozen=True)
class Orbit:
    size: int
    representative: CurvePoint


def closure(generators: Sequence[T], compose: Callable[[T, T], T], identity: T, budget: int = DEFAULT_BUDGET) -> list[T]:
    """All products of the generators, in BFS order starting at the identity."""
    seen = {identity}
    order = [identity]
    queue = deque([identity])
    while queue:
        g = queue.popleft()
        for s in generators:
            h = compose(g, s)
            if h not in seen:
                seen.add(h)
                order.append(h)
                queue.append(h)
                if len(order) > budget:
                    raise BudgetExceeded(f"closure exceeds {budget} elements")
    return order


def greedy_generators(elements: Sequence[T], compose: Callable[[T, T], T], identity: T) -> list[T]:
    """A small generating set: repeatedly add the first element not yet generated."""
    gens: list[T] = []
    span = {identity}
    for g in elements:
        if g not in span:
            gens.append(g)
            span = set(closure(gens, compose, identity, budget=len(elements)))
            if len(span) == len(elements):
                break
    return gens


class GammaGroup:
    """Exact arithmetic in Gamma for one parameter set."""

    def __init__(self, params: CurveParams):
        self.params = params
        t = self.tower = params.tower
        q, n, m = params.q, params.n, params.m
        self.q, self.m = q, m
        self.qn1 = q**n + 1
        self.torus_order = self.qn1 * (q - 1)
        self.zeta = t.root_of_unity(self.torus_order)
        zpow = [1] * self.torus_order
        for k in range(1, self.torus_order):
            zpow[k] = t.mul(zpow[k - 1], self.zeta)
        self._zpow = zpow
        self.identity = GammaElement(UnitaryTranslation(0, 0), 0)
        self._q2 = set(t.subfield(q * q))

    # -- Q ----------------------------------------------------------------

    def is_unitary(self, u: UnitaryTranslation) -> bool:
        t, q = self.tower, self.q
        if u.a not in self._q2 or u.b not in self._q2:
            return False
        return t.add(t.pow(u.a, q), u.a) == t.pow(u.b, q + 1)

    def q_compose(self, g1: UnitaryTranslation, g2: UnitaryTranslation) -> UnitaryTranslation:
        """Q_{a,b} Q_{c,d} = Q_{a + c + b^q d, b + d}."""
        t = self.tower
        a, b = g1
        c, d = g2
        return UnitaryTranslation(t.add(t.add(a, c), t.mul(t.pow(b, self.q), d)), t.add(b, d))

    def q_inverse(self, g: UnitaryTranslation) -> UnitaryTranslation:
        t = self.tower
        return UnitaryTranslation(t.pow(g.a, self.q), t.neg(g.b))

    def torus_twist(self, k: int, g: UnitaryTranslation) -> UnitaryTranslation:
        """g_zeta^k Q_{a,b} g_zeta^-k = Q_{zeta^{k(q^n+1)} a, zeta^{km} b}."""
        t = self.tower
        k %= self.torus_order
        ca = self._zpow[(k * self.qn1) % self.torus_order]
        cb = self._zpow[(k * self.m) % self.torus_order]
        return UnitaryTranslation(t.mul(ca, g.a), t.mul(cb, g.b))

    # -- Gamma ------------------------------------------------------------

    def element(self, a: int = 0, b: int = 0, k: int = 0) -> GammaElement:
        return GammaElement(UnitaryTranslation(a, b), k % self.torus_order)

    def gamma_compose(self, x: GammaElement, y: GammaElement) -> GammaElement:
        u = self.q_compose(x.u, self.torus_twist(x.k, y.u))
        return GammaElement(u, (x.k + y.k) % self.torus_order)

    def gamma_inverse(self, x: GammaElement) -> GammaElement:
        k = (-x.k) % self.torus_order
        return GammaElement(self.torus_twist(k, self.q_inverse(x.u)), k)

    def gamma_pow(self, x: GammaElement, e: int) -> GammaElement:
        if e < 0:
            x, e = self.gamma_inverse(x), -e
        result = self.identity
        while e:
            if e & 1:
                result = self.gamma_compose(result, x)
            x = self.gamma_compose(x, x)
            e >>= 1
        return result

    def element_order(self, x: GammaElement) -> int:
        d = self.torus_order // math.gcd(x.k, self.torus_order)
        y = self.gamma_pow(x, d)  # lies in Q
        order = d
        while y != self.identity:
            y = self.gamma_compose(y, self.gamma_pow(x, d))
            order += d
        return order

    def commutator(self, x: GammaElement, y: GammaElement) -> GammaElement:
        """x^-1 y^-1 x y."""
        c = self.gamma_compose
        return c(c(self.gamma_inverse(x), self.gamma_inverse(y)), c(x, y))

    def commutes(self, x: GammaElement, y: GammaElement) -> bool:
        return self.gamma_compose(x, y) == self.gamma_compose(y, x)

    # -- action -----------------------------------------------------------

    def act(self, g: GammaElement, P: CurvePoint, check: bool = True) -> CurvePoint:
        if P.infinite:
            return INFINITY
        if check and not is_on_curve(CurveId.Cn, P, self.params):
            raise PointNotOnCurve(P)
        t = self.tower
        k = g.k
        x = t.mul(self._zpow[(k * self.qn1) % self.torus_order], P.x)
        y = t.mul(self._zpow[(k * self.m) % self.torus_order], P.y)
        z = t.mul(self._zpow[k], P.z)
        a, b = g.u
        x = t.add(t.add(x, t.mul(t.pow(b, self.q), y)), a)
        return CurvePoint(x, t.add(y, b), z)

    def coordinate_map(self, g: GammaElement) -> TriangularMap:
        """The action of g as explicit coordinate substitutions.

        Powers of zeta are recomputed here rather than read from the cached
        table so that map composition is an independent route to the group law.
        """
        t = self.tower
        zk = t.pow(self.zeta, g.k)
        ca = t.pow(zk, self.qn1)
        cb = t.pow(zk, self.m)
        a, b = g.u
        return TriangularMap(ca, t.mul(t.pow(b, self.q), cb), a, cb, b, zk)

    def map_compose(self, f: TriangularMap, g: TriangularMap) -> TriangularMap:
        """f after g."""
        t = self.tower
        add, mul = t.add, t.mul
        return TriangularMap(
            alpha=mul(f.alpha, g.alpha),
            beta=add(mul(f.alpha, g.beta), mul(f.beta, g.delta)),
            gamma=add(add(mul(f.alpha, g.gamma), mul(f.beta, g.eps)), f.gamma),
            delta=mul(f.delta, g.delta),
            eps=add(mul(f.delta, g.eps), f.eps),
            lam=mul(f.lam, g.lam),
        )

    def map_apply(self, f: TriangularMap, P: CurvePoint) -> CurvePoint:
        if P.infinite:
            return INFINITY
        t = self.tower
        x = t.add(t.add(t.mul(f.alpha, P.x), t.mul(f.beta, P.y)), f.gamma)
        return CurvePoint(x, t.add(t.mul(f.delta, P.y), f.eps), t.mul(f.lam, P.z))

    # -- subgroups --------------------------------------------------------

    def subgroup_order(self, sid: SubgroupId | str) -> int:
        sid = SubgroupId(sid)
        q3 = self.q**3
        return {
            SubgroupId.Q: q3,
            SubgroupId.Z: self.q,
            SubgroupId.Sigma: self.torus_order,
            SubgroupId.M: self.m,
            SubgroupId.N: self.qn1,
            SubgroupId.Gamma: q3 * self.torus_order,
            SubgroupId.QxM: q3 * self.m,
            SubgroupId.ZxN: self.q * self.qn1,
        }[sid]

    def unitary_elements(self) -> list[UnitaryTranslation]:
        t, q = self.tower, self.q
        out = []
        for b in t.subfield(q * q):
            for a in t.solve_additive(Additive.AS_q, t.pow(b, q + 1)):
                if a in self._q2:
                    out.append(UnitaryTranslation(a, b))
        return out

    def center_elements(self) -> list[UnitaryTranslation]:
        return [u for u in self.unitary_elements() if u.b == 0]

    def torus_exponents(self, sid: SubgroupId) -> list[int]:
        order = {
            SubgroupId.Sigma: self.torus_order,
            SubgroupId.M: self.m,
            SubgroupId.N: self.qn1,
        }[sid]
        step = self.torus_order // order
        return [step * i for i in range(order)]

    def centralizing_exponents(self, units: Sequence[UnitaryTranslation] | None = None) -> list[int]:
        """All k whose twist fixes every element of ``units`` (default: all of Q), by scan."""
        if units is None:
            units = self.unitary_elements()
        return [k for k in range(self.torus_order) if all(self.torus_twist(k, u) == u for u in units)]

    def commutation_report(self) -> dict:
        """Torus elements commuting with Q and with Z, compared with M and N."""
        on_q = self.centralizing_exponents()
        on_z = self.centralizing_exponents(self.center_elements())
        return {
            "centralizes_Q": len(on_q),
            "centralizes_Q_is_M": on_q == self.torus_exponents(SubgroupId.M),
            "centralizes_Z": len(on_z),
            "centralizes_Z_is_N": on_z == self.torus_exponents(SubgroupId.N),
        }

    def enumerate_subgroup(self, sid: SubgroupId | str, budget: int = DEFAULT_BUDGET) -> list[GammaElement]:
        sid = SubgroupId(sid)
        if self.subgroup_order(sid) > budget:
            raise BudgetExceeded(f"|{sid.value}| = {self.subgroup_order(sid)} exceeds {budget}")
        zero = UnitaryTranslation(0, 0)
        units: list[UnitaryTranslation]
        ks: list[int]
        if sid is SubgroupId.Q:
            units, ks = self.unitary_elements(), [0]
        elif sid is SubgroupId.Z:
            units, ks = self.center_elements(), [0]
        elif sid in (SubgroupId.Sigma, SubgroupId.M, SubgroupId.N):
            units, ks = [zero], self.torus_exponents(sid)
        elif sid is SubgroupId.Gamma:
            units, ks = self.unitary_elements(), self.torus_exponents(SubgroupId.Sigma)
        elif sid is SubgroupId.QxM:
            units, ks = self.unitary_elements(), self.torus_exponents(SubgroupId.M)
        else:
            units, ks = self.center_elements(), self.torus_exponents(SubgroupId.N)
        return [GammaElement(u, k) for k in ks for u in units]

    def generators(self, elements: Sequence[GammaElement]) -> list[GammaElement]:
        return greedy_generators(elements, self.gamma_compose, self.identity)

    def closure(self, generators: Sequence[GammaElement], budget: int = DEFAULT_BUDGET) -> list[GammaElement]:
        return closure(generators, self.gamma_compose, self.identity, budget)

    def center(self, elements: Sequence[GammaElement]) -> list[GammaElement]:
        gens = self.generators(elements)
        return [x for x in elements if all(self.commutes(x, g) for g in gens)]

    def derived_subgroup(self, elements: Sequence[GammaElement]) -> list[GammaElement]:
        gens = self.generators(elements)
        comms = {self.commutator(x, y) for x in gens for y in gens}
        # normal closure of the generator commutators
        conj = [self.gamma_compose(self.gamma_compose(g, c), self.gamma_inverse(g)) for g in gens for c in comms]
        return self.closure(sorted(comms | set(conj)))

    def exponent(self, elements: Iterable[GammaElement]) -> int:
        e = 1
        for x in elements:
            e = math.lcm(e, self.element_order(x))
        return e

    def structure_report(self, sid: SubgroupId | str, budget: int = DEFAULT_BUDGET) -> dict:
        sid = SubgroupId(sid)
        elements = self.enumerate_subgroup(sid, budget)
        order = len(elements)
        exponent = self.exponent(elements)
        center = self.center(elements)
        is_abelian = len(center) == order
        prime_exponent = exponent == 1 or isprime(exponent)
        return {
            "subgroup": sid.value,
            "order": order,
            "expected_order": self.subgroup_order(sid),
            "exponent": exponent,
            "center_order": len(center),
            "is_abelian": is_abelian,
            "is_elementary_abelian": is_abelian and prime_exponent,
            "derived_subgroup_order": len(self.derived_subgroup(elements)),
        }

    def quotient_report(self) -> dict:
        """Structure of Q/Z from an explicit coset table."""
        qs = self.enumerate_subgroup(SubgroupId.Q)
        zs = self.enumerate_subgroup(SubgroupId.Z)
        rep = {}
        for x in qs:
            coset = min(self.gamma_compose(x, z) for z in zs)
            rep[x] = coset
        cosets = sorted(set(rep.values()))

        def mul(c1: GammaElement, c2: GammaElement) -> GammaElement:
            return rep[self.gamma_compose(c1, c2)]

        identity = rep[self.identity]
        abelian = all(mul(c1, c2) == mul(c2, c1) for c1 in cosets for c2 in cosets)
        exponent = 1
        for c in cosets:
            k, y = 1, c
            while y != identity:
                y, k = mul(y, c), k + 1
            exponent = math.lcm(exponent, k)
        return {
            "order": len(cosets),
            "exponent": exponent,
            "is_abelian": abelian,
            "is_elementary_abelian": abelian and (exponent == 1 or isprime(exponent)),
            "coset_size": len(zs),
        }

    # -- orbits -----------------------------------------------------------

    def _partition(self, sid: SubgroupId, points: Sequence[CurvePoint], budget: int) -> tuple[list[Orbit], list[int]]:
        gens = self.generators(self.enumerate_subgroup(sid, budget))
        index = {P: i for i, P in enumerate(points)}
        label = [-1] * len(points)
        out = []
        for start, P in enumerate(points):
            if label[start] >= 0:
                continue
            label[start] = start
            queue = deque([P])
            size = 1
            while queue:
                cur = queue.popleft()
                for g in gens:
                    img = self.act(g, cur, check=False)
                    j = index[img]
                    if label[j] < 0:
                        label[j] = start
                        size += 1
                        queue.append(img)
            out.append(Orbit(size, P))
        out.sort(key=lambda o: (o.size, o.representative))
        return out, label

    def orbits(
        self,
        sid: SubgroupId | str,
        points: Sequence[CurvePoint] | None = None,
        budget: int = DEFAULT_BUDGET,
    ) -> list[Orbit]:
        """BFS orbit decomposition of the rational points of C_n."""
        if points is None:
            points = enumerate_points(CurveId.Cn, self.params)
        return self._partition(SubgroupId(sid), points, budget)[0]

    def orbit_labels(self, sid: SubgroupId | str, points: Sequence[CurvePoint]) -> list[int]:
        """For each point, the index of the first point of its orbit."""
        return self._partition(SubgroupId(sid), points, DEFAULT_BUDGET)[1]

    def predicted_gamma_profile(self) -> list[int]:
        q, n = self.q, self.params.n
        big = (q ** (n - 1) - 1) // (q - 1)
        return [1, q**3] + [self.subgroup_order(SubgroupId.Gamma)] * big

    def same_gamma_orbit(self, P1: CurvePoint, P2: CurvePoint) -> bool:
        """Orbit membership from z-coordinates alone: z2 = zeta^j z1."""
        if P1.infinite or P2.infinite:
            raise InfinityInput("same_gamma_orbit takes affine points")
        t = self.tower
        if P1.z == 0 or P2.z == 0:
            return P1.z == P2.z
        return t.pow(t.div(P2.z, P1.z), self.torus_order) == 1

    def fixed_points(self, g: GammaElement, points: Iterable[CurvePoint]) -> int:
        return sum(1 for P in points if self.act(g, P, check=False) == P)

    def semiregular_check(self, points: Sequence[CurvePoint] | None = None) -> bool:
        """No non-identity element of Q fixes an affine point."""
        if points is None:
            points = enumerate_points(CurveId.Cn, self.params)
        affine = [P for P in points if not P.infinite]
        for g in self.enumerate_subgroup(SubgroupId.Q):
            if g == self.identity:
                continue
            if any(self.act(g, P, check=False) == P for P in affine):
                return False
        return True

    def permutation(self, g: GammaElement, points: Sequence[CurvePoint]) -> tuple[int, ...]:
        """g as a permutation of the indices of ``points``."""
        index = {P: i for i, P in enumerate(points)}
        return tuple(index[self.act(g, P, check=False)] for P in points)

