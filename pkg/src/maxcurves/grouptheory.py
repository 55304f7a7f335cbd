"""Brute-force structure of small permutation groups.

Permutations are tuples ``perm`` of a range, ``perm[i]`` being the image of i.
Products follow function composition: ``compose(f, g)`` applies g first.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

from sympy import factorint, isprime

from .errors import BudgetExceeded, HypothesisViolated

Perm = tuple[int, ...]

DEFAULT_BUDGET = 10**6


def compose(f: Perm, g: Perm) -> Perm:
    return tuple(f[i] for i in g)


def inverse(f: Perm) -> Perm:
    out = [0] * len(f)
    for i, v in enumerate(f):
        out[v] = i
    return tuple(out)


def identity_perm(degree: int) -> Perm:
    return tuple(range(degree))


def from_cycles(degree: int, *cycles: Sequence[int]) -> Perm:
    perm = list(range(degree))
    for cyc in cycles:
        for i, v in enumerate(cyc):
            perm[v] = cyc[(i + 1) % len(cyc)]
    return tuple(perm)


def perm_order(f: Perm) -> int:
    seen = [False] * len(f)
    order = 1
    for i in range(len(f)):
        if not seen[i]:
            length, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = f[j]
                length += 1
            order = math.lcm(order, length)
    return order


@dataclass
class FiniteGroupTable:
    elements: list[Perm]
    generators: list[Perm]
    degree: int
    index: dict[Perm, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.index = {g: i for i, g in enumerate(self.elements)}

    @property
    def identity(self) -> Perm:
        return identity_perm(self.degree)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: Perm) -> bool:
        return g in self.index

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)


@dataclass
class GroupAction:
    group: FiniteGroupTable
    domain: Sequence[Hashable]
    apply: Callable[[Perm, Hashable], Hashable]


def closure(generators: Iterable[Perm], degree: int | None = None, budget: int = DEFAULT_BUDGET) -> FiniteGroupTable:
    """The group generated by ``generators`` (BFS over right multiplication)."""
    gens = list(generators)
    if degree is None:
        if not gens:
            raise ValueError("degree is required for an empty generator list")
        degree = len(gens[0])
    if any(len(g) != degree or sorted(g) != list(range(degree)) for g in gens):
        raise ValueError("generators must be permutations of a common range")
    e = identity_perm(degree)
    seen = {e}
    elements = [e]
    queue = deque([e])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = compose(g, s)
            if h not in seen:
                seen.add(h)
                elements.append(h)
                if len(elements) > budget:
                    raise BudgetExceeded(f"closure exceeds {budget} elements")
                queue.append(h)
    return FiniteGroupTable(elements, gens, degree)


def subgroup(G: FiniteGroupTable, generators: Iterable[Perm]) -> FiniteGroupTable:
    return closure(list(generators), degree=G.degree)


def commutes(f: Perm, g: Perm) -> bool:
    return compose(f, g) == compose(g, f)


def center(G: FiniteGroupTable) -> FiniteGroupTable:
    gens = G.generators or G.elements
    return _from_elements([z for z in G if all(commutes(z, g) for g in gens)], G.degree)


def centralizer(G: FiniteGroupTable, g: Perm) -> FiniteGroupTable:
    return _from_elements([x for x in G if commutes(x, g)], G.degree)


def conjugate(H: Iterable[Perm], y: Perm) -> set[Perm]:
    """H^y = y^-1 H y."""
    yi = inverse(y)
    return {compose(compose(yi, h), y) for h in H}


def normalizer(G: FiniteGroupTable, H: FiniteGroupTable) -> FiniteGroupTable:
    hset = set(H.elements)
    return _from_elements([y for y in G if conjugate(H.generators or H.elements, y) <= hset], G.degree)


def normal_closure(G: FiniteGroupTable, seeds: Iterable[Perm]) -> FiniteGroupTable:
    """Smallest normal subgroup of G containing ``seeds``."""
    gens = sorted(set(seeds))
    H = closure(gens, degree=G.degree)
    conjugators = G.generators or G.elements
    while True:
        hset = set(H.elements)
        extra = [c for g in conjugators for c in conjugate(H.generators, g) if c not in hset]
        if not extra:
            return H
        gens = sorted(set(gens) | set(extra))
        H = closure(gens, degree=G.degree)


def derived_subgroup(G: FiniteGroupTable) -> FiniteGroupTable:
    gens = G.generators or G.elements
    comms = {compose(compose(inverse(x), inverse(y)), compose(x, y)) for x in gens for y in gens}
    return normal_closure(G, comms)


def exponent(G: FiniteGroupTable) -> int:
    e = 1
    for g in G:
        e = math.lcm(e, perm_order(g))
    return e


def is_abelian(G: FiniteGroupTable) -> bool:
    gens = G.generators or G.elements
    return all(commutes(a, b) for a in gens for b in gens)


def _from_elements(elements: list[Perm], degree: int) -> FiniteGroupTable:
    # a sorted element list also serves as a (redundant) generating set
    return FiniteGroupTable(elements, list(elements), degree)


def structure_report(G: FiniteGroupTable) -> dict:
    exp = exponent(G)
    abelian = is_abelian(G)
    return {
        "order": G.order,
        "exponent": exp,
        "center_order": center(G).order,
        "is_elementary_abelian": abelian and (exp == 1 or isprime(exp)),
        "derived_subgroup_order": derived_subgroup(G).order,
    }


# ---------------------------------------------------------------------------
# Checks used for the p-group / p'-group lemmas
# ---------------------------------------------------------------------------


def _prime_power(order: int) -> int | None:
    f = factorint(order)
    return next(iter(f)) if len(f) == 1 else None


def has_elementary_abelian_p2(Q: FiniteGroupTable, p: int) -> bool:
    """Q contains commuting x, y of order p with y outside <x>."""
    order_p = [g for g in Q if perm_order(g) == p]
    for i, x in enumerate(order_p):
        powers = {identity_perm(Q.degree)}
        cur = x
        while cur not in powers:
            powers.add(cur)
            cur = compose(cur, x)
        for y in order_p[i + 1:]:
            if y not in powers and commutes(x, y):
                return True
    return False


def fixed_subgroup(R: FiniteGroupTable, h: Perm, action: GroupAction) -> list[Perm]:
    """C_R(h) = {r in R : h . r = r}."""
    return [r for r in R if action.apply(h, r) == r]


def check_action_by_automorphisms(Q: FiniteGroupTable, R: FiniteGroupTable, action: GroupAction) -> bool:
    e = Q.identity
    if any(action.apply(e, r) != r for r in R):
        return False
    for h in Q.generators or Q.elements:
        images = [action.apply(h, r) for r in R]
        if any(img not in R for img in images) or len(set(images)) != R.order:
            return False
        for r1 in R.generators or R.elements:
            for r2 in R:
                if action.apply(h, compose(r1, r2)) != compose(action.apply(h, r1), action.apply(h, r2)):
                    return False
    # compatibility with the product in Q
    for h1 in Q.generators or Q.elements:
        for h2 in Q:
            h12 = compose(h1, h2)
            for r in R.generators or R.elements:
                if action.apply(h12, r) != action.apply(h1, action.apply(h2, r)):
                    return False
    return True


def verify_lbob(Qgrp: FiniteGroupTable, R: FiniteGroupTable, action: GroupAction, check_hypotheses: bool = True) -> bool:
    """Whether R is generated by the fixed subgroups C_R(h), 1 != h in Q.

    With ``check_hypotheses`` the inputs must be a non-cyclic,
    non-generalized-quaternion p-group acting by automorphisms on a p'-group.
    """
    if check_hypotheses:
        p = _prime_power(Qgrp.order)
        if p is None:
            raise HypothesisViolated(f"|Q| = {Qgrp.order} is not a prime power")
        if R.order % p == 0:
            raise HypothesisViolated(f"p = {p} divides |R| = {R.order}")
        if not has_elementary_abelian_p2(Qgrp, p):
            raise HypothesisViolated("Q is cyclic or generalized quaternion")
        if not check_action_by_automorphisms(Qgrp, R, action):
            raise HypothesisViolated("Q does not act on R by automorphisms")
    e = Qgrp.identity
    gens: set[Perm] = set()
    for h in Qgrp:
        if h != e:
            gens.update(fixed_subgroup(R, h, action))
    generated = closure(sorted(gens), degree=R.degree)
    return generated.order == R.order


def ti_check(A: FiniteGroupTable, Qgrp: FiniteGroupTable) -> bool:
    """Q is a TI subgroup: Q meets Q^y trivially for every y outside N_A(Q)."""
    qset = set(Qgrp.elements)
    e = A.identity
    norm = set(normalizer(A, Qgrp).elements)
    for y in A:
        if y in norm:
            continue
        if conjugate(qset, y) & qset != {e}:
            return False
    return True


def unique_fixed_point_profile(action: GroupAction, Qgrp: FiniteGroupTable) -> dict[Perm, int]:
    """Number of fixed points in the domain of each non-identity element of Q."""
    e = Qgrp.identity
    return {h: sum(1 for x in action.domain if action.apply(h, x) == x) for h in Qgrp if h != e}


def conjugation_action(G: FiniteGroupTable, R: FiniteGroupTable) -> GroupAction:
    """G acting on R by h . r = h r h^-1."""
    return GroupAction(G, R.elements, lambda h, r: compose(compose(h, r), inverse(h)))


def natural_action(G: FiniteGroupTable) -> GroupAction:
    return GroupAction(G, range(G.degree), lambda g, i: g[i])


# ---------------------------------------------------------------------------
# Small reference instances
# ---------------------------------------------------------------------------


def coprime_action_instances() -> list[tuple[str, FiniteGroupTable, FiniteGroupTable, GroupAction]]:
    """Three actions of a non-cyclic p-group on a p'-group.

    - (Z/2)^2 = <(1 2), (4 5)> conjugating (Z/3)^2 = <(0 1 2), (3 4 5)>:
      each generator inverts one factor and fixes the other.
    - (Z/2)^2 acting trivially on Z/3.
    - (Z/3)^2 = <(1 2 3), (5 6 7)> conjugating (Z/2)^4 = V4 x V4 on 8 points,
      each 3-cycle permuting the involutions of one V4 factor.
    """
    out = []
    Q1 = closure([from_cycles(6, (1, 2)), from_cycles(6, (4, 5))])
    R1 = closure([from_cycles(6, (0, 1, 2)), from_cycles(6, (3, 4, 5))])
    out.append(("sign flips on (Z/3)^2", Q1, R1, conjugation_action(Q1, R1)))

    Q2 = closure([from_cycles(4, (0, 1)), from_cycles(4, (2, 3))])
    R2 = closure([from_cycles(3, (0, 1, 2))])
    out.append(("trivial action on Z/3", Q2, R2, GroupAction(Q2, R2.elements, lambda h, r: r)))

    Q3 = closure([from_cycles(8, (1, 2, 3)), from_cycles(8, (5, 6, 7))])
    R3 = closure([
        from_cycles(8, (0, 1), (2, 3)),
        from_cycles(8, (0, 2), (1, 3)),
        from_cycles(8, (4, 5), (6, 7)),
        from_cycles(8, (4, 6), (5, 7)),
    ])
    out.append(("(Z/3)^2 on V4 x V4", Q3, R3, conjugation_action(Q3, R3)))
    return out


def ti_instances() -> list[tuple[str, FiniteGroupTable, FiniteGroupTable, bool]]:
    """(name, A, Sylow 2-subgroup, expected TI verdict)."""
    A5 = closure([from_cycles(5, (0, 1, 2)), from_cycles(5, (0, 1, 2, 3, 4))])
    V4 = subgroup(A5, [from_cycles(5, (0, 1), (2, 3)), from_cycles(5, (0, 2), (1, 3))])
    S4 = closure([from_cycles(4, (0, 1)), from_cycles(4, (0, 1, 2, 3))])
    D4 = subgroup(S4, [from_cycles(4, (0, 1, 2, 3)), from_cycles(4, (0, 2))])
    return [("A5 / Sylow-2", A5, V4, True), ("S4 / Sylow-2", S4, D4, False)]
