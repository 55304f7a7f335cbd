"""Arithmetic in F_{q^{2n}} with its subfields F_q, F_{q^2}, F_{q^n}.

The whole tower is modelled by a single quotient ring F_p[X]/(f) with
deg f = 2nh.  Elements are encoded as integers: the coefficient vector
(c_0, ..., c_{D-1}) of a residue is the base-p expansion of the integer.
That same integer order is the order used for every "smallest" choice
(modulus and primitive element), so a tower is reproducible from (p, h, n).

Multiplication, inversion and powers go through exp/log tables of the fixed
primitive element; addition is XOR for p = 2 and a Zech-logarithm lookup
otherwise.  A plain polynomial kernel (``poly_mulmod`` and friends) is kept
for construction and as an independent reference in the tests.
"""

from __future__ import annotations

import enum
import functools
import itertools
from typing import Iterable, Sequence

from sympy import factorint, isprime

from .errors import (
    BadExponent,
    BadOrder,
    BadSubfieldOrder,
    DivisionByZero,
    EvenOrSmallN,
    FieldTooLarge,
    NonPrime,
    NotInQuadraticSubfield,
)

# exp/log tables are plain lists; 2^22 entries is a few hundred MB at most
TABLE_LIMIT = 1 << 22


# ---------------------------------------------------------------------------
# Polynomials over Z/p, ascending coefficient lists.
# ---------------------------------------------------------------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial f."""
    r = _trim([c % p for c in a])
    d = len(f) - 1
    while len(r) > d:
        lead = r[-1]
        shift = len(r) - 1 - d
        for i, fc in enumerate(f):
            if fc:
                r[shift + i] = (r[shift + i] - lead * fc) % p
        _trim(r)
    return r


def poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ac in enumerate(a):
        if ac:
            for j, bc in enumerate(b):
                if bc:
                    out[i + j] = (out[i + j] + ac * bc) % p
    return _trim(out)


def poly_mulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    return poly_mod(poly_mul(a, b, p), f, p)


def poly_powmod(a: Sequence[int], e: int, f: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = poly_mod(a, f, p)
    while e:
        if e & 1:
            result = poly_mulmod(result, base, f, p)
        base = poly_mulmod(base, base, f, p)
        e >>= 1
    return result


def poly_sub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        inv = pow(b[-1], -1, p)
        monic = [(c * inv) % p for c in b]
        a, b = b, poly_mod(a, monic, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [(c * inv) % p for c in a]
    return a


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial f over Z/p."""
    d = len(f) - 1
    if d < 1:
        return False
    x = [0, 1]

    def frob_iter(k: int) -> list[int]:
        r = poly_mod(x, f, p)
        for _ in range(k):
            r = poly_powmod(r, p, f, p)
        return r

    if poly_sub(frob_iter(d), x, p) != []:
        return False
    for r in factorint(d):
        g = poly_gcd(f, poly_sub(frob_iter(d // r), x, p), p)
        if len(g) != 1:
            return False
    return True


def int_to_digits(v: int, p: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        v, c = divmod(v, p)
        out.append(c)
    return out


def digits_to_int(digits: Iterable[int], p: int) -> int:
    v = 0
    for c in reversed(list(digits)):
        v = v * p + c % p
    return v


# ---------------------------------------------------------------------------
# Tower
# ---------------------------------------------------------------------------


class Additive(enum.Enum):
    """The two additive maps whose fibres the curves are built from."""

    AS_q = "AS_q"  # x -> x^q + x
    AS_q2 = "AS_q2"  # y -> y^{q^2} - y


class _LinearSolver:
    """Solve L(v) = c for an F_p-linear operator L on F_p^D.

    Row reduction is done once: ``transform`` is an invertible T with
    T*L = R in reduced row echelon form, so each solve is a matrix-vector
    product plus a read-off.
    """

    def __init__(self, columns: list[list[int]], p: int):
        d = len(columns)
        self.p = p
        self.dim = d
        a = [[columns[j][i] for j in range(d)] for i in range(d)]
        t = [[int(i == j) for j in range(d)] for i in range(d)]
        pivots: list[int] = []
        row = 0
        for col in range(d):
            pr = next((r for r in range(row, d) if a[r][col]), None)
            if pr is None:
                continue
            a[row], a[pr] = a[pr], a[row]
            t[row], t[pr] = t[pr], t[row]
            inv = pow(a[row][col], -1, p)
            a[row] = [(v * inv) % p for v in a[row]]
            t[row] = [(v * inv) % p for v in t[row]]
            for r in range(d):
                if r != row and a[r][col]:
                    k = a[r][col]
                    a[r] = [(x - k * y) % p for x, y in zip(a[r], a[row])]
                    t[r] = [(x - k * y) % p for x, y in zip(t[r], t[row])]
            pivots.append(col)
            row += 1
            if row == d:
                break
        self.rank = row
        self.pivots = pivots
        self.transform = t
        free = [c for c in range(d) if c not in pivots]
        self.kernel: list[list[int]] = []
        for fc in free:
            k = [0] * d
            k[fc] = 1
            for i, pc in enumerate(pivots):
                k[pc] = (-a[i][fc]) % p
            self.kernel.append(k)

    def _reduced(self, c: Sequence[int]) -> list[int]:
        p = self.p
        return [sum(tv * cv for tv, cv in zip(trow, c)) % p for trow in self.transform]

    def solvable(self, c: Sequence[int]) -> bool:
        red = self._reduced(c)
        return not any(red[self.rank:])

    def particular(self, c: Sequence[int]) -> list[int] | None:
        red = self._reduced(c)
        if any(red[self.rank:]):
            return None
        v = [0] * self.dim
        for i, pc in enumerate(self.pivots):
            v[pc] = red[i]
        return v

    def solve(self, c: Sequence[int]) -> list[list[int]]:
        v0 = self.particular(c)
        if v0 is None:
            return []
        p = self.p
        out = []
        for combo in itertools.product(range(p), repeat=len(self.kernel)):
            v = list(v0)
            for coef, kv in zip(combo, self.kernel):
                if coef:
                    v = [(x + coef * y) % p for x, y in zip(v, kv)]
            out.append(v)
        return out


class FieldTower:
    """F_{q^{2n}} with q = p^h, as a degree-2nh extension of F_p.

    Instances are immutable after construction; use :func:`build_tower`,
    which caches them.  The integer-level methods (``add``, ``mul``, ...)
    are the kernel used by the curve and group code; :class:`FieldElem`
    wraps them with operators.
    """

    def __init__(self, p: int, h: int, n: int):
        if not isprime(p):
            raise NonPrime(p)
        if h < 1:
            raise ValueError(f"h must be positive, got {h}")
        if n < 3 or n % 2 == 0:
            raise EvenOrSmallN(n)
        self.p, self.h, self.n = p, h, n
        self.q = p**h
        self.degree = 2 * n * h
        self.order = p**self.degree
        if self.order > TABLE_LIMIT:
            raise FieldTooLarge(f"p^{self.degree} = {self.order} exceeds table limit {TABLE_LIMIT}")
        assert (self.q**n + 1) % (self.q + 1) == 0

        self.modulus: tuple[int, ...] = tuple(self._smallest_irreducible())
        self.unit_order = self.order - 1
        self._unit_factors = sorted(factorint(self.unit_order))
        self.primitive: int = self._smallest_primitive()
        self._build_tables()
        self._solvers: dict[Additive, _LinearSolver] = {}

    # -- construction -----------------------------------------------------

    def _smallest_irreducible(self) -> list[int]:
        p, d = self.p, self.degree
        for tail in range(p**d):
            f = int_to_digits(tail, p, d) + [1]
            if f[0] == 0:
                continue
            if is_irreducible(f, p):
                return f
        raise AssertionError("unreachable: irreducibles exist in every degree")

    def _has_full_order(self, v: int) -> bool:
        p, d, f = self.p, self.degree, self.modulus
        g = int_to_digits(v, p, d)
        for r in self._unit_factors:
            if poly_powmod(g, self.unit_order // r, f, p) == [1]:
                return False
        return True

    def _smallest_primitive(self) -> int:
        for v in range(1, self.order):
            if self._has_full_order(v):
                return v
        raise AssertionError("unreachable: multiplicative group is cyclic")

    def _build_tables(self) -> None:
        p, d, f = self.p, self.degree, self.modulus
        g = _trim(int_to_digits(self.primitive, p, d))
        exp = [0] * self.unit_order
        log = [0] * self.order
        cur = [1]
        for i in range(self.unit_order):
            v = digits_to_int(cur, p)
            exp[i] = v
            log[v] = i
            cur = poly_mulmod(cur, g, f, p)
        if digits_to_int(cur, p) != 1 or len(set(exp)) != self.unit_order:
            raise AssertionError("primitive element does not have full order")
        self._exp = exp
        self._log = log
        log[0] = -1
        self._half = self.unit_order // 2 if p != 2 else 0
        if p != 2:
            # zech[k] = log(1 + g^k), or -1 when 1 + g^k = 0
            zech = [0] * self.unit_order
            for k, v in enumerate(exp):
                c0 = v % p
                w = v - c0 + (c0 + 1) % p
                zech[k] = log[w] if w else -1
            self._zech = zech

    # -- integer kernel ---------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if a == 0:
            return b
        if b == 0:
            return a
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % self.unit_order]
        if z < 0:
            return 0
        return self._exp[(la + z) % self.unit_order]

    def neg(self, a: int) -> int:
        if self.p == 2 or a == 0:
            return a
        return self._exp[(self._log[a] + self._half) % self.unit_order]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % self.unit_order]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self._exp[(-self._log[a]) % self.unit_order]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise DivisionByZero("negative power of zero")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % self.unit_order]

    def frob(self, a: int, k: int) -> int:
        """a^(p^k)."""
        if k < 0:
            raise ValueError("Frobenius exponent must be non-negative")
        if a == 0:
            return 0
        return self._exp[(self._log[a] * pow(self.p, k, self.unit_order)) % self.unit_order]

    def log(self, a: int) -> int:
        """Discrete log to the primitive base (a != 0)."""
        if a == 0:
            raise DivisionByZero("log of zero")
        return self._log[a]

    def exp(self, k: int) -> int:
        return self._exp[k % self.unit_order]

    def coeffs(self, a: int) -> list[int]:
        return int_to_digits(a, self.p, self.degree)

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.degree:
            raise ValueError("too many coefficients")
        return digits_to_int(coeffs, self.p)

    def elem(self, a: int) -> "FieldElem":
        return FieldElem(self, a)

    def elements(self) -> range:
        return range(self.order)

    # -- subfields --------------------------------------------------------

    def check_subfield_order(self, s: int) -> None:
        k, rest = 0, s
        while rest > 1 and rest % self.p == 0:
            rest //= self.p
            k += 1
        if rest != 1 or k == 0 or self.degree % k:
            raise BadSubfieldOrder(s)

    def is_in_subfield(self, a: int, s: int) -> bool:
        self.check_subfield_order(s)
        return self.pow(a, s) == a

    def subfield(self, s: int) -> list[int]:
        self.check_subfield_order(s)
        step = self.unit_order // (s - 1)
        return [0] + [self._exp[step * i] for i in range(s - 1)]

    # -- equation solvers -------------------------------------------------

    def additive_map(self, kind: Additive, a: int) -> int:
        if kind is Additive.AS_q:
            return self.add(self.pow(a, self.q), a)
        return self.sub(self.pow(a, self.q * self.q), a)

    def _solver(self, kind: Additive) -> _LinearSolver:
        solver = self._solvers.get(kind)
        if solver is None:
            cols = [self.coeffs(self.additive_map(kind, self.p**i)) for i in range(self.degree)]
            solver = _LinearSolver(cols, self.p)
            self._solvers[kind] = solver
        return solver

    def additive_kernel_size(self, kind: Additive) -> int:
        return self.p ** len(self._solver(kind).kernel)

    def count_additive(self, kind: Additive, c: int) -> int:
        solver = self._solver(kind)
        if not solver.solvable(self.coeffs(c)):
            return 0
        return self.p ** len(solver.kernel)

    def solve_additive(self, kind: Additive, c: int) -> list[int]:
        return [self.from_coeffs(v) for v in self._solver(kind).solve(self.coeffs(c))]

    def solve_kummer(self, m: int, c: int) -> list[int]:
        if m < 1 or self.unit_order % m:
            raise BadExponent(m)
        if c == 0:
            return [0]
        lc = self._log[c]
        if lc % m:
            return []
        step = self.unit_order // m
        base = lc // m
        return [self._exp[(base + j * step) % self.unit_order] for j in range(m)]

    def count_kummer(self, m: int, c: int) -> int:
        if m < 1 or self.unit_order % m:
            raise BadExponent(m)
        if c == 0:
            return 1
        return 0 if self._log[c] % m else m

    def root_of_unity(self, k: int) -> int:
        if k < 1 or self.unit_order % k:
            raise BadOrder(k)
        return self._exp[(self.unit_order // k) % self.unit_order]

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "h": self.h,
            "n": self.n,
            "modulus": list(self.modulus),
            "primitive": self.coeffs(self.primitive),
        }

    def __repr__(self) -> str:
        return f"FieldTower(p={self.p}, h={self.h}, n={self.n}, size={self.order})"


@functools.lru_cache(maxsize=None)
def build_tower(p: int, h: int, n: int) -> FieldTower:
    """Deterministic tower for F_{q^{2n}}, q = p^h (cached)."""
    return FieldTower(p, h, n)


class FieldElem:
    """A field element bound to its tower, with arithmetic operators."""

    __slots__ = ("tower", "value")

    def __init__(self, tower: FieldTower, value: int):
        if not 0 <= value < tower.order:
            raise ValueError(f"{value} is not an element encoding of {tower!r}")
        self.tower = tower
        self.value = value

    @property
    def coeffs(self) -> list[int]:
        return self.tower.coeffs(self.value)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.tower is not self.tower:
                raise ValueError("elements of different towers")
            return other.value
        if isinstance(other, int):
            return self.tower.from_coeffs([other % self.tower.p])
        return NotImplemented

    def __add__(self, other):
        return FieldElem(self.tower, self.tower.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.tower, self.tower.sub(self.value, self._coerce(other)))

    def __rsub__(self, other):
        return FieldElem(self.tower, self.tower.sub(self._coerce(other), self.value))

    def __mul__(self, other):
        return FieldElem(self.tower, self.tower.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.tower, self.tower.div(self.value, self._coerce(other)))

    def __neg__(self):
        return FieldElem(self.tower, self.tower.neg(self.value))

    def __pow__(self, e: int):
        return FieldElem(self.tower, self.tower.pow(self.value, e))

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElem):
            return self.tower is other.tower and self.value == other.value
        if isinstance(other, int):
            return self.value == self._coerce(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((id(self.tower), self.value))

    def __repr__(self) -> str:
        return f"FieldElem({self.coeffs})"


# ---------------------------------------------------------------------------
# Functional interface
# ---------------------------------------------------------------------------


def field_arith(op: str, *args, exponent: int | None = None) -> FieldElem:
    """Dispatch ``add``, ``mul``, ``neg``, ``inv`` or ``pow`` on FieldElems."""
    if op == "add":
        a, b = args
        return a + b
    if op == "mul":
        a, b = args
        return a * b
    if op == "neg":
        (a,) = args
        return -a
    if op == "inv":
        (a,) = args
        return FieldElem(a.tower, a.tower.inv(a.value))
    if op == "pow":
        if exponent is None:
            a, exponent = args
        else:
            (a,) = args
        return a**exponent
    raise ValueError(f"unknown field operation {op!r}")


def frobenius(e: FieldElem, k: int) -> FieldElem:
    return FieldElem(e.tower, e.tower.frob(e.value, k))


def in_subfield(e: FieldElem, s: int) -> bool:
    return e.tower.is_in_subfield(e.value, s)


def enumerate_subfield(t: FieldTower, s: int) -> list[FieldElem]:
    return [FieldElem(t, v) for v in t.subfield(s)]


def trace_subfield(e: FieldElem) -> FieldElem:
    """The F_{q^2} -> F_q trace a -> a^q + a."""
    t = e.tower
    if not t.is_in_subfield(e.value, t.q * t.q):
        raise NotInQuadraticSubfield(e.coeffs)
    return FieldElem(t, t.add(t.pow(e.value, t.q), e.value))


def solve_additive(t: FieldTower, kind: Additive | str, c: FieldElem) -> list[FieldElem]:
    return [FieldElem(t, v) for v in t.solve_additive(Additive(kind), c.value)]


def solve_kummer(t: FieldTower, m: int, c: FieldElem) -> list[FieldElem]:
    return [FieldElem(t, v) for v in t.solve_kummer(m, c.value)]


def root_of_unity(t: FieldTower, k: int) -> FieldElem:
    return FieldElem(t, t.root_of_unity(k))
