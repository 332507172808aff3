"""Exact arithmetic in F_p and F_{p^n}.

Two layers live here.  The value types (``FieldElement``, ``FpPolynomial``,
``ExtFieldElement``) do textbook arithmetic and are what the rest of the
package exchanges.  ``FieldTables`` is the point-counting kernel: every
element of F_q is encoded as an integer code in [0, q) (base-p digits of its
residue polynomial, constant term least significant) and multiplication and
addition go through discrete-log and Zech-log tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import DomainError, ResourceError, UsageError
from .numtheory import factorize, is_prime

DEFAULT_ENUMERATION_BOUND = 10**6
MAX_PRIME = 2**31


@dataclass(frozen=True)
class PrimeModulus:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 2 or not is_prime(self.p):
            raise DomainError(f"{self.p!r} is not a prime")
        if self.p >= MAX_PRIME:
            raise DomainError(f"p = {self.p} exceeds the supported bound 2^31")

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(value, self)

    def __int__(self):
        return self.p


def as_modulus(p: int | PrimeModulus) -> PrimeModulus:
    return p if isinstance(p, PrimeModulus) else PrimeModulus(p)


@dataclass(frozen=True)
class FieldElement:
    """An element of F_p, stored as its canonical representative."""

    value: int
    modulus: PrimeModulus

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.modulus.p)

    @property
    def p(self) -> int:
        return self.modulus.p

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise UsageError(f"modulus mismatch: {self.p} vs {other.p}")
            return other
        if isinstance(other, int):
            return FieldElement(other, self.modulus)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.value + other.value, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.value - other.value, self.modulus)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.value * other.value, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.modulus)

    def inverse(self) -> FieldElement:
        if self.value == 0:
            raise DomainError(f"0 has no inverse mod {self.p}")
        return FieldElement(pow(self.value, -1, self.p), self.modulus)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElement(pow(self.value, e, self.p), self.modulus)

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FieldElement({self.value} mod {self.p})"


def fp_arithmetic(x: FieldElement, y: FieldElement, op: str) -> FieldElement:
    if x.modulus != y.modulus:
        raise UsageError(f"modulus mismatch: {x.p} vs {y.p}")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise UsageError(f"unknown operation {op!r}")


def quadratic_character(x: FieldElement) -> int:
    """Legendre symbol of x by Euler's criterion; odd p only."""
    p = x.p
    if p == 2:
        raise DomainError("quadratic character needs odd p; enumerate y directly for p = 2")
    if x.value == 0:
        return 0
    return 1 if pow(x.value, (p - 1) // 2, p) == 1 else -1


# ---------------------------------------------------------------------------
# Polynomials over F_p


def _strip(coeffs: Sequence[int]) -> tuple[int, ...]:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class FpPolynomial:
    """Polynomial over F_p with ascending integer coefficients in [0, p).

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    coeffs: tuple[int, ...]
    p: int

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(c % self.p for c in self.coeffs))

    @classmethod
    def x(cls, p: int) -> FpPolynomial:
        return cls((0, 1), p)

    @classmethod
    def constant(cls, c: int, p: int) -> FpPolynomial:
        return cls((c,), p)

    @property
    def coefficients(self) -> tuple[FieldElement, ...]:
        m = PrimeModulus(self.p)
        return tuple(FieldElement(c, m) for c in self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def _check(self, other: FpPolynomial):
        if other.p != self.p:
            raise UsageError(f"characteristic mismatch: {self.p} vs {other.p}")

    def __add__(self, other: FpPolynomial) -> FpPolynomial:
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return FpPolynomial(tuple(u + v for u, v in zip(a, b)), self.p)

    def __neg__(self) -> FpPolynomial:
        return FpPolynomial(tuple(-c for c in self.coeffs), self.p)

    def __sub__(self, other: FpPolynomial) -> FpPolynomial:
        return self + (-other)

    def __mul__(self, other: FpPolynomial) -> FpPolynomial:
        self._check(other)
        if not self.coeffs or not other.coeffs:
            return FpPolynomial((), self.p)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return FpPolynomial(tuple(out), self.p)

    def scale(self, c: int) -> FpPolynomial:
        return FpPolynomial(tuple(c * a for a in self.coeffs), self.p)

    def __divmod__(self, other: FpPolynomial) -> tuple[FpPolynomial, FpPolynomial]:
        self._check(other)
        if other.is_zero():
            raise DomainError("polynomial division by zero")
        p = self.p
        rem = list(self.coeffs)
        dq = other.degree
        inv_lead = pow(other.coeffs[-1], -1, p)
        quot = [0] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] * inv_lead % p
            if c:
                quot[k - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[k - dq + j] = (rem[k - dq + j] - c * b) % p
        return FpPolynomial(tuple(quot), p), FpPolynomial(tuple(rem[:dq]), p)

    def __mod__(self, other: FpPolynomial) -> FpPolynomial:
        return divmod(self, other)[1]

    def monic(self) -> FpPolynomial:
        if self.is_zero():
            return self
        return self.scale(pow(self.coeffs[-1], -1, self.p))

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms)


def poly_gcd(a: FpPolynomial, b: FpPolynomial) -> FpPolynomial:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_powmod(base: FpPolynomial, e: int, mod: FpPolynomial) -> FpPolynomial:
    result = FpPolynomial.constant(1, base.p) % mod
    base = base % mod
    while e:
        if e & 1:
            result = result * base % mod
        base = base * base % mod
        e >>= 1
    return result


def is_irreducible(f: FpPolynomial) -> bool:
    """Rabin's test: x^(p^n) = x mod f and gcd(x^(p^(n/r)) - x, f) = 1 for primes r | n."""
    n = f.degree
    if n < 1:
        return False
    if n == 1:
        return True
    p = f.p
    x = FpPolynomial.x(p)
    frob = [x % f]  # frob[k] = x^(p^k) mod f
    for _ in range(n):
        frob.append(poly_powmod(frob[-1], p, f))
    if (frob[n] - x) % f != FpPolynomial((), p):
        return False
    for r in factorize(n):
        if poly_gcd(frob[n // r] - x, f).degree != 0:
            return False
    return True


@lru_cache(maxsize=None)
def find_irreducible(p: int | PrimeModulus, n: int) -> FpPolynomial:
    """First monic irreducible of degree n in coefficient-lexicographic order.

    Candidates x^n + c_{n-1} x^{n-1} + ... + c_0 are scanned by the integer
    code sum(c_i p^i), so the constant term varies fastest.
    """
    p = int(p)
    if n < 1:
        raise UsageError("degree must be >= 1")
    for code in range(p**n):
        tail = []
        c = code
        for _ in range(n):
            c, d = divmod(c, p)
            tail.append(d)
        f = FpPolynomial(tuple(tail) + (1,), p)
        if is_irreducible(f):
            return f
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


# ---------------------------------------------------------------------------
# Extension fields


@dataclass(frozen=True)
class ExtField:
    """F_{p^n} realized as F_p[t] / (modulus_poly)."""

    base: PrimeModulus
    degree: int
    modulus_poly: FpPolynomial = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if not isinstance(self.base, PrimeModulus):
            object.__setattr__(self, "base", PrimeModulus(self.base))
        if self.degree < 1:
            raise UsageError("extension degree must be >= 1")
        if self.modulus_poly is None:
            object.__setattr__(self, "modulus_poly", find_irreducible(self.base.p, self.degree))
        m = self.modulus_poly
        if m.p != self.base.p or m.degree != self.degree or not m.is_monic():
            raise UsageError(f"modulus {m} is not monic of degree {self.degree} over F_{self.base.p}")
        if not is_irreducible(m):
            raise UsageError(f"modulus {m} is reducible over F_{self.base.p}")

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def cardinality(self) -> int:
        return self.base.p**self.degree

    def element(self, value: int | Sequence[int] | FpPolynomial) -> ExtFieldElement:
        if isinstance(value, int):
            return ExtFieldElement(FpPolynomial.constant(value, self.p), self)
        if not isinstance(value, FpPolynomial):
            value = FpPolynomial(tuple(value), self.p)
        return ExtFieldElement(value % self.modulus_poly, self)

    def zero(self) -> ExtFieldElement:
        return self.element(0)

    def one(self) -> ExtFieldElement:
        return self.element(1)

    def gen(self) -> ExtFieldElement:
        """The class of t."""
        return self.element((0, 1))

    def from_code(self, code: int) -> ExtFieldElement:
        digits = []
        for _ in range(self.degree):
            code, d = divmod(code, self.p)
            digits.append(d)
        return ExtFieldElement(FpPolynomial(tuple(digits), self.p), self)

    def tables(self) -> FieldTables:
        return _tables(self.p, self.modulus_poly.coeffs)

    def __str__(self):
        return f"F_{self.p}^{self.degree} = F_{self.p}[t]/({self.modulus_poly})"


@dataclass(frozen=True)
class ExtFieldElement:
    residue: FpPolynomial
    field: ExtField

    def __post_init__(self):
        if self.residue.degree >= self.field.degree:
            object.__setattr__(self, "residue", self.residue % self.field.modulus_poly)

    def _coerce(self, other) -> ExtFieldElement:
        if isinstance(other, ExtFieldElement):
            if other.field != self.field:
                raise UsageError("operands lie in different fields")
            return other
        if isinstance(other, int):
            return self.field.element(other)
        if isinstance(other, FieldElement) and other.p == self.field.p:
            return self.field.element(other.value)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ExtFieldElement(self.residue + other.residue, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ExtFieldElement(self.residue - other.residue, self.field)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return ExtFieldElement(-self.residue, self.field)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ExtFieldElement(self.residue * other.residue % self.field.modulus_poly, self.field)

    __rmul__ = __mul__

    def inverse(self) -> ExtFieldElement:
        """Extended Euclid in F_p[t]."""
        if self.residue.is_zero():
            raise DomainError("0 has no inverse")
        p = self.field.p
        r0, r1 = self.field.modulus_poly, self.residue
        s0, s1 = FpPolynomial((), p), FpPolynomial((1,), p)
        while not r1.is_zero():
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        # r0 is a nonzero constant
        return ExtFieldElement(s0.scale(pow(r0.coeffs[0], -1, p)), self.field)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self):
        return not self.residue.is_zero()

    @property
    def code(self) -> int:
        c = 0
        for d in reversed(self.residue.coeffs):
            c = c * self.field.p + d
        return c

    def __repr__(self):
        return f"ExtFieldElement({self.residue} in F_{self.field.p}^{self.field.degree})"


def ext_arithmetic(x: ExtFieldElement, y: ExtFieldElement, op: str) -> ExtFieldElement:
    if x.field != y.field:
        raise UsageError("operands lie in different fields")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise UsageError(f"unknown operation {op!r}")


def check_enumeration_bound(q: int, bound: int = DEFAULT_ENUMERATION_BOUND) -> None:
    if q > bound:
        raise ResourceError(f"field of size {q} exceeds the enumeration bound {bound}")


def enumerate_field(F: ExtField | PrimeModulus | int, bound: int = DEFAULT_ENUMERATION_BOUND) -> Iterator:
    """Yield every element of F in code order, starting with 0.

    A bare prime yields ``FieldElement`` values; an ``ExtField`` yields
    ``ExtFieldElement`` values.  The bound is checked before anything is
    yielded.
    """
    if isinstance(F, ExtField):
        check_enumeration_bound(F.cardinality, bound)
        return (F.from_code(c) for c in range(F.cardinality))
    m = as_modulus(F)
    check_enumeration_bound(m.p, bound)
    return (FieldElement(v, m) for v in range(m.p))


# ---------------------------------------------------------------------------
# Table-driven kernel


class FieldTables:
    """Discrete-log / Zech-log tables for F_q over integer codes.

    ``exp[k]`` is the code of g^k for a fixed primitive element g;
    ``log[c]`` inverts it (``log[0] = -1``); ``zech[k] = log(1 + g^k)`` or
    -1 when 1 + g^k = 0.  Adding 1 to a code only touches its constant digit,
    which is what makes the Zech table cheap to build.
    """

    def __init__(self, p: int, modulus: tuple[int, ...]):
        self.p = p
        self.n = len(modulus) - 1
        self.q = p**self.n
        self.order = self.q - 1
        self.modulus = modulus
        self.generator = self._find_primitive()
        self.exp = self._power_table(self.generator)
        log = [-1] * self.q
        for k, c in enumerate(self.exp):
            log[c] = k
        self.log = log
        pm1 = p - 1
        zech = []
        for c in self.exp:
            c1 = c - pm1 if c % p == pm1 else c + 1
            zech.append(log[c1])
        self.zech = zech
        self.log_minus_one = 0 if p == 2 else self.order // 2
        self._trace_mask = None

    # -- polynomial helpers on digit lists, used only while building tables
    def _digits(self, code: int) -> list[int]:
        out = []
        for _ in range(self.n):
            code, d = divmod(code, self.p)
            out.append(d)
        return out

    def _code(self, digits: Sequence[int]) -> int:
        c = 0
        for d in reversed(digits):
            c = c * self.p + d
        return c

    def _mulmod(self, a: list[int], b: list[int]) -> list[int]:
        p, n, m = self.p, self.n, self.modulus
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k] % p
            if c:
                for j in range(n):
                    prod[k - n + j] -= c * m[j]
        return [v % p for v in prod[:n]]

    def _pow(self, a: list[int], e: int) -> list[int]:
        result = [1] + [0] * (self.n - 1)
        while e:
            if e & 1:
                result = self._mulmod(result, a)
            a = self._mulmod(a, a)
            e >>= 1
        return result

    def _find_primitive(self) -> int:
        if self.q == 2:
            return 1
        one = [1] + [0] * (self.n - 1)
        primes = list(factorize(self.order))
        for code in range(2, self.q):
            g = self._digits(code)
            if all(self._pow(g, self.order // r) != one for r in primes):
                return code
        raise AssertionError("no primitive element found")

    def _power_table(self, gcode: int) -> list[int]:
        g = self._digits(gcode)
        cur = [1] + [0] * (self.n - 1)
        table = []
        for _ in range(self.order):
            table.append(self._code(cur))
            cur = self._mulmod(cur, g)
        return table

    # -- kernel operations on codes
    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % self.order]

    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        la = self.log[a]
        z = self.zech[(self.log[b] - la) % self.order]
        if z < 0:
            return 0
        return self.exp[(la + z) % self.order]

    def neg(self, a: int) -> int:
        if a == 0:
            return 0
        return self.exp[(self.log[a] + self.log_minus_one) % self.order]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DomainError("0 has no inverse")
        return self.exp[-self.log[a] % self.order]

    def is_square(self, a: int) -> bool:
        """Nonzero squares are exactly the even powers of g (odd q)."""
        return self.log[a] % 2 == 0

    def trace_to_f2(self, a: int) -> int:
        """Absolute trace F_{2^n} -> F_2, via a precomputed linear mask."""
        if self._trace_mask is None:
            mask = 0
            for i in range(self.n):
                basis = self._code([1 if j == i else 0 for j in range(self.n)])
                acc, cur = 0, basis
                for _ in range(self.n):
                    acc = self.add(acc, cur)
                    cur = self.mul(cur, cur)
                mask |= (acc & 1) << i
            self._trace_mask = mask
        return bin(a & self._trace_mask).count("1") & 1

    def constant(self, c: int) -> int:
        """Code of the image of the integer c in F_q."""
        return c % self.p


@lru_cache(maxsize=64)
def _tables(p: int, modulus: tuple[int, ...]) -> FieldTables:
    return FieldTables(p, modulus)
