"""SL2(Z), Gamma_0(N), the action on the upper half-plane, and X_0(N) invariants."""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, UsageError
from .numtheory import divisors, euler_phi, factorize, kronecker_minus3, kronecker_minus4


class _Infinity:
    """The cusp at infinity; a singleton."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "oo"


INFINITY = _Infinity()


@dataclass(frozen=True)
class GroupElement2x2:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise DomainError(f"det({self.as_tuple()}) = {self.a * self.d - self.b * self.c} != 1")

    @classmethod
    def identity(cls) -> GroupElement2x2:
        return cls(1, 0, 0, 1)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, other: GroupElement2x2) -> GroupElement2x2:
        a, b, c, d = self.as_tuple()
        e, f, g, h = other.as_tuple()
        return GroupElement2x2(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    __mul__ = __matmul__

    def inverse(self) -> GroupElement2x2:
        return GroupElement2x2(self.d, -self.b, -self.c, self.a)

    def __neg__(self):
        return GroupElement2x2(-self.a, -self.b, -self.c, -self.d)

    @property
    def trace(self) -> int:
        return self.a + self.d

    def __str__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


T = GroupElement2x2(1, 1, 0, 1)
S = GroupElement2x2(0, -1, 1, 0)


def parse_matrix(text: str) -> GroupElement2x2:
    """Parse "[[a,b],[c,d]]"."""
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"bad matrix literal at position {exc.pos}: {exc.msg}") from exc
    ok = (isinstance(rows, list) and len(rows) == 2
          and all(isinstance(r, list) and len(r) == 2 and all(isinstance(v, int) for v in r) for r in rows))
    if not ok:
        raise UsageError(f"matrix literal must look like [[a,b],[c,d]], got {text!r}")
    (a, b), (c, d) = rows
    return GroupElement2x2(a, b, c, d)


def gamma0_member(g: GroupElement2x2, N: int) -> bool:
    if N < 1:
        raise UsageError("level must be >= 1")
    return g.c % N == 0


@dataclass(frozen=True)
class HalfPlanePoint:
    re: float
    im: float

    def __post_init__(self):
        if not self.im > 0:
            raise DomainError(f"Im z = {self.im} is not positive")

    @classmethod
    def from_complex(cls, z: complex) -> HalfPlanePoint:
        return cls(z.real, z.imag)

    def __complex__(self):
        return complex(self.re, self.im)


def act(g: GroupElement2x2, z: HalfPlanePoint) -> HalfPlanePoint:
    """(az + b) / (cz + d)."""
    w = complex(z)
    j = g.c * w + g.d
    image = (g.a * w + g.b) / j
    expected_im = z.im / abs(j) ** 2
    assert math.isclose(image.imag, expected_im, rel_tol=1e-9, abs_tol=1e-300)
    return HalfPlanePoint(image.real, image.imag)


def automorphy_factor(g: GroupElement2x2, z: HalfPlanePoint) -> complex:
    return g.c * complex(z) + g.d


def act_boundary(g: GroupElement2x2, x):
    """Exact action on Q u {oo}."""
    if x is INFINITY:
        return INFINITY if g.c == 0 else Fraction(g.a, g.c)
    x = Fraction(x)
    den = g.c * x + g.d
    if den == 0:
        return INFINITY
    return (g.a * x + g.b) / den


def classify_element(g: GroupElement2x2) -> str:
    t = abs(g.trace)
    if g.b == 0 and g.c == 0 and g.a == g.d:
        return "identity_like"
    if t < 2:
        return "elliptic"
    if t == 2:
        return "parabolic"
    return "hyperbolic"


def parabolic_fixed_point(g: GroupElement2x2):
    """(a - d) / 2c, or INFINITY when c = 0; verified exactly."""
    if classify_element(g) != "parabolic":
        raise DomainError(f"{g} is not parabolic")
    x = INFINITY if g.c == 0 else Fraction(g.a - g.d, 2 * g.c)
    if act_boundary(g, x) != x:
        raise AssertionError(f"{x} is not fixed by {g}")
    return x


# ---------------------------------------------------------------------------
# Invariants of X_0(N)


def _check_level(N: int):
    if not isinstance(N, int) or N < 1:
        raise UsageError(f"level must be a positive integer, got {N!r}")


def index_gamma0(N: int) -> int:
    """[SL2(Z) : Gamma_0(N)] = N prod_{p | N} (1 + 1/p)."""
    _check_level(N)
    idx = N
    for p in factorize(N) if N > 1 else ():
        idx = idx // p * (p + 1)
    return idx


def cusp_count(N: int) -> int:
    _check_level(N)
    return sum(euler_phi(math.gcd(d, N // d)) for d in divisors(N))


def elliptic_point_counts(N: int) -> tuple[int, int]:
    """Number of elliptic points of order 2 and 3 on X_0(N)."""
    _check_level(N)
    primes = list(factorize(N)) if N > 1 else []
    e2 = 0 if N % 4 == 0 else math.prod(1 + kronecker_minus4(p) for p in primes)
    e3 = 0 if N % 9 == 0 else math.prod(1 + kronecker_minus3(p) for p in primes)
    return e2, e3


def genus_from_counts(index: int, e2: int, e3: int, cusps: int) -> int:
    """Riemann-Hurwitz for the cover X_0(N) -> X(1)."""
    g = 1 + Fraction(index, 12) - Fraction(e2, 4) - Fraction(e3, 3) - Fraction(cusps, 2)
    if g.denominator != 1 or g < 0:
        raise AssertionError(f"non-integral genus {g}")
    return int(g)


def genus_X0(N: int) -> int:
    e2, e3 = elliptic_point_counts(N)
    return genus_from_counts(index_gamma0(N), e2, e3, cusp_count(N))


# ---------------------------------------------------------------------------
# Independent oracle: the right action of SL2(Z) on P^1(Z/N) = Gamma_0(N)\SL2(Z)


def p1_points(N: int) -> list[tuple[int, int]]:
    """Canonical representatives of P^1(Z/NZ), each the minimum of its unit orbit."""
    _check_level(N)
    units = [u for u in range(1, N + 1) if math.gcd(u, N) == 1]
    seen = set()
    for u in range(N):
        for v in range(N):
            if math.gcd(math.gcd(u, v), N) == 1:
                seen.add(min(((l * u) % N, (l * v) % N) for l in units))
    return sorted(seen)


def coset_invariants(N: int) -> dict[str, int]:
    """Index, cusps, elliptic points and genus from the permutation action.

    Gamma_0(N) is the stabilizer of (0 : 1) under (u : v) -> (u : v) g, so
    cosets are points of P^1(Z/N); cusps are orbits of T, elliptic points
    of order 2 and 3 are fixed points of S and of ST.
    """
    pts = p1_points(N)
    units = [u for u in range(1, N + 1) if math.gcd(u, N) == 1]

    def canon(u, v):
        return min(((l * u) % N, (l * v) % N) for l in units)

    def right(pt, g):
        u, v = pt
        return canon(u * g.a + v * g.c, u * g.b + v * g.d)

    ST = S @ T
    cusps, seen = 0, set()
    for pt in pts:
        if pt in seen:
            continue
        cusps += 1
        cur = pt
        while cur not in seen:
            seen.add(cur)
            cur = right(cur, T)
    e2 = sum(1 for pt in pts if right(pt, S) == pt)
    e3 = sum(1 for pt in pts if right(pt, ST) == pt)
    return {
        "index": len(pts),
        "cusps": cusps,
        "e2": e2,
        "e3": e3,
        "genus": genus_from_counts(len(pts), e2, e3, cusps),
    }


# ---------------------------------------------------------------------------
# H = SL2(R) / SO2(R)


def point_to_matrix(z: HalfPlanePoint) -> tuple[tuple[float, float], tuple[float, float]]:
    """Upper-triangular (sqrt y, x/sqrt y; 0, 1/sqrt y), which sends i to x + iy."""
    if not z.im > 0:
        raise DomainError("Im z must be positive")
    r = math.sqrt(z.im)
    return ((r, z.re / r), (0.0, 1.0 / r))


def rotation(theta: float) -> tuple[tuple[float, float], tuple[float, float]]:
    c, s = math.cos(theta), math.sin(theta)
    return ((c, s), (-s, c))


def real_matmul(m, n):
    (a, b), (c, d) = m
    (e, f), (g, h) = n
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def act_real(m, z: complex) -> complex:
    (a, b), (c, d) = m
    return (a * z + b) / (c * z + d)


def stabilizer_check(z: HalfPlanePoint, theta: float, tol: float = 1e-12) -> bool:
    """point_to_matrix(z) * rotation(theta) still sends i to z."""
    image = act_real(real_matmul(point_to_matrix(z), rotation(theta)), 1j)
    return cmath.isclose(image, complex(z), abs_tol=tol)
