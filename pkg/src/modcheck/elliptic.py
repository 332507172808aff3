"""Integral Weierstrass models, reduction mod p and point counting.

Curves use the general model

    y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6

because the level-11 curve has no Legendre model; ``from_legendre`` builds
the y^2 = x(x-1)(x-lambda) family as a special case.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ModelError, SingularModelError, UsageError
from .finite_fields import (
    DEFAULT_ENUMERATION_BOUND,
    ExtField,
    FieldElement,
    PrimeModulus,
    as_modulus,
    check_enumeration_bound,
)


@dataclass(frozen=True)
class WeierstrassCurve:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    provenance: tuple = field(default=("general",), compare=False)

    def __post_init__(self):
        if discriminant(self) == 0:
            raise SingularModelError(f"{self.curve_id} has zero discriminant")

    @property
    def ainvs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def curve_id(self) -> str:
        return "[" + ",".join(str(a) for a in self.ainvs) + "]"

    @property
    def discriminant(self) -> int:
        return discriminant(self)

    def __str__(self):
        return self.curve_id


def b_invariants(a1: int, a2: int, a3: int, a4: int, a6: int) -> tuple[int, int, int, int]:
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def discriminant(E) -> int:
    """Weierstrass discriminant -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6.

    Accepts a ``WeierstrassCurve`` or a bare 5-tuple of a-invariants, so that
    degenerate cubics (which cannot be constructed as curves) can be tested.
    """
    ainvs = E.ainvs if hasattr(E, "ainvs") else tuple(E)
    b2, b4, b6, b8 = b_invariants(*ainvs)
    return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def from_legendre(lam) -> WeierstrassCurve:
    """y^2 = x(x-1)(x-lambda), made integral.

    For lambda = u/v (v > 0) substitute x = X/v^2, y = Y/v^3 to get
    Y^2 = X(X - v^2)(X - u v).
    """
    lam = Fraction(lam)
    if lam in (0, 1):
        raise SingularModelError(f"Legendre parameter {lam} gives a repeated root")
    u, v = lam.numerator, lam.denominator
    return WeierstrassCurve(
        0, -(v * v + u * v), 0, u * v**3, 0,
        provenance=("legendre", str(lam), f"x = X/{v * v}, y = Y/{v**3}"),
    )


def parse_curve(text: str) -> WeierstrassCurve:
    """Parse "[a1,a2,a3,a4,a6]" or "legendre:u/v"."""
    text = text.strip()
    if text.startswith("legendre:"):
        body = text[len("legendre:"):]
        try:
            lam = Fraction(body)
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad Legendre parameter at position {len('legendre:')}: {body!r}") from exc
        return from_legendre(lam)
    try:
        values = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"bad curve literal at position {exc.pos}: {exc.msg}") from exc
    if not isinstance(values, list) or len(values) != 5 or not all(isinstance(a, int) for a in values):
        raise UsageError(f"curve literal must be five integers [a1,a2,a3,a4,a6], got {text!r}")
    return WeierstrassCurve(*values)


# Curves exercised by the property suites.
TEST_CURVES = {
    "11a1": WeierstrassCurve(0, -1, 1, -10, -20),
    "32a2": WeierstrassCurve(0, 0, 0, -1, 0),
    "15a1": WeierstrassCurve(1, 1, 1, -10, -10),
    "37a1": WeierstrassCurve(0, 0, 1, -1, 0),
    "legendre:2": from_legendre(2),
    "legendre:3": from_legendre(3),
    "legendre:1/2": from_legendre(Fraction(1, 2)),
}


@dataclass(frozen=True)
class ReducedCurve:
    a1: FieldElement
    a2: FieldElement
    a3: FieldElement
    a4: FieldElement
    a6: FieldElement
    good_reduction: bool

    @property
    def modulus(self) -> PrimeModulus:
        return self.a1.modulus

    @property
    def p(self) -> int:
        return self.a1.p

    @property
    def ainvs(self) -> tuple[int, int, int, int, int]:
        return tuple(a.value for a in (self.a1, self.a2, self.a3, self.a4, self.a6))


def reduce_mod_p(E: WeierstrassCurve, p) -> ReducedCurve:
    m = as_modulus(p)
    coeffs = [FieldElement(a, m) for a in E.ainvs]
    return ReducedCurve(*coeffs, good_reduction=discriminant(E) % m.p != 0)


def _as_reduced(E, p=None) -> ReducedCurve:
    if isinstance(E, ReducedCurve):
        return E
    if p is None:
        raise UsageError("a prime is required to reduce a rational curve")
    return reduce_mod_p(E, p)


def _field_for(E: ReducedCurve, degree: int, field: ExtField | None) -> ExtField:
    if field is None:
        return ExtField(E.modulus, degree)
    if field.p != E.p:
        raise UsageError(f"field characteristic {field.p} differs from curve prime {E.p}")
    return field


def count_points(E, degree: int = 1, field: ExtField | None = None,
                 bound: int = DEFAULT_ENUMERATION_BOUND) -> int:
    """Number of projective points of the reduced curve over F_{p^degree}.

    Odd characteristic completes the square: for fixed x the equation has
    1 + chi((a1 x + a3)^2 + 4 g(x)) solutions in y.  Characteristic 2 uses
    y^2 + b y = c: one solution when b = 0, otherwise two or none according
    to the absolute trace of c / b^2.  The point at infinity adds 1.
    """
    E = _as_reduced(E)
    F = _field_for(E, degree, field)
    q = F.cardinality
    check_enumeration_bound(q, bound)
    a1, a2, a3, a4, a6 = E.ainvs
    p = E.p
    if F.degree == 1:
        return 1 + _count_affine_prime(p, a1, a2, a3, a4, a6)
    T = F.tables()
    mul, add = T.mul, T.add
    A1, A2, A3, A4, A6 = (T.constant(a) for a in (a1, a2, a3, a4, a6))
    affine = 0
    if p != 2:
        four = T.constant(4)
        for x in range(q):
            b = add(mul(A1, x), A3)
            g = add(mul(add(mul(add(x, A2), x), A4), x), A6)
            d = add(mul(b, b), mul(four, g))
            if d == 0:
                affine += 1
            elif T.is_square(d):
                affine += 2
    else:
        for x in range(q):
            b = add(mul(A1, x), A3)
            g = add(mul(add(mul(add(x, A2), x), A4), x), A6)
            if b == 0:
                affine += 1
            elif T.trace_to_f2(mul(g, T.inv(mul(b, b)))) == 0:
                affine += 2
    return affine + 1


def _count_affine_prime(p: int, a1, a2, a3, a4, a6) -> int:
    if p == 2:
        return _count_affine_naive_prime(p, a1, a2, a3, a4, a6)
    chi = [-1] * p
    chi[0] = 0
    for y in range(1, (p + 1) // 2):
        chi[y * y % p] = 1
    total = 0
    for x in range(p):
        b = a1 * x + a3
        g = ((x + a2) * x + a4) * x + a6
        total += 1 + chi[(b * b + 4 * g) % p]
    return total


def _count_affine_naive_prime(p: int, a1, a2, a3, a4, a6) -> int:
    total = 0
    for x in range(p):
        rhs = ((x + a2) * x + a4) * x + a6
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - rhs) % p == 0:
                total += 1
    return total


def count_points_naive(E, degree: int = 1, field: ExtField | None = None,
                       bound: int = DEFAULT_ENUMERATION_BOUND) -> int:
    """Brute-force (x, y) enumeration plus infinity; the counting oracle.

    Uses plain modular integers for prime fields and polynomial arithmetic
    (not the log tables) for extensions.
    """
    E = _as_reduced(E)
    F = _field_for(E, degree, field)
    q = F.cardinality
    check_enumeration_bound(q * q, bound)
    if F.degree == 1:
        return 1 + _count_affine_naive_prime(E.p, *E.ainvs)
    a1, a2, a3, a4, a6 = E.ainvs
    elems = [F.from_code(c) for c in range(q)]
    ys = [(y, y * y) for y in elems]
    total = 1
    for x in elems:
        rhs = ((x + a2) * x + a4) * x + a6
        lin = x * a1 + a3
        for y, y2 in ys:
            if not (y2 + lin * y - rhs):
                total += 1
    return total


def hasse_bound_holds(ap: int, p: int) -> bool:
    return ap * ap <= 4 * p


def trace_ap(E: WeierstrassCurve, p) -> int:
    """a_p = p + 1 - |E(F_p)| at a prime of good reduction."""
    red = reduce_mod_p(E, p)
    if not red.good_reduction:
        raise UsageError(f"{E} has bad reduction at {red.p}; use bad_fiber_ap")
    ap = red.p + 1 - count_points(red)
    assert hasse_bound_holds(ap, red.p), f"Hasse bound violated: a_{red.p} = {ap}"
    return ap


def singular_points(E: ReducedCurve, bound: int = DEFAULT_ENUMERATION_BOUND) -> list[tuple[int, int]]:
    """Affine singular points of the reduced curve (infinity is always smooth)."""
    p = E.p
    check_enumeration_bound(p, bound)
    a1, a2, a3, a4, a6 = E.ainvs
    out = []
    for x in range(p):
        if p == 2:
            candidates = range(2)
        else:
            candidates = [(-(a1 * x + a3) * pow(2, -1, p)) % p]
        for y in candidates:
            f = y * y + a1 * x * y + a3 * y - (((x + a2) * x + a4) * x + a6)
            fy = 2 * y + a1 * x + a3
            fx = a1 * y - (3 * x * x + 2 * a2 * x + a4)
            if f % p == 0 and fy % p == 0 and fx % p == 0:
                out.append((x, y))
    return out


def bad_fiber_ap(E: WeierstrassCurve, p) -> int:
    """+1 split node, -1 non-split node, 0 cusp, assuming a model minimal at p.

    At the singular point (x0, y0) the quadratic part of the equation is
    t^2 + a1 s t - (3 x0 + a2) s^2; its slopes are the roots of
    T^2 + a1 T - (3 x0 + a2).
    """
    red = reduce_mod_p(E, p)
    if red.good_reduction:
        raise UsageError(f"{E} has good reduction at {red.p}; use trace_ap")
    pts = singular_points(red)
    if len(pts) != 1:
        raise ModelError(f"expected one singular point mod {red.p}, found {len(pts)}; model not minimal")
    x0, _ = pts[0]
    pp = red.p
    a1, a2 = red.ainvs[0], red.ainvs[1]
    c = -(3 * x0 + a2)
    if pp == 2:
        node = a1 % 2 != 0
    else:
        node = (a1 * a1 - 4 * c) % pp != 0
    if not node:
        return 0
    has_root = any((t * t + a1 * t + c) % pp == 0 for t in range(pp))
    return 1 if has_root else -1


def nonsingular_point_count(E, p=None) -> int:
    """#E_ns(F_p) by brute force: all projective points minus singular ones."""
    red = _as_reduced(E, p)
    return count_points_naive(red) - len(singular_points(red))


def local_ap(E: WeierstrassCurve, p: int) -> tuple[int, bool]:
    """(a_p, good) at any prime, dispatching on the reduction type."""
    if discriminant(E) % p:
        return trace_ap(E, p), True
    return bad_fiber_ap(E, p), False


@dataclass(frozen=True, eq=False)
class CurvePoint:
    """Projective point (X : Y : Z); equality is up to nonzero scaling."""

    X: object
    Y: object
    Z: object

    def __post_init__(self):
        if not (self.X or self.Y or self.Z):
            raise UsageError("(0 : 0 : 0) is not a projective point")

    def normalized(self) -> tuple:
        for pivot in (self.Z, self.Y, self.X):
            if pivot:
                inv = 1 / pivot
                return (self.X * inv, self.Y * inv, self.Z * inv)
        raise AssertionError("unreachable")

    def scaled(self, c) -> CurvePoint:
        if not c:
            raise UsageError("scaling by zero")
        return CurvePoint(self.X * c, self.Y * c, self.Z * c)

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        X1, Y1, Z1 = self.X, self.Y, self.Z
        X2, Y2, Z2 = other.X, other.Y, other.Z
        return not (X1 * Y2 - X2 * Y1) and not (X1 * Z2 - X2 * Z1) and not (Y1 * Z2 - Y2 * Z1)

    def __hash__(self):
        return hash(self.normalized())


def is_on_curve(P: CurvePoint, E) -> bool:
    """Evaluate Y^2 Z + a1 XYZ + a3 Y Z^2 - X^3 - a2 X^2 Z - a4 X Z^2 - a6 Z^3.

    ``E`` may be a rational ``WeierstrassCurve`` (coordinates then in Z or Q)
    or a ``ReducedCurve`` (coordinates in F_p or an extension of it).
    """
    if not isinstance(P, CurvePoint):
        X, Y, Z = P
        P = CurvePoint(X, Y, Z)
    a1, a2, a3, a4, a6 = E.ainvs
    X, Y, Z = P.X, P.Y, P.Z
    val = (Y * Y * Z + X * Y * Z * a1 + Y * Z * Z * a3
           - X * X * X - X * X * Z * a2 - X * Z * Z * a4 - Z * Z * Z * a6)
    if isinstance(E, ReducedCurve) and isinstance(val, int):
        return val % E.p == 0
    return not val

