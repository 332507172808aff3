"""Fermat triples, an exhaustive box search, and the Frey curve construction."""

from __future__ import annotations

from dataclasses import dataclass

from .elliptic import WeierstrassCurve, discriminant
from .errors import DomainError, SingularModelError
from .numtheory import factorize, integer_nth_root, is_prime


@dataclass(frozen=True, order=True)
class FermatTriple:
    X: int
    Y: int
    Z: int
    n: int


@dataclass(frozen=True)
class FermatCheck:
    holds: bool
    trivial: bool

    def __bool__(self):
        return self.holds


def check_fermat_triple(t: FermatTriple) -> FermatCheck:
    """Exact test of X^n + Y^n = Z^n; trivial means XYZ = 0."""
    if t.n < 2:
        raise DomainError("exponent must be >= 2")
    return FermatCheck(t.X**t.n + t.Y**t.n == t.Z**t.n, t.X * t.Y * t.Z == 0)


def check_fermat_difference(a: int, b: int, c: int, p: int) -> FermatCheck:
    """The a^p - b^p = c^p form; equivalent to (b, c, a) in X^p + Y^p = Z^p."""
    return check_fermat_triple(FermatTriple(b, c, a, p))


def fermat_search(bound: int, nmin: int = 3, nmax: int = 7) -> list[FermatTriple]:
    """All nontrivial X^n + Y^n = Z^n with 1 <= X <= Y <= bound, nmin <= n <= nmax.

    Z is the integer n-th root of X^n + Y^n (so Y < Z <= 2^(1/n) Y).  Pass
    nmin = 2 for the Pythagorean control run.
    """
    if bound < 1 or nmax < nmin:
        return []
    if nmin < 2:
        raise DomainError("exponent must be >= 2")
    hits = []
    for n in range(nmin, nmax + 1):
        powers = [x**n for x in range(bound + 1)]
        for X in range(1, bound + 1):
            for Y in range(X, bound + 1):
                s = powers[X] + powers[Y]
                Z = integer_nth_root(s, n)
                if Z**n == s:
                    hits.append(FermatTriple(X, Y, Z, n))
    return sorted(hits)


@dataclass(frozen=True)
class FreyParameters:
    a: int
    b: int
    p: int
    c: int | None = None

    def __post_init__(self):
        if self.p < 3 or not is_prime(self.p):
            raise DomainError(f"Frey exponent must be an odd prime, got {self.p}")


def frey_curve(fp: FreyParameters) -> WeierstrassCurve:
    """y^2 = x (x - a^p)(x + b^p), i.e. a-invariants (0, B - A, 0, -AB, 0)."""
    A, B = fp.a**fp.p, fp.b**fp.p
    if A == 0 or B == 0 or A + B == 0:
        raise SingularModelError(f"degenerate Frey parameters a={fp.a}, b={fp.b}, p={fp.p}")
    E = WeierstrassCurve(0, B - A, 0, -A * B, 0, provenance=("frey", fp.a, fp.b, fp.p))
    assert discriminant(E) == 16 * (A * B * (A + B)) ** 2
    return E


def frey_bad_primes(fp: FreyParameters, limit: int = 10**6) -> list[int]:
    """Primes dividing the Frey discriminant: 2 and the primes of a, b and a^p + b^p.

    Trial division stops at ``limit``; a larger unfactored cofactor is listed
    as-is.  Illustration only.
    """
    A, B = fp.a**fp.p, fp.b**fp.p
    primes = {2}
    for m in (fp.a, fp.b, A + B):
        if abs(m) > 1:
            primes.update(factorize(m, limit))
    return sorted(primes)
