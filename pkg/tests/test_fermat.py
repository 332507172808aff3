import random

import pytest

from modcheck.elliptic import discriminant
from modcheck.errors import DomainError, SingularModelError
from modcheck.fermat import (
    FermatTriple,
    FreyParameters,
    check_fermat_difference,
    check_fermat_triple,
    fermat_search,
    frey_bad_primes,
    frey_curve,
)


def search_oracle(bound, nmin, nmax):
    """Different loop order: Z outermost, lookup of Z^n - X^n in a power table."""
    hits = set()
    for n in range(nmin, nmax + 1):
        table = {x**n: x for x in range(1, bound + 1)}
        for Z in range(2, 2 * bound + 1):
            zn = Z**n
            for X in range(1, bound + 1):
                rest = zn - X**n
                if rest <= 0:
                    break
                Y = table.get(rest)
                if Y is not None and X <= Y:
                    hits.add(FermatTriple(X, Y, Z, n))
    return sorted(hits)


def test_check_examples():
    r = check_fermat_triple(FermatTriple(3, 4, 5, 2))
    assert r.holds and not r.trivial
    r = check_fermat_triple(FermatTriple(0, 7, 7, 3))
    assert r.holds and r.trivial
    assert not check_fermat_triple(FermatTriple(1, 1, 1, 3))
    with pytest.raises(DomainError):
        check_fermat_triple(FermatTriple(1, 1, 1, 1))


def test_difference_form():
    assert check_fermat_difference(5, 4, 3, 2)
    assert not check_fermat_difference(9, 8, 1, 3)
    assert check_fermat_difference(7, 7, 0, 3).trivial


def test_bignum_exactness():
    # 10^60 + 1 is within float rounding of a cube but is not one
    big = 10**20
    assert not check_fermat_triple(FermatTriple(big, 1, big, 3))


def test_search_examples():
    assert fermat_search(50, 3, 7) == []
    assert fermat_search(1, 3, 3) == []
    control = fermat_search(50, 2, 7)
    assert FermatTriple(3, 4, 5, 2) in control
    assert all(t.n == 2 for t in control)


@pytest.mark.parametrize("bound, nmin, nmax", [(50, 3, 7), (40, 2, 2), (30, 2, 4)])
def test_search_matches_oracle(bound, nmin, nmax):
    assert fermat_search(bound, nmin, nmax) == search_oracle(bound, nmin, nmax)


def test_search_hits_are_genuine():
    for t in fermat_search(60, 2, 3):
        c = check_fermat_triple(t)
        assert c.holds and not c.trivial


def test_frey_examples():
    E = frey_curve(FreyParameters(2, 1, 3))
    assert E.ainvs == (0, -7, 0, -8, 0)
    assert discriminant(E) == 16 * (8 * 1 * 9) ** 2 == 82944
    with pytest.raises(SingularModelError):
        frey_curve(FreyParameters(1, -1, 3))
    with pytest.raises(DomainError):
        FreyParameters(2, 1, 4)
    with pytest.raises(DomainError):
        FreyParameters(2, 1, 2)


def test_frey_discriminant_identity_random():
    rng = random.Random(2024)
    done = 0
    while done < 50:
        a, b = rng.randint(-30, 30), rng.randint(-30, 30)
        p = rng.choice((3, 5, 7))
        A, B = a**p, b**p
        if A == 0 or B == 0 or A + B == 0:
            continue
        E = frey_curve(FreyParameters(a, b, p))
        assert discriminant(E) == 16 * (A * B * (A + B)) ** 2
        done += 1


def test_frey_bad_primes():
    assert frey_bad_primes(FreyParameters(2, 1, 3)) == [2, 3]
    fp = FreyParameters(3, 5, 5)
    disc = discriminant(frey_curve(fp))
    assert all(disc % q == 0 for q in frey_bad_primes(fp))
