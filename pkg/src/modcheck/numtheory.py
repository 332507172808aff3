"""Small elementary number-theory helpers used across the package."""

from math import isqrt

# Deterministic Miller-Rabin witnesses, valid for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> list[int]:
    """Sieve of Eratosthenes; empty list for n < 2."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]


def factorize(n: int, limit: int | None = None) -> dict[int, int]:
    """Trial-division factorization of |n|.

    With ``limit`` set, stops trial division there and records any remaining
    cofactor > 1 under its own value (it may be composite if it exceeds
    limit**2 and fails the primality test).
    """
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        if limit is not None and d > limit:
            break
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_divisors(n: int) -> list[int]:
    return sorted(factorize(n))


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def euler_phi(n: int) -> int:
    result = n
    for p in factorize(n):
        result -= result // p
    return result


def kronecker_minus4(p: int) -> int:
    """Kronecker symbol (-4/p) for a prime p."""
    if p == 2:
        return 0
    return 1 if p % 4 == 1 else -1


def kronecker_minus3(p: int) -> int:
    """Kronecker symbol (-3/p) for a prime p."""
    if p == 3:
        return 0
    return 1 if p % 3 == 1 else -1


def integer_nth_root(x: int, n: int) -> int:
    """Largest r >= 0 with r**n <= x, by binary search on exact integers."""
    if x < 0 or n < 1:
        raise ValueError("need x >= 0 and n >= 1")
    if x < 2:
        return x
    lo, hi = 1, 1 << (x.bit_length() // n + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**n <= x:
            lo = mid
        else:
            hi = mid - 1
    return lo
