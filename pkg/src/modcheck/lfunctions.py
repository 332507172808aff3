"""Local zeta functions, Euler products and Dirichlet series of elliptic curves.

All series coefficients are exact (``int`` / ``Fraction``); floating point
appears only in ``l_value`` and ``riemann_zeta_partial``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .elliptic import (
    WeierstrassCurve,
    count_points,
    discriminant,
    local_ap,
    reduce_mod_p,
    trace_ap,
)
from .errors import CoverageError, DomainError, UsageError
from .numtheory import primes_up_to

CERTIFIED_S = 1.5


@dataclass(frozen=True)
class LocalFactor:
    p: int
    ap: int
    good: bool = True

    def __post_init__(self):
        if self.good:
            if self.ap * self.ap > 4 * self.p:
                raise DomainError(f"a_{self.p} = {self.ap} violates the Hasse bound")
        elif self.ap not in (-1, 0, 1):
            raise DomainError(f"bad factor at {self.p} needs a_p in {{-1, 0, 1}}, got {self.ap}")

    def euler_factor(self, s: float) -> float:
        """The p-th factor of the Euler product evaluated at s."""
        if self.good:
            return 1.0 / (1.0 - self.ap * self.p**-s + self.p ** (1.0 - 2.0 * s))
        return 1.0 / (1.0 - self.ap * self.p**-s)


@dataclass(frozen=True)
class PowerSeriesU:
    """Truncated power series in u with rational coefficients."""

    coefficients: tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coefficients[k]

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coefficients):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*u^{k}")
        return (" + ".join(terms) or "0") + f" + O(u^{self.order + 1})"


def _exp_of_log_series(log_coeffs: Sequence[Fraction], order: int) -> list[Fraction]:
    """exp(L) for L = sum_{n>=1} l_n u^n, via n e_n = sum_{k=1}^n k l_k e_{n-k}."""
    e = [Fraction(1)] + [Fraction(0)] * order
    for n in range(1, order + 1):
        acc = Fraction(0)
        for k in range(1, n + 1):
            if log_coeffs[k]:
                acc += k * log_coeffs[k] * e[n - k]
        e[n] = acc / n
    return e


def local_zeta_from_counts(counts: Sequence[int], order: int | None = None) -> PowerSeriesU:
    """exp(sum_n counts[n-1] u^n / n) truncated after u^order."""
    if order is None:
        order = len(counts)
    if order < 1 or len(counts) < order:
        raise UsageError(f"need at least {order} point counts, got {len(counts)}")
    if any(c <= 0 for c in counts[:order]):
        raise UsageError("point counts must be positive")
    log = [Fraction(0)] + [Fraction(counts[n - 1], n) for n in range(1, order + 1)]
    return PowerSeriesU(tuple(_exp_of_log_series(log, order)))


def local_zeta_rational(f: LocalFactor, order: int) -> PowerSeriesU:
    """Expansion of 1 / (1 - a_p u + p u^2), or 1 / (1 - a_p u) for a bad factor.

    z_k = a_p z_{k-1} - p z_{k-2}.
    """
    z = [1]
    for k in range(1, order + 1):
        prev2 = z[k - 2] if k >= 2 else 0
        z.append(f.ap * z[k - 1] - (f.p * prev2 if f.good else 0))
    return PowerSeriesU(tuple(Fraction(c) for c in z))


def weil_zeta_rational(f: LocalFactor, order: int) -> PowerSeriesU:
    """Expansion of (1 - a_p u + p u^2) / ((1 - u)(1 - p u)).

    This is the closed form of the exponential generating series of the
    projective point counts |E(F_{p^n})|.
    """
    num = [1, -f.ap, f.p] + [0] * order
    # 1/((1-u)(1-pu)) has coefficients (p^{k+1} - 1)/(p - 1)
    den = [(f.p ** (k + 1) - 1) // (f.p - 1) for k in range(order + 1)]
    out = [sum(num[i] * den[k - i] for i in range(k + 1)) for k in range(order + 1)]
    return PowerSeriesU(tuple(Fraction(c) for c in out))


def frobenius_power_sums(counts: Sequence[int], p: int) -> list[int]:
    """alpha^n + beta^n = p^n + 1 - |E(F_{p^n})| for n = 1..len(counts)."""
    return [p**n + 1 - c for n, c in enumerate(counts, start=1)]


def local_zeta_from_traces(power_sums: Sequence[int], order: int | None = None) -> PowerSeriesU:
    """exp(sum_n (alpha^n + beta^n) u^n / n); may involve non-positive terms."""
    if order is None:
        order = len(power_sums)
    log = [Fraction(0)] + [Fraction(power_sums[n - 1], n) for n in range(1, order + 1)]
    return PowerSeriesU(tuple(_exp_of_log_series(log, order)))


@dataclass
class RationalityReport:
    curve: str
    p: int
    depth: int
    ap: int
    counts: list[int]
    exponential: PowerSeriesU
    closed_form: PowerSeriesU
    rational: PowerSeriesU
    from_traces: PowerSeriesU

    @property
    def closed_form_match(self) -> bool:
        return self.exponential == self.closed_form

    @property
    def trace_match(self) -> bool:
        return self.from_traces == self.rational

    @property
    def literal_match(self) -> bool:
        """exp(sum |E(F_{p^n})| u^n / n) == 1 / (1 - a_p u + p u^2) coefficientwise."""
        return self.exponential == self.rational

    @property
    def passed(self) -> bool:
        return self.closed_form_match and self.trace_match

    def as_dict(self) -> dict:
        fmt = lambda s: [str(c) for c in s.coefficients]  # noqa: E731
        return {
            "curve": self.curve,
            "p": self.p,
            "depth": self.depth,
            "ap": self.ap,
            "counts": self.counts,
            "exponential": fmt(self.exponential),
            "closed_form": fmt(self.closed_form),
            "rational": fmt(self.rational),
            "from_traces": fmt(self.from_traces),
            "closed_form_match": self.closed_form_match,
            "trace_match": self.trace_match,
            "literal_match": self.literal_match,
            "passed": self.passed,
        }


def verify_rationality(E: WeierstrassCurve, p: int, depth: int) -> RationalityReport:
    """Brute-force |E(F_{p^n})| for n <= depth and compare the series.

    Two exact identities are checked.  The exponential series of the counts
    must equal (1 - a_p u + p u^2)/((1 - u)(1 - p u)); the exponential
    series of the Frobenius power sums p^n + 1 - |E(F_{p^n})| must equal
    1/(1 - a_p u + p u^2).  ``literal_match`` records the direct comparison
    of the count series with 1/(1 - a_p u + p u^2) as well.
    """
    if depth < 1:
        raise UsageError("depth must be >= 1")
    red = reduce_mod_p(E, p)
    if not red.good_reduction:
        raise UsageError(f"{E} has bad reduction at {p}")
    counts = [count_points(red, degree=n) for n in range(1, depth + 1)]
    ap = p + 1 - counts[0]
    factor = LocalFactor(p, ap, True)
    return RationalityReport(
        curve=E.curve_id,
        p=p,
        depth=depth,
        ap=ap,
        counts=counts,
        exponential=local_zeta_from_counts(counts, depth),
        closed_form=weil_zeta_rational(factor, depth),
        rational=local_zeta_rational(factor, depth),
        from_traces=local_zeta_from_traces(frobenius_power_sums(counts, p), depth),
    )


# ---------------------------------------------------------------------------
# Global L-function


class DirichletCoefficients:
    """a_1..a_N stored 1-indexed (index 0 unused)."""

    def __init__(self, values: Sequence[int]):
        self._a = [0] + list(values)
        if len(self._a) < 2 or self._a[1] != 1:
            raise UsageError("a_1 must be 1")

    @property
    def N(self) -> int:
        return len(self._a) - 1

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.N:
            raise IndexError(n)
        return self._a[n]

    def __len__(self):
        return self.N

    def as_list(self) -> list[int]:
        return self._a[1:]

    def is_multiplicative(self) -> bool:
        a, N = self._a, self.N
        for m in range(2, N + 1):
            for n in range(m + 1, N // m + 1):
                if math.gcd(m, n) == 1 and a[m * n] != a[m] * a[n]:
                    return False
        return True


def _smallest_prime_factors(N: int) -> list[int]:
    spf = list(range(N + 1))
    for i in range(2, math.isqrt(N) + 1):
        if spf[i] == i:
            for j in range(i * i, N + 1, i):
                if spf[j] == j:
                    spf[j] = i
    return spf


def dirichlet_from_euler(factors: Iterable[LocalFactor], N: int) -> DirichletCoefficients:
    """Expand the Euler product into a_1..a_N.

    Good p: a_{p^{k+1}} = a_p a_{p^k} - p a_{p^{k-1}}, the unique recursion
    whose generating series in u = p^{-s} is 1/(1 - a_p u + p u^2).
    Bad p: a_{p^k} = a_p^k.  Coprime indices multiply.
    """
    by_p = {f.p: f for f in factors}
    a = [0] * (N + 1)
    if N >= 1:
        a[1] = 1
    spf = _smallest_prime_factors(N)
    for n in range(2, N + 1):
        p = spf[n]
        m, k = n, 0
        while m % p == 0:
            m //= p
            k += 1
        if m > 1:
            a[n] = a[m] * a[n // m]
            continue
        f = by_p.get(p)
        if f is None:
            raise CoverageError(f"no local factor supplied for p = {p}")
        if k == 1:
            a[n] = f.ap
        elif f.good:
            a[n] = f.ap * a[n // p] - p * a[n // (p * p)]
        else:
            a[n] = f.ap * a[n // p]
    return DirichletCoefficients(a[1:])


def local_factors(E: WeierstrassCurve, cutoff: int) -> list[LocalFactor]:
    """Local data at every prime <= cutoff (bad primes via the fiber type)."""
    out = []
    for p in primes_up_to(cutoff):
        ap, good = local_ap(E, p)
        out.append(LocalFactor(p, ap, good))
    return out


@dataclass(frozen=True)
class LQuery:
    s: float
    cutoff: int
    method: str = "euler_product"

    def __post_init__(self):
        if self.cutoff < 2:
            raise UsageError("cutoff must be >= 2")
        if self.method not in ("euler_product", "dirichlet_sum"):
            raise UsageError(f"unknown method {self.method!r}")

    @property
    def certified(self) -> bool:
        return self.s > CERTIFIED_S


@dataclass(frozen=True)
class LValue:
    value: float
    query: LQuery
    warning: str | None = None

    def __float__(self):
        return self.value


UNCERTIFIED = "uncertified: s <= 3/2, partial product/sum need not converge"


def l_value(query: LQuery, coeffs: DirichletCoefficients | None = None,
            factors: Sequence[LocalFactor] | None = None) -> LValue:
    """Partial Euler product over p <= cutoff, or partial Dirichlet sum over n <= cutoff."""
    s, cutoff = query.s, query.cutoff
    if query.method == "euler_product":
        if factors is None:
            raise UsageError("euler_product needs local factors")
        logsum = math.fsum(-math.log1p(-(f.ap * f.p**-s) + (f.p ** (1 - 2 * s) if f.good else 0.0))
                           for f in factors if f.p <= cutoff)
        value = math.exp(logsum)
    else:
        if coeffs is None:
            if factors is None:
                raise UsageError("dirichlet_sum needs coefficients or factors")
            coeffs = dirichlet_from_euler(factors, cutoff)
        if coeffs.N < cutoff:
            raise CoverageError(f"only {coeffs.N} coefficients for cutoff {cutoff}")
        value = math.fsum(coeffs[n] * n**-s for n in range(1, cutoff + 1))
    return LValue(value, query, None if query.certified else UNCERTIFIED)


def curve_l_value(E: WeierstrassCurve, query: LQuery) -> LValue:
    return l_value(query, factors=local_factors(E, query.cutoff))


def riemann_zeta_partial(s: float, terms: int) -> float:
    if s <= 1:
        raise DomainError("the zeta series diverges for s <= 1")
    if terms < 1:
        raise UsageError("terms must be >= 1")
    return math.fsum(n**-s for n in range(1, terms + 1))


# ---------------------------------------------------------------------------
# Eichler-Shimura comparison


@dataclass(frozen=True)
class PrimeRow:
    prime: int
    ap: int
    cp: int
    good: bool

    @property
    def match(self) -> bool:
        return self.ap == self.cp


@dataclass
class EichlerShimuraReport:
    curve: str
    pmax: int
    rows: list[PrimeRow] = field(default_factory=list)

    @property
    def good_rows(self) -> list[PrimeRow]:
        return [r for r in self.rows if r.good]

    @property
    def bad_rows(self) -> list[PrimeRow]:
        return [r for r in self.rows if not r.good]

    @property
    def verdict(self) -> bool:
        return all(r.match for r in self.good_rows)

    @property
    def first_failure(self) -> int | None:
        return next((r.prime for r in self.good_rows if not r.match), None)

    def as_dict(self) -> dict:
        return {
            "curve": self.curve,
            "pmax": self.pmax,
            "verdict": self.verdict,
            "first_failure": self.first_failure,
            "good": [{"prime": r.prime, "ap": r.ap, "cp": r.cp, "match": r.match} for r in self.good_rows],
            "bad": [{"prime": r.prime, "ap": r.ap, "cp": r.cp, "match": r.match} for r in self.bad_rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)

    def to_text(self) -> str:
        lines = [f"# {self.curve}  p <= {self.pmax}", f"{'prime':>6} {'ap':>4} {'cp':>4}  match"]
        for r in self.rows:
            tag = ("yes" if r.match else "NO") if r.good else ("bad, " + ("=" if r.match else "!="))
            lines.append(f"{r.prime:>6} {r.ap:>4} {r.cp:>4}  {tag}")
        lines.append(f"verdict: {'pass' if self.verdict else 'fail'}"
                     + ("" if self.verdict else f" (first failing prime {self.first_failure})"))
        return "\n".join(lines)


def compare_sequences(expected: dict[int, int], actual: dict[int, int]) -> tuple[bool, int | None]:
    """Match verdict and first disagreeing key over the shared keys."""
    for k in sorted(expected.keys() & actual.keys()):
        if expected[k] != actual[k]:
            return False, k
    return True, None


def eichler_shimura_check(E: WeierstrassCurve, form, pmax: int, ap_source=None) -> EichlerShimuraReport:
    """Compare a_p from point counting with the Fourier coefficient c_p of ``form``.

    ``form`` is a ``QSeries``; ``ap_source(p)`` may supply (a_p, good) (e.g. a
    cache), defaulting to direct computation.
    """
    top = form.lead_exp + form.order
    if top < pmax:
        raise UsageError(f"form known only through q^{top}, need q^{pmax}")
    disc = discriminant(E)
    rows = []
    for p in primes_up_to(pmax):
        if ap_source is not None:
            ap, good = ap_source(p)
        elif disc % p:
            ap, good = trace_ap(E, p), True
        else:
            ap, good = local_ap(E, p)
        rows.append(PrimeRow(p, ap, form.coefficient(p), good))
    return EichlerShimuraReport(E.curve_id, pmax, rows)
