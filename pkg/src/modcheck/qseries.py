"""Exact truncated q-expansions: eta products, E4, Delta, j and the level-11 newform.

A ``QSeries`` stores integer coefficients for the exponents
``lead_exp .. lead_exp + order``; everything above is unknown.  Constructors
take ``order`` as the highest exponent to compute (so ``newform_level11(7)``
knows c_1..c_7).
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import Mapping

from .errors import AccuracyError, DomainError, UsageError
from .modular_group import (
    GroupElement2x2,
    HalfPlanePoint,
    act,
    automorphy_factor,
    gamma0_member,
)

DEFAULT_ORDER = 256
MIN_IM = 0.2


@dataclass(frozen=True)
class QSeries:
    lead_exp: int
    coeffs: tuple[int, ...]
    # (d, r_d) pairs when the series is an eta product; lets evaluation use
    # eta's own transformation law near the real axis.
    eta_spec: tuple[tuple[int, int], ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        if not coeffs:
            raise UsageError("a series needs at least one coefficient")
        lead = self.lead_exp
        # normalize so the stored leading coefficient is nonzero
        k = next((i for i, c in enumerate(coeffs) if c), None)
        if k:
            lead += k
            coeffs = coeffs[k:]
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "lead_exp", lead)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def precision(self) -> int:
        """First exponent whose coefficient is unknown."""
        return self.lead_exp + len(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def coefficient(self, n: int) -> int:
        if n >= self.precision:
            raise UsageError(f"coefficient of q^{n} is beyond the truncation q^{self.precision - 1}")
        if n < self.lead_exp:
            return 0
        return self.coeffs[n - self.lead_exp]

    __getitem__ = coefficient

    def truncate(self, top: int) -> QSeries:
        """Keep exponents <= top."""
        keep = top - self.lead_exp + 1
        if keep < 1:
            raise UsageError("truncation would drop every known coefficient")
        return QSeries(self.lead_exp, self.coeffs[:keep], self.eta_spec)

    @classmethod
    def monomial(cls, exp: int, precision: int, c: int = 1) -> QSeries:
        return cls(exp, (c,) + (0,) * max(precision - exp - 1, 0))

    # -- ring operations
    def __add__(self, other: QSeries) -> QSeries:
        lead = min(self.lead_exp, other.lead_exp)
        prec = min(self.precision, other.precision)
        if prec <= lead:
            raise UsageError("sum has no known coefficients")
        out = [0] * (prec - lead)
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                e = s.lead_exp + i
                if e < prec:
                    out[e - lead] += c
        return QSeries(lead, tuple(out))

    def __neg__(self) -> QSeries:
        return QSeries(self.lead_exp, tuple(-c for c in self.coeffs))

    def __sub__(self, other: QSeries) -> QSeries:
        return self + (-other)

    def scale(self, c: int) -> QSeries:
        return QSeries(self.lead_exp, tuple(c * a for a in self.coeffs))

    def __mul__(self, other: QSeries) -> QSeries:
        n = min(self.order, other.order) + 1
        a, b = self.coeffs[:n], other.coeffs[:n]
        out = [0] * n
        for i, x in enumerate(a):
            if x:
                for j in range(n - i):
                    out[i + j] += x * b[j]
        return QSeries(self.lead_exp + other.lead_exp, tuple(out))

    def invert(self) -> QSeries:
        lead = self.coeffs[0]
        if lead not in (1, -1):
            raise DomainError(f"leading coefficient {lead} is not a unit in Z[[q]]")
        a = self.coeffs
        n = len(a)
        b = [0] * n
        b[0] = lead  # 1/lead == lead for a unit
        for k in range(1, n):
            acc = 0
            for i in range(1, k + 1):
                acc += a[i] * b[k - i]
            b[k] = -acc * lead
        return QSeries(-self.lead_exp, tuple(b))

    def __pow__(self, k: int) -> QSeries:
        if k < 0:
            return self.invert() ** (-k)
        result = QSeries(0, (1,) + (0,) * self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- serialization
    def to_json(self) -> str:
        return json.dumps({"leadExp": self.lead_exp, "coeffs": list(self.coeffs)})

    @classmethod
    def from_json(cls, text: str) -> QSeries:
        data = json.loads(text)
        return cls(int(data["leadExp"]), tuple(int(c) for c in data["coeffs"]))

    def format(self, terms: int = 8) -> str:
        """Human-readable form of the first ``terms`` nonzero terms."""
        parts: list[str] = []
        for i, c in enumerate(self.coeffs):
            if len(parts) >= terms:
                break
            if not c:
                continue
            e = self.lead_exp + i
            mono = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag} {mono}")
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts) if parts else "0"

    def __str__(self):
        return self.format()


def series_ring_ops(f: QSeries, g: QSeries | None, op: str, k: int | None = None) -> QSeries:
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "pow":
        return f**k
    if op == "invert":
        return f.invert()
    raise UsageError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# Eta products


def euler_function(top: int, step: int = 1) -> list[int]:
    """Coefficients of prod_{n>=1} (1 - q^{step n}) through q^top.

    Pentagonal numbers: sum_k (-1)^k q^{step k(3k-1)/2}, k over all integers.
    """
    out = [0] * (top + 1)
    k = 0
    while True:
        hit = False
        for kk in ((k, -k) if k else (0,)):
            e = step * kk * (3 * kk - 1) // 2
            if e <= top:
                out[e] += -1 if kk % 2 else 1
                hit = True
        if not hit:
            break
        k += 1
    return out


def naive_euler_product(top: int, exponents: Mapping[int, int]) -> list[int]:
    """prod_d prod_{n>=1} (1 - q^{dn})^{r_d} by repeated multiplication (oracle)."""
    out = [1] + [0] * top
    for d, r in exponents.items():
        for n in range(1, top // d + 1):
            e = d * n
            for _ in range(abs(r)):
                if r > 0:
                    for i in range(top, e - 1, -1):
                        out[i] -= out[i - e]
                else:
                    for i in range(e, top + 1):
                        out[i] += out[i - e]
    return out


def eta_product(spec: Mapping[int, int], order: int = DEFAULT_ORDER) -> QSeries:
    """prod_d eta(d z)^{r_d} through q^order.

    The q^{sum d r_d / 24} prefactor must be an integral power of q.
    """
    if not spec:
        raise UsageError("empty eta-product specification")
    if any(d < 1 for d in spec):
        raise UsageError("eta-product levels must be >= 1")
    weight24 = sum(d * r for d, r in spec.items())
    if weight24 % 24:
        raise DomainError(f"prefactor q^({weight24}/24) is not an integral power of q")
    lead = weight24 // 24
    top = order - lead  # highest exponent needed from the product part
    if top < 0:
        raise UsageError(f"order {order} is below the leading exponent {lead}")
    result = QSeries(0, (1,) + (0,) * top)
    for d, r in sorted(spec.items()):
        if r:
            result = result * QSeries(0, tuple(euler_function(top, d))) ** r
    return QSeries(lead, result.coeffs, tuple(sorted(spec.items())))


def delta(order: int = DEFAULT_ORDER) -> QSeries:
    return eta_product({1: 24}, order)


def sigma(n: int, k: int) -> int:
    """Sum of k-th powers of the divisors of n."""
    total = 0
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            total += d**k
            if d * d != n:
                total += (n // d) ** k
    return total


def eisenstein_e4(order: int = DEFAULT_ORDER) -> QSeries:
    if order < 0:
        raise UsageError("order must be >= 0")
    return QSeries(0, (1,) + tuple(240 * sigma(n, 3) for n in range(1, order + 1)))


def j_invariant(order: int = DEFAULT_ORDER) -> QSeries:
    """E4^3 / Delta through q^order."""
    if order < 0:
        raise UsageError("order must be >= 0")
    e4 = eisenstein_e4(order + 1)
    return (e4**3 * delta(order + 2).invert()).truncate(order)


def newform_level11(order: int = DEFAULT_ORDER) -> QSeries:
    """eta(z)^2 eta(11z)^2, the normalized weight-2 cusp form of level 11."""
    if order < 1:
        raise UsageError("order must be >= 1")
    return eta_product({1: 2, 11: 2}, order)


# ---------------------------------------------------------------------------
# Numerical evaluation


@dataclass(frozen=True)
class Evaluation:
    value: complex
    tail_bound: float
    method: str = "q-series"


def _q(z: complex) -> complex:
    return cmath.exp(2j * cmath.pi * z)


def evaluate_at(f: QSeries, z: HalfPlanePoint, growth_cap: float | None = 2.0,
                growth_exponent: float = 1.5, min_im: float = MIN_IM) -> Evaluation:
    """sum c_n q^n at q = e^{2 pi i z}, with a crude bound on the omitted tail.

    With ``growth_cap`` C the tail bound assumes |c_n| <= C n^growth_exponent
    for n >= 1 and a coefficient above the cap raises ``AccuracyError``.
    ``growth_cap=None`` disables the cap (needed for j) and uses
    |c_last| |q|^last / (1 - |q|).  Eta products may be evaluated below
    ``min_im`` via eta's transformation law.
    """
    w = complex(z)
    if z.im < min_im:
        if f.eta_spec is not None:
            return Evaluation(eta_product_value(f.eta_spec, w), 0.0, "eta-transform")
        raise AccuracyError(f"Im z = {z.im} is below {min_im}; the truncated series is unreliable")
    q = _q(w)
    aq = abs(q)
    if growth_cap is not None:
        for i, c in enumerate(f.coeffs):
            n = f.lead_exp + i
            if n >= 1 and abs(c) > growth_cap * n**growth_exponent:
                raise AccuracyError(f"|c_{n}| = {abs(c)} exceeds the growth cap {growth_cap} n^{growth_exponent}")
    value = 0j
    qn = q**f.lead_exp
    for c in f.coeffs:
        if c:
            value += c * qn
        qn *= q
    last = f.precision - 1
    if growth_cap is not None:
        # sum_{n > last} C n^e |q|^n, bounded by the first term times a geometric factor
        n = last + 1
        ratio = aq * ((n + 1) / n) ** growth_exponent
        tail = growth_cap * n**growth_exponent * aq**n / (1 - ratio) if ratio < 1 else math.inf
    else:
        tail = abs(f.coeffs[-1]) * aq**last / (1 - aq)
    return Evaluation(value, tail)


def eta_value(tau: complex) -> complex:
    """Dedekind eta at tau in H.

    Moves tau into the fundamental domain with eta(tau + n) = e^{pi i n/12}
    eta(tau) and eta(-1/tau) = sqrt(-i tau) eta(tau), then sums the
    pentagonal series, where |q| <= e^{-pi sqrt 3}.
    """
    if tau.imag <= 0:
        raise DomainError("eta needs Im tau > 0")
    factor = 1 + 0j
    while True:
        n = round(tau.real)
        factor *= cmath.exp(1j * cmath.pi * n / 12)
        tau -= n
        if abs(tau) < 1 - 1e-15:
            factor *= cmath.sqrt(1j / tau)
            tau = -1 / tau
        else:
            break
    q = _q(tau)
    total = 1 + 0j
    k = 1
    while True:
        t1 = q ** (k * (3 * k - 1) // 2)
        t2 = q ** (k * (3 * k + 1) // 2)
        term = (t1 + t2) * (-1 if k % 2 else 1)
        total += term
        if abs(t1) < 1e-18:
            break
        k += 1
    return factor * cmath.exp(2j * cmath.pi * tau / 24) * total


def eta_product_value(spec, z: complex) -> complex:
    value = 1 + 0j
    for d, r in spec:
        value *= eta_value(d * z) ** r
    return value


@dataclass(frozen=True)
class TransformReport:
    g: GroupElement2x2
    z: HalfPlanePoint
    lhs: complex
    rhs: complex
    tol: float
    weight: int
    methods: tuple[str, str]

    @property
    def error(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def passed(self) -> bool:
        return self.error < self.tol

    def as_dict(self) -> dict:
        return {
            "g": str(self.g),
            "z": [self.z.re, self.z.im],
            "lhs": [self.lhs.real, self.lhs.imag],
            "rhs": [self.rhs.real, self.rhs.imag],
            "error": self.error,
            "tol": self.tol,
            "weight": self.weight,
            "methods": list(self.methods),
            "passed": self.passed,
        }


def check_weight2_transform(f: QSeries, g: GroupElement2x2, N: int, z: HalfPlanePoint,
                            tol: float = 1e-6, weight: int = 2, **eval_kwargs) -> TransformReport:
    """Compare f(gz) with (cz + d)^weight f(z)."""
    if not gamma0_member(g, N):
        raise UsageError(f"{g} is not in Gamma_0({N})")
    gz = act(g, z)
    left = evaluate_at(f, gz, **eval_kwargs)
    right = evaluate_at(f, z, **eval_kwargs)
    rhs = automorphy_factor(g, z) ** weight * right.value
    return TransformReport(g, z, left.value, rhs, tol, weight, (left.method, right.method))


def automorphic_check(f: QSeries, g: GroupElement2x2, z: HalfPlanePoint,
                      tol: float = 1e-4, **eval_kwargs) -> TransformReport:
    """Weight-0 invariance f(gz) = f(z); j is level 1, so any g in SL2(Z)."""
    eval_kwargs.setdefault("growth_cap", None)
    return check_weight2_transform(f, g, 1, z, tol=tol, weight=0, **eval_kwargs)
