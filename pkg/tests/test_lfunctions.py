import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modcheck.elliptic import TEST_CURVES, WeierstrassCurve, count_points, reduce_mod_p
from modcheck.errors import CoverageError, DomainError, UsageError
from modcheck.lfunctions import (
    UNCERTIFIED,
    DirichletCoefficients,
    LocalFactor,
    LQuery,
    compare_sequences,
    curve_l_value,
    dirichlet_from_euler,
    eichler_shimura_check,
    frobenius_power_sums,
    l_value,
    local_factors,
    local_zeta_from_counts,
    local_zeta_from_traces,
    local_zeta_rational,
    riemann_zeta_partial,
    verify_rationality,
    weil_zeta_rational,
)
from modcheck.numtheory import primes_up_to
from modcheck.qseries import newform_level11

E32 = WeierstrassCurve(0, 0, 0, -1, 0)
E11 = WeierstrassCurve(0, -1, 1, -10, -20)


def exp_oracle(log_coeffs, order):
    """exp of sum l_k u^k via the power series sum_j L^j / j!, exact."""
    result = [Fraction(0)] * (order + 1)
    power = [Fraction(1)] + [Fraction(0)] * order
    fact = 1
    for j in range(order + 1):
        if j:
            fact *= j
            new = [Fraction(0)] * (order + 1)
            for a, x in enumerate(power):
                if x:
                    for b in range(1, order + 1 - a):
                        new[a + b] += x * log_coeffs[b]
            power = new
        for k in range(order + 1):
            result[k] += power[k] / fact
    return result


def test_local_zeta_from_counts_examples():
    z = local_zeta_from_counts([8, 32], 2)
    assert list(z.coefficients) == [1, 8, 48]
    assert list(local_zeta_from_counts([1], 1).coefficients) == [1, 1]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(1, 60), min_size=1, max_size=6))
def test_local_zeta_from_counts_matches_exp_oracle(counts):
    m = len(counts)
    logs = [Fraction(0)] + [Fraction(c, n) for n, c in enumerate(counts, start=1)]
    z = local_zeta_from_counts(counts, m)
    assert list(z.coefficients) == exp_oracle(logs, m)
    assert z[1] == counts[0]
    assert z.order == m and len(z.coefficients) == m + 1


def test_local_zeta_rational_examples():
    assert list(local_zeta_rational(LocalFactor(5, -2), 2).coefficients) == [1, -2, -1]
    assert list(local_zeta_rational(LocalFactor(7, 0), 4).coefficients) == [1, 0, -7, 0, 49]


def test_rational_series_times_denominator_is_one():
    for p in (2, 3, 5, 7, 11):
        for ap in range(-int(2 * math.sqrt(p)), int(2 * math.sqrt(p)) + 1):
            z = local_zeta_rational(LocalFactor(p, ap), 8).coefficients
            den = [1, -ap, p]
            prod = [sum(den[i] * z[k - i] for i in range(3) if 0 <= k - i) for k in range(9)]
            assert prod == [1] + [0] * 8


def test_counts_series_matches_rational_only_as_weil_form():
    # exp(8u + 16u^2) and 1/(1 + 2u + 5u^2) differ already at u^1
    f = LocalFactor(5, -2)
    z_counts = local_zeta_from_counts([8, 32], 2)
    assert z_counts != local_zeta_rational(f, 2)
    assert z_counts == weil_zeta_rational(f, 2)


def test_frobenius_power_sums_series_is_rational_form():
    sums = frobenius_power_sums([8, 32], 5)
    assert sums == [-2, -6]  # alpha + beta, alpha^2 + beta^2 = 4 - 10
    assert local_zeta_from_traces(sums, 2) == local_zeta_rational(LocalFactor(5, -2), 2)


def test_verify_rationality_examples():
    r = verify_rationality(E32, 5, 2)
    assert r.passed and r.counts == [8, 32]
    r = verify_rationality(E32, 3, 3)
    assert r.passed and r.counts == [4, 16, 28]
    with pytest.raises(UsageError):
        verify_rationality(E11, 11, 1)


def test_spec_agreement_example_p3():
    # a_3 = 0 for y^2 = x^3 - x; the spec lists counts (4, 16)
    rat = local_zeta_rational(LocalFactor(3, 0), 2)
    assert list(rat.coefficients) == [1, 0, -3]
    assert list(local_zeta_from_counts([4, 16], 2).coefficients) == [1, 4, 16]


@pytest.mark.parametrize("E", [E32, E11, TEST_CURVES["15a1"], TEST_CURVES["37a1"]])
def test_rationality_identities_small_primes(E):
    for p in primes_up_to(13):
        if not reduce_mod_p(E, p).good_reduction:
            continue
        depth = int(math.log(10**3, p))
        r = verify_rationality(E, p, depth)
        assert r.closed_form_match and r.trace_match, (p, r.as_dict())
        assert not r.literal_match


def test_rationality_report_serializes():
    d = verify_rationality(E32, 5, 2).as_dict()
    json.dumps(d)
    assert d["exponential"] == ["1", "8", "48"]
    assert d["rational"] == ["1", "-2", "-1"]
    assert d["passed"] and not d["literal_match"]


def test_local_factor_invariants():
    with pytest.raises(DomainError):
        LocalFactor(5, 5)
    with pytest.raises(DomainError):
        LocalFactor(11, 2, good=False)
    assert LocalFactor(11, 1, good=False).euler_factor(2) == pytest.approx(1 / (1 - 1 / 121))


def test_dirichlet_examples():
    factors = local_factors(E11, 50)
    a = dirichlet_from_euler(factors, 50)
    assert a[1] == 1 and a[2] == -2 and a[3] == -1
    assert a[4] == 2 and a[6] == 2
    zero = dirichlet_from_euler([LocalFactor(p, 0) for p in primes_up_to(30)], 30)
    for p in primes_up_to(5):
        assert zero[p * p] == -p
    with pytest.raises(CoverageError, match="7"):
        dirichlet_from_euler([LocalFactor(p, 0) for p in (2, 3, 5)], 10)


def test_dirichlet_matches_newform():
    a = dirichlet_from_euler(local_factors(E11, 300), 300)
    f = newform_level11(300)
    assert a.as_list() == [f.coefficient(n) for n in range(1, 301)]


def test_dirichlet_multiplicative():
    for name in ("11a1", "32a2", "15a1"):
        a = dirichlet_from_euler(local_factors(TEST_CURVES[name], 400), 400)
        assert a.is_multiplicative()
    assert not DirichletCoefficients([1, 1, 1, 1, 1, 2]).is_multiplicative()
    with pytest.raises(UsageError):
        DirichletCoefficients([2, 1])


def test_dirichlet_matches_series_expansion_oracle():
    # Oracle: multiply the truncated Dirichlet series of every local factor.
    N = 120
    factors = local_factors(E11, N)
    acc = [0] * (N + 1)
    acc[1] = 1
    for f in factors:
        p = f.p
        # local coefficients b_{p^k}
        local = {1: 1}
        z = local_zeta_rational(f, 10).coefficients if f.good else [f.ap**k for k in range(11)]
        k = 1
        while p**k <= N:
            local[p**k] = int(z[k])
            k += 1
        new = [0] * (N + 1)
        for n in range(1, N + 1):
            if acc[n]:
                for m, b in local.items():
                    if n * m <= N:
                        new[n * m] += acc[n] * b
        acc = new
    assert dirichlet_from_euler(factors, N).as_list() == acc[1:]


def test_l_value_examples():
    ones = DirichletCoefficients([1] * 1000)
    v = l_value(LQuery(2.0, 1000, "dirichlet_sum"), coeffs=ones)
    assert abs(v.value - math.pi**2 / 6) < 1e-3 and v.warning is None
    v = l_value(LQuery(2.0, 2), factors=[LocalFactor(2, -2)])
    assert v.value == pytest.approx(1 / 1.625, rel=1e-15)


def test_l_value_warning_and_errors():
    v = curve_l_value(E11, LQuery(1.0, 100))
    assert v.warning == UNCERTIFIED and math.isfinite(v.value)
    with pytest.raises(UsageError):
        LQuery(2.0, 1)
    with pytest.raises(UsageError):
        LQuery(2.0, 10, "magic")
    with pytest.raises(CoverageError):
        l_value(LQuery(2.0, 50, "dirichlet_sum"), coeffs=DirichletCoefficients([1] * 10))


def test_l_value_deterministic():
    q = LQuery(2.0, 500)
    assert curve_l_value(E11, q).value == curve_l_value(E11, q).value


def test_methods_gap_shrinks_like_inverse_cutoff():
    # Strict decrease on every doubling does not hold (the gap changes sign
    # and rises from 1000 to 4000); the envelope gap * cutoff stays bounded.
    factors = local_factors(E11, 8000)

    def gap(c):
        prod = l_value(LQuery(2.0, c), factors=factors).value
        return abs(prod - l_value(LQuery(2.0, c, "dirichlet_sum"), factors=factors).value)

    for start in (125, 1250):
        c = start
        while c <= 8000:
            assert gap(c) * c < 0.25, c
            c *= 2
    assert gap(8000) < gap(1250) / 10
    assert gap(5000) < gap(2500) < gap(1250)


def test_riemann_zeta_partial():
    assert riemann_zeta_partial(2, 10) == pytest.approx(1.5497677311665408)
    assert riemann_zeta_partial(4, 1) == 1.0
    prev = 0.0
    for N in (1, 10, 100, 1000):
        cur = riemann_zeta_partial(2, N)
        assert prev < cur <= math.pi**2 / 6 + 1e-12
        prev = cur
    with pytest.raises(DomainError):
        riemann_zeta_partial(1, 10)


def test_eichler_shimura_examples():
    f = newform_level11(60)
    rep = eichler_shimura_check(E11, f, 50)
    assert rep.verdict and rep.first_failure is None
    row2 = next(r for r in rep.rows if r.prime == 2)
    assert (row2.ap, row2.cp, row2.match) == (-2, -2, True)
    assert [r.prime for r in rep.bad_rows] == [11]
    bad = eichler_shimura_check(E32, f, 50)
    assert not bad.verdict and bad.first_failure is not None and bad.first_failure <= 5
    with pytest.raises(UsageError):
        eichler_shimura_check(E11, newform_level11(20), 50)


def test_eichler_shimura_serialization():
    rep = eichler_shimura_check(E32, newform_level11(30), 30)
    d = json.loads(rep.to_json())
    assert set(d["good"][0]) == {"prime", "ap", "cp", "match"}
    assert d["verdict"] is False and d["first_failure"] == 3
    text = rep.to_text()
    assert "first failing prime 3" in text and text.splitlines()[1].split() == ["prime", "ap", "cp", "match"]


@settings(max_examples=100, deadline=None)
@given(st.dictionaries(st.integers(2, 40), st.integers(-5, 5)),
       st.dictionaries(st.integers(2, 40), st.integers(-5, 5)))
def test_compare_sequences_symmetric(x, y):
    v1, k1 = compare_sequences(x, y)
    v2, k2 = compare_sequences(y, x)
    assert v1 == v2 and k1 == k2


def test_power_sums_from_counts_consistent():
    red = reduce_mod_p(E11, 3)
    counts = [count_points(red, n) for n in range(1, 5)]
    ap = 4 - counts[0]
    s = frobenius_power_sums(counts, 3)
    # Newton: s_n = a_p s_{n-1} - p s_{n-2}
    assert s[1] == ap * s[0] - 2 * 3
    for n in range(2, 4):
        assert s[n] == ap * s[n - 1] - 3 * s[n - 2]
