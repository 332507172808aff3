import cmath
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modcheck.errors import AccuracyError, DomainError, UsageError
from modcheck.modular_group import GroupElement2x2, HalfPlanePoint, S, T
from modcheck.numtheory import divisors, primes_up_to
from modcheck.qseries import (
    QSeries,
    automorphic_check,
    check_weight2_transform,
    delta,
    eisenstein_e4,
    eta_product,
    eta_product_value,
    eta_value,
    euler_function,
    evaluate_at,
    j_invariant,
    naive_euler_product,
    newform_level11,
    series_ring_ops,
)

TAU = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]
J = [1, 744, 196884, 21493760, 864299970, 20245856256, 333202640600]
# a_p of the conductor-11 curve, from the standard tables
AP11 = {2: -2, 3: -1, 5: 1, 7: -2, 11: 1, 13: 4, 17: -2, 19: 0, 23: -1, 29: 0,
        31: 7, 37: 3, 41: -8, 43: -6, 47: 8}

small_series = st.builds(
    lambda lead, cs: QSeries(lead, tuple(cs)),
    st.integers(-2, 3), st.lists(st.integers(-9, 9), min_size=6, max_size=6).filter(lambda c: c[0] != 0))


def test_ring_examples():
    one_minus_q = QSeries(0, (1, -1, 0, 0, 0, 0))
    geometric = QSeries(0, (1,) * 6)
    assert one_minus_q * geometric == QSeries(0, (1, 0, 0, 0, 0, 0))
    assert QSeries.monomial(2, 8) * QSeries.monomial(3, 8) == QSeries(5, (1,) + (0,) * 4)
    inv = QSeries(1, (1, 5, 7)).invert()
    assert inv.lead_exp == -1
    assert series_ring_ops(one_minus_q, None, "invert") == geometric
    with pytest.raises(DomainError):
        QSeries(0, (2, 1)).invert()
    with pytest.raises(UsageError):
        series_ring_ops(one_minus_q, None, "sqrt")


@settings(max_examples=100, deadline=None)
@given(small_series, small_series, small_series)
def test_mul_associative_commutative(f, g, h):
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


@settings(max_examples=100, deadline=None)
@given(small_series.filter(lambda f: abs(f.coeffs[0]) == 1), st.integers(0, 4))
def test_invert_and_pow(f, k):
    one = QSeries(0, (1,) + (0,) * f.order)
    assert f * f.invert() == one
    assert f**k == (one if k == 0 else f ** (k - 1) * f)
    assert f**-k == (f**k).invert()


def test_coefficient_access():
    f = newform_level11(7)
    assert [f[n] for n in range(1, 8)] == [1, -2, -1, 2, 1, 2, -2]
    assert f[0] == 0 and f[-5] == 0
    with pytest.raises(UsageError):
        f[8]


def test_euler_function_matches_naive():
    for step in (1, 2, 11):
        assert euler_function(200, step) == naive_euler_product(200, {step: 1})


@pytest.mark.parametrize("spec", [{1: 24}, {1: 2, 11: 2}, {1: 8, 2: 8}, {1: 4, 5: 4}, {2: 12}, {1: -1, 2: 2, 4: 1, 3: 0}])
def test_eta_product_matches_naive(spec):
    weight24 = sum(d * r for d, r in spec.items())
    if weight24 % 24:
        with pytest.raises(DomainError):
            eta_product(spec, 20)
        return
    lead = weight24 // 24
    order = 200
    f = eta_product(spec, order)
    naive = naive_euler_product(order - lead, spec)
    assert [f[n] for n in range(lead, order + 1)] == naive


def test_eta_product_examples():
    assert [delta(10)[n] for n in range(1, 11)] == TAU
    assert [newform_level11(7)[n] for n in range(1, 8)] == [1, -2, -1, 2, 1, 2, -2]
    with pytest.raises(DomainError):
        eta_product({1: 1}, 10)


def test_eisenstein_e4():
    e4 = eisenstein_e4(5)
    assert (e4[0], e4[1], e4[2]) == (1, 240, 2160)
    assert e4[3] == 240 * 28


def test_j_invariant():
    j = j_invariant(5)
    assert j.lead_exp == -1
    assert [j[n] for n in range(-1, 6)] == J
    big = j_invariant(64)
    assert all(big[n] > 0 for n in range(-1, 65))
    assert big.format(4) == "q^-1 + 744 + 196884 q + 21493760 q^2"


def test_newform_matches_known_ap():
    f = newform_level11(50)
    for p, ap in AP11.items():
        assert f[p] == ap


def test_newform_hecke_relation():
    f = newform_level11(2500)
    for p in primes_up_to(50):
        if p != 11:
            assert f[p * p] == f[p] ** 2 - p
    assert f[121] == f[11] ** 2


def test_newform_coefficient_growth():
    f = newform_level11(1000)
    for n in range(1, 1001):
        assert abs(f[n]) <= 2 * math.sqrt(n) * len(divisors(n))


def test_evaluate_examples():
    i = HalfPlanePoint(0, 1)
    assert evaluate_at(QSeries(0, (0, 0, 0)), i).value == 0
    v = evaluate_at(QSeries(1, (1,)), i).value
    assert abs(v - math.exp(-2 * math.pi)) < 1e-15
    assert abs(v - 0.0018674) < 1e-7
    a = evaluate_at(newform_level11(300), i).value
    b = evaluate_at(newform_level11(400), i).value
    assert abs(a - b) < 1e-12


def test_evaluate_accuracy_errors():
    with pytest.raises(AccuracyError):
        evaluate_at(j_invariant(30), HalfPlanePoint(0, 0.1), growth_cap=None)
    with pytest.raises(AccuracyError):
        evaluate_at(QSeries(1, (1, 1000)), HalfPlanePoint(0, 1))


def test_tail_bound_covers_truncation_error():
    f = newform_level11(400)
    z = HalfPlanePoint(0.3, 0.4)
    exact = evaluate_at(f, z).value
    short = evaluate_at(f.truncate(40), z)
    assert abs(short.value - exact) <= short.tail_bound


def test_eta_value_against_series():
    rng = random.Random(1)
    for _ in range(20):
        z = complex(rng.uniform(-1, 1), rng.uniform(0.5, 2))
        direct = evaluate_at(eta_product({1: 24}, 200), HalfPlanePoint.from_complex(z), growth_cap=None).value
        assert abs(eta_value(z) ** 24 - direct) < 1e-12
        f = newform_level11(400)
        assert abs(eta_product_value(f.eta_spec, z)
                   - evaluate_at(f, HalfPlanePoint.from_complex(z), min_im=0.0).value) < 1e-12


def test_eta_value_transformation():
    for tau in (0.1 + 0.9j, -0.4 + 1.3j, 0.05 + 0.3j):
        assert abs(eta_value(-1 / tau) - cmath.sqrt(-1j * tau) * eta_value(tau)) < 1e-12
        assert abs(eta_value(tau + 1) - cmath.exp(1j * cmath.pi / 12) * eta_value(tau)) < 1e-12


def test_weight2_examples():
    f = newform_level11(400)
    z = HalfPlanePoint(0.1, 0.8)
    r = check_weight2_transform(f, GroupElement2x2.identity(), 11, z)
    assert r.lhs == r.rhs
    r = check_weight2_transform(f, T, 11, z, tol=1e-12)
    assert r.passed
    r = check_weight2_transform(f, GroupElement2x2(1, 0, 11, 1), 11, z)
    assert r.passed and r.methods == ("eta-transform", "q-series")
    with pytest.raises(UsageError):
        check_weight2_transform(f, S, 11, z)


def test_weight2_fails_off_level():
    # (1,0,1,1) is not in Gamma_0(11); the weight-2 law must visibly fail
    f = newform_level11(400)
    g = GroupElement2x2(1, 0, 1, 1)
    r = check_weight2_transform(f, g, 1, HalfPlanePoint(0.1, 1.0))
    assert not r.passed


def test_automorphic_examples():
    j = j_invariant(80)
    assert automorphic_check(j, T, HalfPlanePoint(0.2, 1.1), tol=1e-9).passed
    r = automorphic_check(j, S, HalfPlanePoint(0, 2))
    assert r.passed
    r = automorphic_check(j, S, HalfPlanePoint(0, 1))
    assert r.error < 1e-9
    assert r.as_dict()["weight"] == 0


def test_json_round_trip():
    for f in (j_invariant(10), newform_level11(30), QSeries(3, (-1, 0, 4))):
        g = QSeries.from_json(f.to_json())
        assert g == f
    assert QSeries.from_json('{"leadExp": -1, "coeffs": [1, 744]}').format() == "q^-1 + 744"
